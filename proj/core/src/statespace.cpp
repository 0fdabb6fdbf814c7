#include "aggsync/statespace.hpp"

#include <algorithm>
#include <cmath>

namespace aggsync {

namespace {

constexpr double kZeroSumTol = 1e-12;
constexpr double kMinVectorNorm = 1e-6;

double unitarity_defect(const CMatrix& m) {
    const auto d = m.rows();
    return (m * m.adjoint() - CMatrix::Identity(d, d)).norm();
}

}  // namespace

PhaseEnsemble::PhaseEnsemble(RVector phases) : phases_(std::move(phases)) {
    if (phases_.size() < 1) {
        throw DimensionError("PhaseEnsemble: need at least one phase");
    }
}

PhaseEnsemble PhaseEnsemble::zero_sum(RVector phases) {
    PhaseEnsemble e(std::move(phases));
    if (std::abs(e.sum()) > kZeroSumTol) {
        throw StructureError("PhaseEnsemble: zero-sum mode requires |sum theta_j| <= 1e-12");
    }
    return e;
}

double PhaseEnsemble::diameter() const {
    return phases_.maxCoeff() - phases_.minCoeff();
}

FrequencySpectrum::FrequencySpectrum(RVector values) : values_(std::move(values)) {
    if (values_.size() < 1) {
        throw DimensionError("FrequencySpectrum: need at least one frequency");
    }
    mean_shift_ = values_.mean();
    values_.array() -= mean_shift_;
    diameter_ = values_.maxCoeff() - values_.minCoeff();
}

SphereEnsemble::SphereEnsemble(SphereFlavor flavor, int dimension,
                               std::vector<CVector> states, double tol_manifold)
    : flavor_(flavor), dimension_(dimension), states_(std::move(states)) {
    if (dimension_ < 1 || states_.empty()) {
        throw DimensionError("SphereEnsemble: empty ensemble or non-positive dimension");
    }
    for (const auto& s : states_) {
        if (s.size() != dimension_) {
            throw DimensionError("SphereEnsemble: state length does not match dimension");
        }
        if (std::abs(s.norm() - 1.0) > tol_manifold) {
            throw StructureError("SphereEnsemble: state norm deviates from 1 beyond tolerance");
        }
        if (flavor_ == SphereFlavor::Real && s.imag().cwiseAbs().maxCoeff() > tol_manifold) {
            throw StructureError("SphereEnsemble: real flavor requires vanishing imaginary parts");
        }
    }
}

UnitaryEnsemble::UnitaryEnsemble(int dimension, std::vector<CMatrix> matrices,
                                 double tol_manifold)
    : dimension_(dimension), matrices_(std::move(matrices)) {
    if (dimension_ < 1 || matrices_.empty()) {
        throw DimensionError("UnitaryEnsemble: empty ensemble or non-positive dimension");
    }
    for (const auto& m : matrices_) {
        if (m.rows() != dimension_ || m.cols() != dimension_) {
            throw DimensionError("UnitaryEnsemble: matrix shape does not match dimension");
        }
        if (unitarity_defect(m) > tol_manifold) {
            throw StructureError("UnitaryEnsemble: ||U U^dagger - I||_F beyond tolerance");
        }
    }
}

Complex hermitian_inner(const CVector& u, const CVector& v) {
    if (u.size() != v.size()) {
        throw DimensionError("hermitian_inner: length mismatch");
    }
    Complex acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        acc += u[i] * std::conj(v[i]);
    }
    return acc;
}

CVector renormalize_vector(const CVector& v) {
    const double n = v.norm();
    if (n < kMinVectorNorm) {
        throw DegenerateStateError("renormalize: state norm below 1e-6");
    }
    return v / n;
}

SphereEnsemble renormalize(const SphereEnsemble& ensemble) {
    std::vector<CVector> out;
    out.reserve(ensemble.states().size());
    for (const auto& s : ensemble.states()) {
        out.push_back(renormalize_vector(s));
    }
    return SphereEnsemble(ensemble.flavor(), ensemble.dimension(), std::move(out));
}

CMatrix unitarize(const CMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("unitarize: matrix must be square");
    }
    Eigen::FullPivLU<CMatrix> lu(m);
    if (!lu.isInvertible()) {
        throw DegenerateStateError("unitarize: singular input");
    }
    if (unitarity_defect(m) >= 0.5) {
        throw StructureError("unitarize: input too far from the unitary group");
    }
    CMatrix x = m;
    for (int iter = 0; iter < 50; ++iter) {
        if (unitarity_defect(x) < 1e-13) {
            return x;
        }
        x = 0.5 * (x + x.adjoint().inverse());
    }
    if (unitarity_defect(x) < 1e-13) {
        return x;
    }
    throw NumericError("unitarize: Newton iteration did not converge in 50 steps");
}

GramMatrix gram(const SphereEnsemble& ensemble) {
    const int n = ensemble.size();
    GramMatrix g;
    g.flavor = GramFlavor::VectorInner;
    g.entries.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g.entries(i, j) = hermitian_inner(ensemble.state(i), ensemble.state(j));
        }
    }
    return g;
}

GramMatrix gram(const UnitaryEnsemble& ensemble) {
    const int n = ensemble.size();
    const int d = ensemble.dimension();
    GramMatrix g;
    g.flavor = GramFlavor::MatrixProduct;
    g.block_dim = d;
    g.entries.resize(n, n);
    g.blocks.reserve(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            CMatrix block = ensemble.matrix(i) * ensemble.matrix(j).adjoint();
            g.entries(i, j) = block.trace() / static_cast<double>(d);
            g.blocks.push_back(std::move(block));
        }
    }
    return g;
}

double geodesic_distance(const CVector& u, const CVector& v, double tol_manifold) {
    if (u.size() != v.size()) {
        throw DimensionError("geodesic_distance: length mismatch");
    }
    if (std::abs(u.norm() - 1.0) > tol_manifold || std::abs(v.norm() - 1.0) > tol_manifold) {
        throw StructureError("geodesic_distance: inputs must be unit vectors");
    }
    const double chord2 = (u - v).squaredNorm();
    const double c = std::clamp(1.0 - 0.5 * chord2, -1.0, 1.0);
    return std::acos(c);
}

}  // namespace aggsync
