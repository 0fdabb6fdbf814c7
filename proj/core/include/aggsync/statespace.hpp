#pragma once

// Core state representations for ensembles of coupled agents:
//   PhaseEnsemble     N real phases on R (never reduced mod 2pi)
//   FrequencySpectrum N scalar natural frequencies, zero-average by construction
//   SphereEnsemble    N unit vectors on S^{d-1} (real) or HS^{d-1} (complex)
//   UnitaryEnsemble   N unitary d x d matrices
//   GramMatrix        pairwise inner products h_ij = <s_i, s_j>
//
// Inner-product convention (conjugate-second): <u,v> = sum_i u^i conj(v^i).
// Geodesic distance on the unit sphere: arccos(1 - |u-v|^2 / 2), argument
// clamped to [-1,1] to absorb roundoff.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "aggsync/errors.hpp"

namespace aggsync {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kDefaultManifoldTol = 1e-9;

enum class SphereFlavor { Real, Complex };

// --------------------------------------------------------------------------
// Phases

class PhaseEnsemble {
  public:
    explicit PhaseEnsemble(RVector phases);
    // Validates |sum theta_j| <= 1e-12 at construction.
    static PhaseEnsemble zero_sum(RVector phases);

    int size() const { return static_cast<int>(phases_.size()); }
    const RVector& phases() const { return phases_; }
    double sum() const { return phases_.sum(); }
    double diameter() const;

  private:
    RVector phases_;
};

class FrequencySpectrum {
  public:
    // Mean is subtracted so that sum a_j = 0 holds exactly up to roundoff.
    // `mean_shift()` reports the amount removed (0 for already-centered data).
    explicit FrequencySpectrum(RVector values);

    int size() const { return static_cast<int>(values_.size()); }
    const RVector& values() const { return values_; }
    double diameter() const { return diameter_; }
    double mean_shift() const { return mean_shift_; }

  private:
    RVector values_;
    double diameter_ = 0.0;
    double mean_shift_ = 0.0;
};

// --------------------------------------------------------------------------
// Sphere / unitary ensembles

class SphereEnsemble {
  public:
    // Real-flavor states are stored with zero imaginary parts; all model
    // arithmetic preserves that exactly.
    SphereEnsemble(SphereFlavor flavor, int dimension, std::vector<CVector> states,
                   double tol_manifold = kDefaultManifoldTol);

    SphereFlavor flavor() const { return flavor_; }
    int dimension() const { return dimension_; }
    int size() const { return static_cast<int>(states_.size()); }
    const std::vector<CVector>& states() const { return states_; }
    const CVector& state(int j) const { return states_[static_cast<size_t>(j)]; }

  private:
    SphereFlavor flavor_;
    int dimension_;
    std::vector<CVector> states_;
};

class UnitaryEnsemble {
  public:
    UnitaryEnsemble(int dimension, std::vector<CMatrix> matrices,
                    double tol_manifold = kDefaultManifoldTol);

    int dimension() const { return dimension_; }
    int size() const { return static_cast<int>(matrices_.size()); }
    const std::vector<CMatrix>& matrices() const { return matrices_; }
    const CMatrix& matrix(int j) const { return matrices_[static_cast<size_t>(j)]; }

  private:
    int dimension_;
    std::vector<CMatrix> matrices_;
};

enum class GramFlavor { VectorInner, MatrixProduct };

// Pairwise Gram data. Vector flavor: h_ij = <s_i, s_j> with h_ji = conj(h_ij).
// Matrix flavor additionally keeps the full d x d blocks V_i V_j^dagger; the
// scalar entries are then the trace-normalized proxy tr(V_i V_j^dagger)/d.
struct GramMatrix {
    GramFlavor flavor = GramFlavor::VectorInner;
    CMatrix entries;                   // N x N
    std::vector<CMatrix> blocks;       // matrix flavor only: N*N blocks, row-major
    int block_dim = 0;

    const CMatrix& block(int i, int j) const {
        return blocks[static_cast<size_t>(i) * static_cast<size_t>(entries.rows()) +
                      static_cast<size_t>(j)];
    }
};

// --------------------------------------------------------------------------
// Operations

// <u,v> = sum_i u^i conj(v^i). Throws DimensionError on length mismatch.
Complex hermitian_inner(const CVector& u, const CVector& v);

// Projects every state back to unit norm. Throws DegenerateStateError if any
// state has norm below 1e-6.
SphereEnsemble renormalize(const SphereEnsemble& ensemble);
CVector renormalize_vector(const CVector& v);

// Polar factor via the Newton iteration M <- (M + (M^dagger)^{-1}) / 2,
// stopping at ||M M^dagger - I||_F < 1e-13 (at most 50 iterations). Requires
// ||M M^dagger - I||_F < 0.5 on entry.
CMatrix unitarize(const CMatrix& m);

GramMatrix gram(const SphereEnsemble& ensemble);
GramMatrix gram(const UnitaryEnsemble& ensemble);

// arccos(1 - |u-v|^2/2) in [0, pi]; both inputs must be unit vectors.
double geodesic_distance(const CVector& u, const CVector& v,
                         double tol_manifold = kDefaultManifoldTol);

}  // namespace aggsync
