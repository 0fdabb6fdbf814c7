#include "aggsync/models.hpp"

#include <cmath>

namespace aggsync {

namespace {

const Complex kI(0.0, 1.0);

Complex phase(double angle) { return Complex(std::cos(angle), std::sin(angle)); }

void require_same_count(size_t n_states, Eigen::Index n_a, const char* what) {
    if (static_cast<Eigen::Index>(n_states) != n_a) {
        throw DimensionError(std::string(what) + ": agent count mismatch");
    }
}

}  // namespace

bool is_primary_kind(ModelKind kind) {
    switch (kind) {
        case ModelKind::Kuramoto:
        case ModelKind::RealSphere:
        case ModelKind::ComplexSphere:
        case ModelKind::SchrodingerLohe:
        case ModelKind::LoheHermitianSphere:
        case ModelKind::LoheMatrix:
            return true;
        default:
            return false;
    }
}

bool is_reduced_kind(ModelKind kind) {
    return !is_primary_kind(kind);
}

ModelKind reduced_counterpart(ModelKind kind) {
    switch (kind) {
        case ModelKind::RealSphere:
        case ModelKind::ComplexSphere:
            return ModelKind::ReducedSphereZ;
        case ModelKind::SchrodingerLohe:
            return ModelKind::ReducedSlXi;
        case ModelKind::LoheHermitianSphere:
            return ModelKind::ReducedLhsXi;
        case ModelKind::LoheMatrix:
            return ModelKind::ReducedLmV;
        default:
            throw ConfigError("reduced_counterpart: kind has no reduction");
    }
}

Coupling::Coupling(double k, double k1) : kappa(k), kappa1(k1) {
    if (kappa < 0.0 || kappa1 < 0.0) {
        throw ConfigError("Coupling: strengths must be non-negative");
    }
}

PhaseVec rhs_kuramoto(const PhaseVec& theta, const RVector& a, double kappa) {
    const auto n = theta.size();
    if (a.size() != n) {
        throw DimensionError("rhs_kuramoto: agent count mismatch");
    }
    PhaseVec out(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            acc += std::sin(theta[k] - theta[j]);
        }
        out[j] = a[j] + (kappa / static_cast<double>(n)) * acc;
    }
    return out;
}

VectorStates rhs_primary(ModelKind kind, const VectorStates& states, const RVector& a,
                         const Coupling& c) {
    require_same_count(states.size(), a.size(), "rhs_primary");
    const int n = static_cast<int>(states.size());
    const double inv_n = 1.0 / n;
    VectorStates out(states.size());
    switch (kind) {
        case ModelKind::ComplexSphere: {
            for (int j = 0; j < n; ++j) {
                CVector t = kI * a[j] * states[j];
                for (int k = 0; k < n; ++k) {
                    const double re = hermitian_inner(states[k], states[j]).real();
                    t += (c.kappa * inv_n) * (states[k] - re * states[j]);
                }
                out[j] = std::move(t);
            }
            return out;
        }
        case ModelKind::SchrodingerLohe: {
            for (int j = 0; j < n; ++j) {
                CVector t = kI * a[j] * states[j];
                for (int k = 0; k < n; ++k) {
                    const Complex h = hermitian_inner(states[j], states[k]);
                    t += (c.kappa * inv_n) * (states[k] - h * states[j]);
                }
                out[j] = std::move(t);
            }
            return out;
        }
        case ModelKind::LoheHermitianSphere: {
            for (int j = 0; j < n; ++j) {
                CVector t = kI * a[j] * states[j];
                for (int k = 0; k < n; ++k) {
                    const Complex hjk = hermitian_inner(states[j], states[k]);
                    t += (c.kappa * inv_n) * (states[k] - hjk * states[j]);
                    t += (c.kappa1 * inv_n) * (std::conj(hjk) - hjk) * states[j];
                }
                out[j] = std::move(t);
            }
            return out;
        }
        default:
            throw ConfigError("rhs_primary: kind does not act on vector states");
    }
}

VectorStates rhs_real_sphere(const VectorStates& states,
                             const std::vector<RMatrix>& omega_list, double kappa) {
    const int n = static_cast<int>(states.size());
    if (omega_list.size() != states.size()) {
        throw ConfigError("rhs_real_sphere: one Omega_j per agent required");
    }
    const double inv_n = 1.0 / n;
    VectorStates out(states.size());
    for (int j = 0; j < n; ++j) {
        if (omega_list[j].rows() != states[j].size()) {
            throw DimensionError("rhs_real_sphere: Omega_j dimension mismatch");
        }
        CVector t = omega_list[j].cast<Complex>() * states[j];
        for (int k = 0; k < n; ++k) {
            const double re = hermitian_inner(states[j], states[k]).real();
            t += (kappa * inv_n) * (states[k] - re * states[j]);
        }
        out[j] = std::move(t);
    }
    return out;
}

MatrixStates rhs_primary(ModelKind kind, const MatrixStates& states, const RVector& a,
                         const Coupling& c) {
    if (kind != ModelKind::LoheMatrix) {
        throw ConfigError("rhs_primary: kind does not act on matrix states");
    }
    require_same_count(states.size(), a.size(), "rhs_primary");
    const int n = static_cast<int>(states.size());
    const double w = c.kappa / (2.0 * n);
    MatrixStates out(states.size());
    for (int j = 0; j < n; ++j) {
        CMatrix t = kI * a[j] * states[j];
        for (int k = 0; k < n; ++k) {
            t += w * (states[k] - states[j] * states[k].adjoint() * states[j]);
        }
        out[j] = std::move(t);
    }
    return out;
}

VectorStates rhs_reduced(ModelKind kind, const VectorStates& aux, const PhaseVec& theta,
                         const Coupling& c) {
    require_same_count(aux.size(), theta.size(), "rhs_reduced");
    const int n = static_cast<int>(aux.size());
    const double inv_n = 1.0 / n;
    VectorStates out(aux.size());
    switch (kind) {
        case ModelKind::ReducedSphereZ: {
            for (int j = 0; j < n; ++j) {
                CVector t = CVector::Zero(aux[j].size());
                for (int k = 0; k < n; ++k) {
                    const CVector u = phase(theta[k] - theta[j]) * (aux[k] - aux[j]);
                    t += (c.kappa * inv_n) * (u - hermitian_inner(u, aux[j]).real() * aux[j]);
                }
                out[j] = std::move(t);
            }
            return out;
        }
        case ModelKind::ReducedSlXi: {
            for (int j = 0; j < n; ++j) {
                CVector t = CVector::Zero(aux[j].size());
                for (int k = 0; k < n; ++k) {
                    const CVector u = phase(theta[k] - theta[j]) * (aux[k] - aux[j]);
                    t += (c.kappa * inv_n) * (u - hermitian_inner(aux[j], u) * aux[j]);
                }
                out[j] = std::move(t);
            }
            return out;
        }
        case ModelKind::ReducedLhsXi: {
            for (int j = 0; j < n; ++j) {
                CVector t = CVector::Zero(aux[j].size());
                for (int k = 0; k < n; ++k) {
                    const CVector u = phase(theta[k] - theta[j]) * (aux[k] - aux[j]);
                    const Complex hju = hermitian_inner(aux[j], u);
                    t += (c.kappa * inv_n) * (u - hju * aux[j]);
                    t += (c.kappa1 * inv_n) * (std::conj(hju) - hju) * aux[j];
                }
                out[j] = std::move(t);
            }
            return out;
        }
        default:
            throw ConfigError("rhs_reduced: kind does not act on vector states");
    }
}

MatrixStates rhs_reduced(ModelKind kind, const MatrixStates& aux, const PhaseVec& theta,
                         const Coupling& c) {
    if (kind != ModelKind::ReducedLmV) {
        throw ConfigError("rhs_reduced: kind does not act on matrix states");
    }
    require_same_count(aux.size(), theta.size(), "rhs_reduced");
    const int n = static_cast<int>(aux.size());
    const double w = c.kappa / (2.0 * n);
    MatrixStates out(aux.size());
    for (int j = 0; j < n; ++j) {
        CMatrix t = CMatrix::Zero(aux[j].rows(), aux[j].cols());
        for (int k = 0; k < n; ++k) {
            t += w * (phase(theta[k] - theta[j]) * (aux[k] - aux[j]) -
                      phase(theta[j] - theta[k]) * aux[j] *
                          (aux[k].adjoint() - aux[j].adjoint()) * aux[j]);
        }
        out[j] = std::move(t);
    }
    return out;
}

RMatrix rhs_gram_real(const CMatrix& h, const PhaseVec& theta, double kappa) {
    const auto n = h.rows();
    if (h.cols() != n || theta.size() != n) {
        throw DimensionError("rhs_gram_real: shape mismatch");
    }
    // Exact derivative of 1 - R_ij along the reduced flow, written in Gram
    // entries: with A = (e^{i(th_k-th_i)}-1) * (col_k - col_i) understood
    // against a fixed third state, Re<A, z_j> = Re[(e^{i phi}-1)(h_kj - h_ij)].
    RMatrix out(n, n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double rij = h(i, j).real();
            double acc = -2.0 * kappa * (1.0 - rij);
            for (Eigen::Index k = 0; k < n; ++k) {
                const double rik = h(i, k).real();
                const double rkj = h(k, j).real();
                acc += kappa * inv_n * ((1.0 - rik) + (1.0 - rkj)) * (1.0 - rij);
                const Complex fa = phase(theta[k] - theta[i]) - 1.0;
                const Complex fb = phase(theta[k] - theta[j]) - 1.0;
                const double a_zj = (fa * (h(k, j) - h(i, j))).real();
                const double a_zi = (fa * (h(k, i) - h(i, i))).real();
                const double b_zi = (fb * (h(k, i) - h(j, i))).real();
                const double b_zj = (fb * (h(k, j) - h(j, j))).real();
                acc -= kappa * inv_n * (a_zj + b_zi - (a_zi + b_zj) * rij);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

CMatrix rhs_gram(ModelKind kind, const CMatrix& h, const PhaseVec& theta, const Coupling& c) {
    const auto n = h.rows();
    if (h.cols() != n || theta.size() != n) {
        throw DimensionError("rhs_gram: shape mismatch");
    }
    if (kind != ModelKind::ReducedSlXi && kind != ModelKind::ReducedLhsXi) {
        throw ConfigError("rhs_gram: unsupported kind");
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    const double k0 = c.kappa;
    const double k1 = (kind == ModelKind::ReducedLhsXi) ? c.kappa1 : 0.0;
    CMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            Complex acc(0.0, 0.0);
            for (Eigen::Index k = 0; k < n; ++k) {
                const Complex eki = phase(theta[k] - theta[i]);
                const Complex eik = phase(theta[i] - theta[k]);
                const Complex ejk = phase(theta[j] - theta[k]);
                const Complex ekj = phase(theta[k] - theta[j]);
                acc += k0 * inv_n *
                       (eki * (h(k, j) - h(i, j)) + eik * (1.0 - h(i, k)) * h(i, j) +
                        ejk * (h(i, k) - h(i, j)) + ekj * (1.0 - h(k, j)) * h(i, j));
                if (k1 != 0.0) {
                    acc += k1 * inv_n *
                           (eki * (h(k, i) - 1.0) * h(i, j) - eik * (h(i, k) - 1.0) * h(i, j) +
                            ejk * (h(j, k) - 1.0) * h(i, j) - ekj * (h(k, j) - 1.0) * h(i, j));
                }
            }
            out(i, j) = acc;
        }
    }
    return out;
}

std::vector<CMatrix> rhs_gram_blocks(const std::vector<CMatrix>& blocks, int n,
                                     const PhaseVec& theta, double kappa) {
    if (static_cast<int>(blocks.size()) != n * n || theta.size() != n) {
        throw DimensionError("rhs_gram_blocks: shape mismatch");
    }
    const auto at = [&](int i, int j) -> const CMatrix& {
        return blocks[static_cast<size_t>(i) * n + j];
    };
    const int d = static_cast<int>(at(0, 0).rows());
    const CMatrix id = CMatrix::Identity(d, d);
    const double w = kappa / (2.0 * n);
    std::vector<CMatrix> out(blocks.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            CMatrix acc = CMatrix::Zero(d, d);
            for (int k = 0; k < n; ++k) {
                acc += phase(theta[k] - theta[i]) * (at(k, j) - at(i, j));
                acc -= phase(theta[i] - theta[k]) * (at(i, k) - id) * at(i, j);
                acc += phase(theta[j] - theta[k]) * (at(i, k) - at(i, j));
                acc -= phase(theta[k] - theta[j]) * at(i, j) * (at(k, j) - id);
            }
            out[static_cast<size_t>(i) * n + j] = w * acc;
        }
    }
    return out;
}

double tangent_sup_norm(const PhaseVec& tangent) {
    return tangent.cwiseAbs().maxCoeff();
}

double tangent_sup_norm(const VectorStates& tangent) {
    double m = 0.0;
    for (const auto& t : tangent) {
        m = std::max(m, t.norm());
    }
    return m;
}

double tangent_sup_norm(const MatrixStates& tangent) {
    double m = 0.0;
    for (const auto& t : tangent) {
        m = std::max(m, t.norm());
    }
    return m;
}

}  // namespace aggsync
