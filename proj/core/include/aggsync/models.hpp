#pragma once

// Right-hand sides of the aggregation models and their gauge-reduced
// companions. All couplings are all-to-all with the printed 1/N (or 1/2N)
// normalization; per-agent sums run left to right for bit reproducibility.
//
// Primary models (drift + coupling):
//   kuramoto             theta_j' = a_j + (k/N) sum_k sin(theta_k - theta_j)
//   real_sphere          x_j' = Omega_j x_j + (k/N) sum_k (x_k - <x_j,x_k> x_j)
//   complex_sphere       w_j' = i a_j w_j + (k/N) sum_k (w_k - Re<w_k,w_j> w_j)
//   schrodinger_lohe     p_j' = i a_j p_j + (k/N) sum_k (p_k - <p_j,p_k> p_j)
//   lohe_hermitian_sphere z_j' = i a_j z_j + (k0/N) sum_k (z_k - <z_j,z_k> z_j)
//                              + (k1/N) sum_k (<z_k,z_j> - <z_j,z_k>) z_j
//   lohe_matrix          U_j' = i a_j U_j + (k/2N) sum_k (U_k - U_j U_k^t U_j)
//
// Reduced systems act on the gauge variables (z_j = w_j e^{-i theta_j} etc.);
// their free flow vanishes, the phases enter through e^{i(theta_k-theta_j)}
// factors. Differentiating the gauge product recovers the primary RHS exactly
// (checked numerically to machine precision by the test suite).

#include <optional>
#include <vector>

#include "aggsync/statespace.hpp"

namespace aggsync {

enum class ModelKind {
    Kuramoto,
    RealSphere,
    ComplexSphere,
    SchrodingerLohe,
    LoheHermitianSphere,
    LoheMatrix,
    ReducedSphereZ,
    ReducedSlXi,
    ReducedLhsXi,
    ReducedLmV,
};

bool is_primary_kind(ModelKind kind);
bool is_reduced_kind(ModelKind kind);
// ComplexSphere -> ReducedSphereZ, ..., LoheMatrix -> ReducedLmV. RealSphere
// reduces through its complexification (also ReducedSphereZ).
ModelKind reduced_counterpart(ModelKind kind);

struct Coupling {
    double kappa = 0.0;   // k (or k0 for the Hermitian sphere model)
    double kappa1 = 0.0;  // k1, Hermitian sphere model only

    Coupling(double k, double k1 = 0.0);
};

// Raw state containers used by the integrator (validated ensemble types wrap
// these at API boundaries).
using PhaseVec = RVector;
using VectorStates = std::vector<CVector>;
using MatrixStates = std::vector<CMatrix>;

// ---- primary right-hand sides ---------------------------------------------

PhaseVec rhs_kuramoto(const PhaseVec& theta, const RVector& a, double kappa);

// kind: ComplexSphere | SchrodingerLohe | LoheHermitianSphere.
VectorStates rhs_primary(ModelKind kind, const VectorStates& states, const RVector& a,
                         const Coupling& c);

// RealSphere; omega_list holds the assembled per-agent skew matrices.
VectorStates rhs_real_sphere(const VectorStates& states,
                             const std::vector<RMatrix>& omega_list, double kappa);

// LoheMatrix.
MatrixStates rhs_primary(ModelKind kind, const MatrixStates& states, const RVector& a,
                         const Coupling& c);

// ---- gauge-reduced right-hand sides ----------------------------------------

// kind: ReducedSphereZ | ReducedSlXi | ReducedLhsXi.
VectorStates rhs_reduced(ModelKind kind, const VectorStates& aux, const PhaseVec& theta,
                         const Coupling& c);

// ReducedLmV.
MatrixStates rhs_reduced(ModelKind kind, const MatrixStates& aux, const PhaseVec& theta,
                         const Coupling& c);

// ---- Gram-matrix derivatives (diagnostics; never used for time stepping) ---

// ReducedSphereZ: returns the N x N matrix of d/dt (1 - Re h_ij) for the
// real-part Gram of the gauge variables.
RMatrix rhs_gram_real(const CMatrix& h, const PhaseVec& theta, double kappa);

// ReducedSlXi / ReducedLhsXi: returns dh_ij/dt.
CMatrix rhs_gram(ModelKind kind, const CMatrix& h, const PhaseVec& theta, const Coupling& c);

// ReducedLmV: returns d/dt (V_i V_j^dagger), row-major N*N blocks.
std::vector<CMatrix> rhs_gram_blocks(const std::vector<CMatrix>& blocks, int n,
                                     const PhaseVec& theta, double kappa);

// Sup over agents of the per-agent tangent norm (2-norm for vectors,
// Frobenius for matrices).
double tangent_sup_norm(const PhaseVec& tangent);
double tangent_sup_norm(const VectorStates& tangent);
double tangent_sup_norm(const MatrixStates& tangent);

}  // namespace aggsync
