#pragma once

// Pairing of a primary model with its Kuramoto companion. The companion
// shares the scalar natural frequencies; its coupling is the model-specific
// multiple of the primary coupling (the coupling map). The gauge variables
//   z_j = w_j e^{-i theta_j},  xi_j = psi_j e^{-i theta_j},  V_j = e^{-i theta_j} U_j
// are derived pointwise on the shared time grid, and the per-time diameter
// record collects every disagreement functional the theory tracks.

#include <vector>

#include "aggsync/complexify.hpp"
#include "aggsync/integrate.hpp"

namespace aggsync {

struct DiameterRecord {
    double d_theta = 0.0;    // max |theta_i - theta_j|
    double d_r = 0.0;        // max |1 - Re<z_i,z_j>| over gauge states
    double d_h = 0.0;        // max |1 - <z_i,z_j>| (trace-normalized proxy for matrices)
    double d_v = 0.0;        // max ||I - V_i V_j^dagger||_F (matrix kind only; 0 otherwise)
    double d_primary = 0.0;  // max |w_i-w_j| (sphere flavors), max |1-<.,.>| (SL/LHS),
                             // max ||I - U_i U_j^dagger||_F (matrix)
};

// Kuramoto coupling paired with each primary kind: kappa for the sphere
// models (real and complex) and the matrix model, 2 kappa for the
// Schroedinger-Lohe model, 2 (kappa0 + kappa1) for the Hermitian sphere
// model. Throws ConfigError for Kuramoto itself and for reduced kinds.
double coupling_map(ModelKind kind, const Coupling& c);

// The contracting gauge-side diameter for a kind (d_r, d_h or d_v).
double contracting_diameter(ModelKind kind, const DiameterRecord& rec);

DiameterRecord diameters(ModelKind kind, const VectorStates& primary,
                         const VectorStates& aux, const PhaseVec& theta);
DiameterRecord diameters(ModelKind kind, const MatrixStates& primary,
                         const MatrixStates& aux, const PhaseVec& theta);

template <typename EnsT>
struct PairedTrajectory {
    ModelKind kind = ModelKind::ComplexSphere;
    double kappa_eff = 0.0;
    Trajectory<EnsT> primary;
    Trajectory<PhaseVec> kuramoto;
    std::vector<EnsT> auxiliary;          // gauge states, one per recorded time
    std::vector<DiameterRecord> series;   // one per recorded time
};

// kind: ComplexSphere | SchrodingerLohe | LoheHermitianSphere.
PairedTrajectory<VectorStates> paired_run(ModelKind kind, const SphereEnsemble& initial,
                                          const PhaseEnsemble& theta0,
                                          const FrequencySpectrum& a, const Coupling& c,
                                          const IntegratorConfig& cfg);

// LoheMatrix.
PairedTrajectory<MatrixStates> paired_run(const UnitaryEnsemble& initial,
                                          const PhaseEnsemble& theta0,
                                          const FrequencySpectrum& a, const Coupling& c,
                                          const IntegratorConfig& cfg);

// Real sphere model with the common-block frequency family
// Omega_j = [[A, B + a_j I], [-(B + a_j I), A]]. The primary trajectory holds
// the real 2d-vectors; auxiliary states are the gauge of their
// complexification.
PairedTrajectory<VectorStates> paired_run_real_sphere(const RMatrix& a_block,
                                                      const RMatrix& b_block,
                                                      const SphereEnsemble& initial,
                                                      const PhaseEnsemble& theta0,
                                                      const FrequencySpectrum& a,
                                                      const Coupling& c,
                                                      const IntegratorConfig& cfg);

// Direct integration of the gauge-reduced system (joint with its Kuramoto
// companion), used to cross-check the pointwise-derived auxiliary states.
Trajectory<VectorStates> run_reduced_direct(ModelKind reduced_kind,
                                            const VectorStates& aux0,
                                            const PhaseEnsemble& theta0,
                                            const FrequencySpectrum& a, const Coupling& c,
                                            double kappa_eff, const IntegratorConfig& cfg);
Trajectory<MatrixStates> run_reduced_direct(const MatrixStates& aux0,
                                            const PhaseEnsemble& theta0,
                                            const FrequencySpectrum& a, const Coupling& c,
                                            double kappa_eff, const IntegratorConfig& cfg);

}  // namespace aggsync
