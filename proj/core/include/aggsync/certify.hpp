#pragma once

// Numeric certificates for the convergence statements: every printed
// inequality is evaluated verbatim with its margin, the existential delta is
// replaced by a 10^4-point grid search (reported via delta_star = argmax of
// the minimum margin), and the beta thresholds are bisection roots of
//   sphere:   sqrt(2(1-2s)/(1+s)) = 2 sin(s/2)
//   sl:       1 - 3s              = 2 sin(s/2)
//   lhs(rho): (rho-2-(3rho+2)s)/(rho+2) = 2 sin(s/2),  rho = k0/k1 > 2
//   matrix(d): 1 - s              = 2d sin(s/2)
// When D(a) = 0 the heterogeneous conditions are vacuous; the certificate
// switches to the homogeneous branch (delta = 0 bounds) and says so.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aggsync/reduction.hpp"

namespace aggsync {

enum class TheoremId { P21ii, P31, T31, T32, P41, T4SL, P42, T4LHS, P51, T51 };

std::string to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& name);

// ---- beta roots -------------------------------------------------------------

double solve_beta_sphere();
double solve_beta_sl();
double solve_beta_lhs(double rho);  // requires rho > 2
double solve_beta_matrix(int d);    // requires d >= 1

// Generic bisection to |interval| < 1e-10; throws RootError without a sign
// change on the bracket.
double bisect_root(const std::function<double(double)>& f, double lo, double hi);

// ---- hypothesis certificates ------------------------------------------------

struct CertCondition {
    std::string name;
    std::string relation;  // human-readable, e.g. "kappa > 2 D(a)"
    double measured = 0.0;
    double margin = 0.0;  // > 0 means satisfied
};

struct Certificate {
    TheoremId theorem = TheoremId::P31;
    std::vector<CertCondition> conditions;
    bool pass = false;
    bool homogeneous = false;
    double delta_star = std::numeric_limits<double>::quiet_NaN();
    std::string note;

    double min_margin() const;
};

struct CertificateInputs {
    FrequencySpectrum a;
    Coupling coupling;
    double d_theta0 = 0.0;    // D(Theta^0)
    double d_gram0 = 0.0;     // D(R^0) / D(H^0) / D(V^0), whichever the theorem reads
    double d_primary0 = 0.0;  // D(W^0) / D(Psi^0) / D(Z^0) / D(U^0)
    double r0 = 1.0;          // order parameter of Theta^0 (P2.1ii only)
    int dim = 1;              // d (matrix model theorems)
};

Certificate check_hypotheses(TheoremId id, const CertificateInputs& in);

// R_0 = sqrt((1/N^2) sum_{i,j} cos(theta_i - theta_j)), in [0, 1].
double order_parameter(const PhaseEnsemble& theta);

// ---- exponential-rate fit ----------------------------------------------------

struct RateFit {
    double rate = 0.0;
    double r_squared = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    int samples = 0;
};

// Least-squares slope of log D over the band D in [band_lo, band_hi]; needs at
// least `min_samples` in-band points, else FitError.
RateFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values,
                       double band_lo = 1e-10, double band_hi = 1e-2, int min_samples = 10);

// ---- limit-state structure ----------------------------------------------------

struct LimitReport {
    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
    double gram_unit_modulus = kUnset;    // max | |<s_i,s_j>| - 1 |
    RMatrix geodesic_matrix;              // Delta-Theta-infinity (vector kinds)
    double additivity_residual = kUnset;  // max |DT_ik - DT_ij - DT_jk|, a-sorted triples
    double theorem32_residual = kUnset;   // real sphere identity
    double offdiag_residual = kUnset;     // matrix kind: off-diagonal of U_i U_j^dagger
    double diag_common_residual = kUnset; // matrix kind: diagonal spread and |scalar|-1
    double locked_state_residual = kUnset;
};

// `theta_inf` enters only the locked-state residual
//   max_j |a_j + (kappa_eff/N) sum_k sin(theta_k - theta_j)|.
// Throws StateError if `conv` is not marked converged.
LimitReport verify_limits(ModelKind kind, const VectorStates& finals, const PhaseVec& theta_inf,
                          const FrequencySpectrum& a, double kappa_eff,
                          const ConvergenceReport& conv);
LimitReport verify_limits(const MatrixStates& finals, const PhaseVec& theta_inf,
                          const FrequencySpectrum& a, double kappa_eff,
                          const ConvergenceReport& conv);

// Least-squares coupling recovering a locked state: with s_j = sum_k
// sin(theta_k - theta_j) at theta = gaps, kappa* = -N sum_j a_j s_j / sum_j s_j^2.
// Throws CalibrationError when every s_j vanishes.
double calibrate_kappa(const RVector& delta_theta_row, const FrequencySpectrum& a);

}  // namespace aggsync
