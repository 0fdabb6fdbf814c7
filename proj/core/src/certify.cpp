#include "aggsync/certify.hpp"

#include <algorithm>
#include <cmath>

namespace aggsync {

namespace {

constexpr int kDeltaGridPoints = 10000;
constexpr double kZeroSumTol = 1e-12;

struct DeltaSearch {
    // Conditions that depend on delta, as margin functions of delta.
    std::vector<std::pair<std::string, std::function<double(double)>>> margins;
    double lo = 0.0;
    double hi = 0.0;
};

// Grid-maximin over the open interval (lo, hi).
void resolve_delta(Certificate& cert, const DeltaSearch& search) {
    if (!(search.hi > search.lo)) {
        cert.conditions.push_back({"delta_window",
                                   "admissible delta interval (" + std::to_string(search.lo) +
                                       ", " + std::to_string(search.hi) + ") nonempty",
                                   search.hi - search.lo, search.hi - search.lo});
        return;
    }
    cert.conditions.push_back({"delta_window", "admissible delta interval nonempty",
                               search.hi - search.lo, search.hi - search.lo});
    double best_delta = std::numeric_limits<double>::quiet_NaN();
    double best_min = -std::numeric_limits<double>::infinity();
    const double span = search.hi - search.lo;
    for (int i = 0; i < kDeltaGridPoints; ++i) {
        const double delta =
            search.lo + span * (static_cast<double>(i) + 0.5) / kDeltaGridPoints;
        double min_margin = std::numeric_limits<double>::infinity();
        for (const auto& [name, fn] : search.margins) {
            min_margin = std::min(min_margin, fn(delta));
        }
        if (min_margin > best_min) {
            best_min = min_margin;
            best_delta = delta;
        }
    }
    cert.delta_star = best_delta;
    for (const auto& [name, fn] : search.margins) {
        const double m = fn(best_delta);
        cert.conditions.push_back({name, name + " at delta_star", m, m});
    }
}

void finalize(Certificate& cert) {
    cert.pass = true;
    for (const auto& c : cert.conditions) {
        if (!(c.margin > 0.0)) {
            cert.pass = false;
        }
    }
}

void add_fixed(Certificate& cert, std::string name, std::string relation, double measured,
               double margin) {
    cert.conditions.push_back({std::move(name), std::move(relation), measured, margin});
}

void add_zero_average(Certificate& cert, const FrequencySpectrum& a) {
    const double s = std::abs(a.values().sum());
    add_fixed(cert, "zero_average", "|sum a_j| <= 1e-12", s, kZeroSumTol - s);
}

}  // namespace

std::string to_string(TheoremId id) {
    switch (id) {
        case TheoremId::P21ii: return "P2.1ii";
        case TheoremId::P31:   return "P3.1";
        case TheoremId::T31:   return "T3.1";
        case TheoremId::T32:   return "T3.2";
        case TheoremId::P41:   return "P4.1";
        case TheoremId::T4SL:  return "T4.SL";
        case TheoremId::P42:   return "P4.2";
        case TheoremId::T4LHS: return "T4.LHS";
        case TheoremId::P51:   return "P5.1";
        case TheoremId::T51:   return "T5.1";
    }
    throw ConfigError("to_string: unknown theorem id");
}

TheoremId theorem_from_string(const std::string& name) {
    static const std::vector<std::pair<std::string, TheoremId>> table = {
        {"P2.1ii", TheoremId::P21ii}, {"P3.1", TheoremId::P31},   {"T3.1", TheoremId::T31},
        {"T3.2", TheoremId::T32},     {"P4.1", TheoremId::P41},   {"T4.SL", TheoremId::T4SL},
        {"P4.2", TheoremId::P42},     {"T4.LHS", TheoremId::T4LHS}, {"P5.1", TheoremId::P51},
        {"T5.1", TheoremId::T51}};
    for (const auto& [n, id] : table) {
        if (n == name) return id;
    }
    throw ConfigError("unknown theorem id: " + name);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) {
        throw RootError("bisect_root: no sign change on bracket");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

double solve_beta_sphere() {
    return bisect_root(
        [](double s) { return std::sqrt(2.0 * (1.0 - 2.0 * s) / (1.0 + s)) - 2.0 * std::sin(s / 2.0); },
        0.0, 0.5);
}

double solve_beta_sl() {
    return bisect_root([](double s) { return 1.0 - 3.0 * s - 2.0 * std::sin(s / 2.0); }, 0.0,
                       1.0 / 3.0);
}

double solve_beta_lhs(double rho) {
    if (!(rho > 2.0)) {
        throw RootError("solve_beta_lhs: requires rho = kappa0/kappa1 > 2");
    }
    const double s_max = (rho - 2.0) / (3.0 * rho + 2.0);
    return bisect_root(
        [rho](double s) {
            return (rho - 2.0 - (3.0 * rho + 2.0) * s) / (rho + 2.0) - 2.0 * std::sin(s / 2.0);
        },
        0.0, s_max);
}

double solve_beta_matrix(int d) {
    if (d < 1) {
        throw RootError("solve_beta_matrix: requires d >= 1");
    }
    return bisect_root(
        [d](double s) { return 1.0 - s - 2.0 * d * std::sin(s / 2.0); }, 0.0, 1.0);
}

double Certificate::min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : conditions) m = std::min(m, c.margin);
    return m;
}

Certificate check_hypotheses(TheoremId id, const CertificateInputs& in) {
    Certificate cert;
    cert.theorem = id;
    const double da = in.a.diameter();
    const double k = in.coupling.kappa;
    const double k1 = in.coupling.kappa1;

    if (id == TheoremId::P21ii) {
        add_zero_average(cert, in.a);
        add_fixed(cert, "order_parameter", "R_0 > 0", in.r0, in.r0);
        const double threshold = in.r0 > 0.0 ? 1.6 * da / in.r0
                                             : std::numeric_limits<double>::infinity();
        add_fixed(cert, "coupling", "kappa > 1.6 D(a) / R_0", k, k - threshold);
        finalize(cert);
        return cert;
    }

    cert.homogeneous = (da == 0.0);
    DeltaSearch search;

    switch (id) {
        case TheoremId::P31: {
            add_zero_average(cert, in.a);
            add_fixed(cert, "coupling", "kappa > 2 D(a)", k, k - 2.0 * da);
            if (cert.homogeneous) {
                add_fixed(cert, "coupling_positive", "kappa > 0", k, k);
                add_fixed(cert, "initial_gram", "D(R^0) < 1", in.d_gram0, 1.0 - in.d_gram0);
                cert.note = "homogeneous branch: D(a) = 0, delta-free bounds";
                break;
            }
            const double ub = std::min(da / k, 0.5);
            add_fixed(cert, "ratio", "D(a)/kappa < 1/2", da / k, 0.5 - da / k);
            search.lo = in.d_theta0;
            search.hi = ub;
            search.margins.push_back({"theta0_below_delta", [&](double d) { return d - in.d_theta0; }});
            search.margins.push_back({"delta_below_ratio", [&](double d) { return da / k - d; }});
            search.margins.push_back({"initial_gram", [&](double d) {
                                          return (1.0 - 2.0 * d) / (1.0 + d) - in.d_gram0;
                                      }});
            break;
        }
        case TheoremId::T31:
        case TheoremId::T32: {
            add_zero_average(cert, in.a);
            add_fixed(cert, "coupling", "kappa > 2 D(a)", k, k - 2.0 * da);
            const double beta = solve_beta_sphere();
            if (cert.homogeneous) {
                add_fixed(cert, "coupling_positive", "kappa > 0", k, k);
                add_fixed(cert, "initial_primary", "D(W^0) < sqrt(2)", in.d_primary0,
                          std::sqrt(2.0) - in.d_primary0);
                cert.note = "homogeneous branch: D(a) = 0, delta-free bounds";
                break;
            }
            add_fixed(cert, "ratio_below_beta", "D(a)/kappa < beta", da / k, beta - da / k);
            search.lo = 0.0;
            search.hi = std::min(da / k, beta);
            search.margins.push_back({"delta_below_ratio", [&](double d) { return da / k - d; }});
            search.margins.push_back({"initial_primary", [&](double d) {
                                          return std::sqrt(2.0 * (1.0 - 2.0 * d) / (1.0 + d)) -
                                                 2.0 * std::sin(d / 2.0) - in.d_primary0;
                                      }});
            if (id == TheoremId::T32) {
                cert.note = "initial diameter measured as max_i,j (|y_i-y_j| + |z_i-z_j|) "
                            "over the split halves";
            }
            break;
        }
        case TheoremId::P41: {
            add_zero_average(cert, in.a);
            add_fixed(cert, "coupling", "kappa > 3/2 D(a)", k, k - 1.5 * da);
            if (cert.homogeneous) {
                add_fixed(cert, "coupling_positive", "kappa > 0", k, k);
                add_fixed(cert, "initial_gram", "D(H^0) < 1", in.d_gram0, 1.0 - in.d_gram0);
                cert.note = "homogeneous branch: D(a) = 0, delta-free bounds";
                break;
            }
            const double ratio = da / (2.0 * k);
            add_fixed(cert, "ratio", "D(a)/(2 kappa) < 1/3", ratio, 1.0 / 3.0 - ratio);
            search.lo = in.d_theta0;
            search.hi = std::min(ratio, 1.0 / 3.0);
            search.margins.push_back({"theta0_below_delta", [&](double d) { return d - in.d_theta0; }});
            search.margins.push_back({"delta_below_ratio", [&, ratio](double d) { return ratio - d; }});
            search.margins.push_back(
                {"initial_gram", [&](double d) { return 1.0 - 3.0 * d - in.d_gram0; }});
            break;
        }
        case TheoremId::T4SL: {
            add_zero_average(cert, in.a);
            add_fixed(cert, "coupling", "kappa > 3/2 D(a)", k, k - 1.5 * da);
            const double beta = solve_beta_sl();
            if (cert.homogeneous) {
                add_fixed(cert, "coupling_positive", "kappa > 0", k, k);
                add_fixed(cert, "initial_primary", "D(Psi^0) < 1", in.d_primary0,
                          1.0 - in.d_primary0);
                cert.note = "homogeneous branch: D(a) = 0, delta-free bounds";
                break;
            }
            // Printed with D(a)/kappa here, unlike the D(a)/(2 kappa) of the
            // companion proposition; kept verbatim.
            add_fixed(cert, "ratio_below_beta", "D(a)/kappa < beta", da / k, beta - da / k);
            search.lo = 0.0;
            search.hi = std::min(da / k, beta);
            search.margins.push_back({"delta_below_ratio", [&](double d) { return da / k - d; }});
            search.margins.push_back({"initial_primary", [&](double d) {
                                          return 1.0 - 3.0 * d - 2.0 * std::sin(d / 2.0) -
                                                 in.d_primary0;
                                      }});
            cert.note = "ratio condition printed as D(a)/kappa (companion proposition uses "
                        "D(a)/(2 kappa))";
            break;
        }
        case TheoremId::P42:
        case TheoremId::T4LHS: {
            add_zero_average(cert, in.a);
            add_fixed(cert, "coupling_order", "kappa0 > 2 kappa1", k, k - 2.0 * k1);
            const double hetero = 2.0 * (k - 2.0 * k1) * (k + k1) / (3.0 * k + 2.0 * k1);
            add_fixed(cert, "coupling_strength",
                      "2 (k0 - 2 k1)(k0 + k1) / (3 k0 + 2 k1) > D(a)", hetero, hetero - da);
            const double bound = [&] {
                if (id == TheoremId::P42) return (2.0 * k - 4.0 * k1) / (6.0 * k + 4.0 * k1);
                return solve_beta_lhs(k / k1);
            }();
            const auto gram_cap = [&](double d) {
                return (k - 2.0 * k1 - (3.0 * k + 2.0 * k1) * d) / (k + 2.0 * k1);
            };
            if (cert.homogeneous) {
                add_fixed(cert, "initial_gram", "initial diameter below delta-free cap",
                          id == TheoremId::P42 ? in.d_gram0 : in.d_primary0,
                          gram_cap(0.0) -
                              (id == TheoremId::P42 ? in.d_gram0 : in.d_primary0));
                cert.note = "homogeneous branch: D(a) = 0, delta-free bounds";
                break;
            }
            const double ratio = da / (2.0 * (k + k1));
            add_fixed(cert, "ratio", "D(a)/(2(k0+k1)) below the delta cap", ratio,
                      bound - ratio);
            search.lo = (id == TheoremId::P42) ? in.d_theta0 : 0.0;
            search.hi = std::min(ratio, bound);
            if (id == TheoremId::P42) {
                search.margins.push_back(
                    {"theta0_below_delta", [&](double d) { return d - in.d_theta0; }});
            }
            search.margins.push_back({"delta_below_ratio", [&, ratio](double d) { return ratio - d; }});
            if (id == TheoremId::P42) {
                search.margins.push_back({"initial_gram", [&, gram_cap](double d) {
                                              return gram_cap(d) - in.d_gram0;
                                          }});
            } else {
                search.margins.push_back({"initial_primary", [&, gram_cap](double d) {
                                              return gram_cap(d) - 2.0 * std::sin(d / 2.0) -
                                                     in.d_primary0;
                                          }});
            }
            cert.note += (cert.note.empty() ? "" : "; ");
            cert.note += "printed D(Omega) read as D(a)";
            break;
        }
        case TheoremId::P51: {
            add_zero_average(cert, in.a);
            add_fixed(cert, "coupling", "kappa > D(a)", k, k - da);
            if (cert.homogeneous) {
                add_fixed(cert, "coupling_positive", "kappa > 0", k, k);
                add_fixed(cert, "initial_gram", "D(V^0) < 1", in.d_gram0, 1.0 - in.d_gram0);
                cert.note = "homogeneous branch: D(a) = 0, delta-free bounds";
                break;
            }
            add_fixed(cert, "ratio", "D(a)/kappa < 1", da / k, 1.0 - da / k);
            search.lo = in.d_theta0;
            search.hi = std::min(da / k, 1.0);
            search.margins.push_back({"theta0_below_delta", [&](double d) { return d - in.d_theta0; }});
            search.margins.push_back({"delta_below_ratio", [&](double d) { return da / k - d; }});
            search.margins.push_back(
                {"initial_gram", [&](double d) { return 1.0 - d - in.d_gram0; }});
            cert.note = "printed D(Omega) read as D(a)";
            break;
        }
        case TheoremId::T51: {
            add_zero_average(cert, in.a);
            add_fixed(cert, "coupling", "kappa > D(a)", k, k - da);
            const double beta = solve_beta_matrix(in.dim);
            if (cert.homogeneous) {
                add_fixed(cert, "coupling_positive", "kappa > 0", k, k);
                add_fixed(cert, "initial_primary", "D(U^0) < 1", in.d_primary0,
                          1.0 - in.d_primary0);
                cert.note = "homogeneous branch: D(a) = 0, delta-free bounds";
                break;
            }
            add_fixed(cert, "ratio_below_beta", "D(a)/kappa < beta(d)", da / k, beta - da / k);
            search.lo = 0.0;
            search.hi = std::min(da / k, beta);
            search.margins.push_back({"delta_below_ratio", [&](double d) { return da / k - d; }});
            search.margins.push_back({"initial_primary", [&](double d) {
                                          return 1.0 - d -
                                                 2.0 * in.dim * std::sin(d / 2.0) -
                                                 in.d_primary0;
                                      }});
            break;
        }
        default:
            throw ConfigError("check_hypotheses: unhandled theorem id");
    }

    if (!cert.homogeneous && !search.margins.empty()) {
        resolve_delta(cert, search);
    }
    finalize(cert);
    return cert;
}

double order_parameter(const PhaseEnsemble& theta) {
    const auto& t = theta.phases();
    const auto n = t.size();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            acc += std::cos(t[i] - t[j]);
        }
    }
    acc /= static_cast<double>(n) * static_cast<double>(n);
    return std::sqrt(std::max(acc, 0.0));
}

RateFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values,
                       double band_lo, double band_hi, int min_samples) {
    if (times.size() != values.size()) {
        throw DimensionError("fit_decay_rate: series length mismatch");
    }
    std::vector<double> ts, ys;
    for (size_t i = 0; i < times.size(); ++i) {
        if (values[i] >= band_lo && values[i] <= band_hi) {
            ts.push_back(times[i]);
            ys.push_back(std::log(values[i]));
        }
    }
    if (static_cast<int>(ts.size()) < min_samples) {
        throw FitError("fit_decay_rate: fewer than " + std::to_string(min_samples) +
                       " samples inside the fit band");
    }
    const auto n = static_cast<double>(ts.size());
    double mt = 0.0, my = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        my += ys[i];
    }
    mt /= n;
    my /= n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - mt) * (ts[i] - mt);
        sty += (ts[i] - mt) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (stt == 0.0) {
        throw FitError("fit_decay_rate: degenerate time window");
    }
    RateFit fit;
    fit.rate = -sty / stt;
    fit.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
    fit.t_lo = *std::min_element(ts.begin(), ts.end());
    fit.t_hi = *std::max_element(ts.begin(), ts.end());
    fit.samples = static_cast<int>(ts.size());
    return fit;
}

namespace {

double locked_residual(const PhaseVec& theta, const FrequencySpectrum& a, double kappa_eff) {
    const auto n = theta.size();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            s += std::sin(theta[k] - theta[j]);
        }
        worst = std::max(worst,
                         std::abs(a.values()[j] + kappa_eff / static_cast<double>(n) * s));
    }
    return worst;
}

// Additivity of geodesic gaps along the a-sorted order.
double additivity(const RMatrix& dt, const FrequencySpectrum& a) {
    const auto n = dt.rows();
    std::vector<Eigen::Index> idx(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(),
              [&](Eigen::Index p, Eigen::Index q) { return a.values()[p] < a.values()[q]; });
    double worst = 0.0;
    for (size_t i = 0; i + 2 < idx.size(); ++i) {
        for (size_t j = i + 1; j + 1 < idx.size(); ++j) {
            for (size_t k = j + 1; k < idx.size(); ++k) {
                const double r = std::abs(dt(idx[i], idx[k]) - dt(idx[i], idx[j]) -
                                          dt(idx[j], idx[k]));
                worst = std::max(worst, r);
            }
        }
    }
    return worst;
}

}  // namespace

LimitReport verify_limits(ModelKind kind, const VectorStates& finals, const PhaseVec& theta_inf,
                          const FrequencySpectrum& a, double kappa_eff,
                          const ConvergenceReport& conv) {
    if (!conv.converged) {
        throw StateError("verify_limits: trajectory did not converge");
    }
    const int n = static_cast<int>(finals.size());
    LimitReport rep;

    VectorStates complex_finals;
    if (kind == ModelKind::RealSphere) {
        complex_finals.reserve(finals.size());
        for (const auto& x : finals) {
            complex_finals.push_back(real_to_complex_state(x.real()));
        }
    }
    const VectorStates& w = (kind == ModelKind::RealSphere) ? complex_finals : finals;

    rep.gram_unit_modulus = 0.0;
    rep.geodesic_matrix = RMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                rep.gram_unit_modulus =
                    std::max(rep.gram_unit_modulus,
                             std::abs(std::abs(hermitian_inner(w[i], w[j])) - 1.0));
                rep.geodesic_matrix(i, j) =
                    geodesic_distance(renormalize_vector(w[i]), renormalize_vector(w[j]));
            }
        }
    }
    rep.additivity_residual = additivity(rep.geodesic_matrix, a);
    rep.locked_state_residual = locked_residual(theta_inf, a, kappa_eff);

    if (kind == ModelKind::RealSphere) {
        const auto half = finals[0].size() / 2;
        rep.theorem32_residual = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const RVector xi = finals[static_cast<size_t>(i)].real();
                const RVector xj = finals[static_cast<size_t>(j)].real();
                const double inner = xi.dot(xj);
                const double cross = xi.tail(half).dot(xj.head(half)) -
                                     xi.head(half).dot(xj.tail(half));
                rep.theorem32_residual = std::max(
                    rep.theorem32_residual, std::abs(inner * inner + cross * cross - 1.0));
            }
        }
    }
    return rep;
}

LimitReport verify_limits(const MatrixStates& finals, const PhaseVec& theta_inf,
                          const FrequencySpectrum& a, double kappa_eff,
                          const ConvergenceReport& conv) {
    if (!conv.converged) {
        throw StateError("verify_limits: trajectory did not converge");
    }
    const int n = static_cast<int>(finals.size());
    const auto d = finals[0].rows();
    LimitReport rep;
    rep.offdiag_residual = 0.0;
    rep.diag_common_residual = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const CMatrix block = finals[static_cast<size_t>(i)] *
                                  finals[static_cast<size_t>(j)].adjoint();
            double off = 0.0;
            for (Eigen::Index r = 0; r < d; ++r) {
                for (Eigen::Index c = 0; c < d; ++c) {
                    if (r != c) off += std::norm(block(r, c));
                }
            }
            rep.offdiag_residual = std::max(rep.offdiag_residual, std::sqrt(off));
            const Complex common = block.trace() / static_cast<double>(d);
            double spread = std::abs(std::abs(common) - 1.0);
            for (Eigen::Index r = 0; r < d; ++r) {
                spread = std::max(spread, std::abs(block(r, r) - common));
            }
            rep.diag_common_residual = std::max(rep.diag_common_residual, spread);
        }
    }
    rep.locked_state_residual = locked_residual(theta_inf, a, kappa_eff);
    return rep;
}

double calibrate_kappa(const RVector& delta_theta_row, const FrequencySpectrum& a) {
    const auto n = delta_theta_row.size();
    if (n != a.size() || n < 2) {
        throw DimensionError("calibrate_kappa: need gaps for every agent, N >= 2");
    }
    RVector s(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            acc += std::sin(delta_theta_row[k] - delta_theta_row[j]);
        }
        s[j] = acc;
    }
    const double denom = s.squaredNorm();
    if (denom < 1e-24) {
        throw CalibrationError("calibrate_kappa: all coupling sums vanish; kappa undetermined");
    }
    return -static_cast<double>(n) * a.values().dot(s) / denom;
}

}  // namespace aggsync
