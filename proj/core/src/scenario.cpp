#include "aggsync/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace aggsync {

using Json = nlohmann::ordered_json;

namespace {

constexpr double kExplicitStateTol = 1e-3;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

FrequencySpectrum build_frequencies(const RunConfig& cfg) {
    if (cfg.freq_values) {
        return FrequencySpectrum(*cfg.freq_values);
    }
    return sample_frequencies(*cfg.freq_seed, cfg.agents, cfg.freq_spread);
}

PhaseEnsemble build_theta0(const RunConfig& cfg) {
    if (cfg.theta_values) {
        return PhaseEnsemble::zero_sum(*cfg.theta_values);
    }
    return PhaseEnsemble::zero_sum(RVector::Zero(cfg.agents));
}

SphereEnsemble build_sphere_initial(const RunConfig& cfg, SphereFlavor flavor,
                                    std::vector<std::string>& warnings) {
    if (cfg.initial_vectors) {
        std::vector<CVector> states;
        states.reserve(cfg.initial_vectors->size());
        double worst = 0.0;
        for (const auto& v : *cfg.initial_vectors) {
            worst = std::max(worst, std::abs(v.norm() - 1.0));
            if (std::abs(v.norm() - 1.0) > kExplicitStateTol) {
                throw ConfigError("initial.states: state norm deviates from 1 by more than 1e-3");
            }
            states.push_back(renormalize_vector(v));
        }
        if (worst > kDefaultManifoldTol) {
            warnings.push_back("initial.states renormalized (worst norm defect " +
                               std::to_string(worst) + ")");
        }
        return SphereEnsemble(flavor, cfg.dimension, std::move(states));
    }
    return sample_sphere_ensemble(*cfg.initial_seed, cfg.model, cfg.dimension, cfg.agents,
                                  flavor);
}

UnitaryEnsemble build_unitary_initial(const RunConfig& cfg,
                                      std::vector<std::string>& warnings) {
    if (cfg.initial_matrices) {
        std::vector<CMatrix> mats;
        mats.reserve(cfg.initial_matrices->size());
        double worst = 0.0;
        for (const auto& m : *cfg.initial_matrices) {
            const double defect =
                (m * m.adjoint() - CMatrix::Identity(m.rows(), m.cols())).norm();
            worst = std::max(worst, defect);
            if (defect > kExplicitStateTol) {
                throw ConfigError("initial.states: matrix is more than 1e-3 from unitary");
            }
            mats.push_back(unitarize(m));
        }
        if (worst > kDefaultManifoldTol) {
            warnings.push_back("initial.states re-unitarized (worst defect " +
                               std::to_string(worst) + ")");
        }
        return UnitaryEnsemble(cfg.dimension, std::move(mats));
    }
    return sample_unitary_ensemble(*cfg.initial_seed, cfg.dimension, cfg.agents);
}

// Initial-data diameters feeding the certificates; aux is the gauge of the
// initial state at theta^0.
struct InitialDiameters {
    double d_theta0 = 0.0;
    double d_gram0 = 0.0;
    double d_primary0 = 0.0;
    double d_split0 = 0.0;  // real sphere: max (|y_i-y_j| + |z_i-z_j|)
    double r0 = 1.0;
};

InitialDiameters initial_diameters_vector(ModelKind kind, const VectorStates& primary,
                                          const PhaseEnsemble& theta0) {
    InitialDiameters out;
    out.r0 = order_parameter(theta0);
    VectorStates complexified;
    const VectorStates* w = &primary;
    if (kind == ModelKind::RealSphere) {
        for (const auto& x : primary) complexified.push_back(real_to_complex_state(x.real()));
        w = &complexified;
        const auto half = primary[0].size() / 2;
        for (size_t i = 0; i < primary.size(); ++i) {
            for (size_t j = i + 1; j < primary.size(); ++j) {
                const RVector xi = primary[i].real();
                const RVector xj = primary[j].real();
                out.d_split0 =
                    std::max(out.d_split0, (xi.head(half) - xj.head(half)).norm() +
                                               (xi.tail(half) - xj.tail(half)).norm());
            }
        }
    }
    VectorStates aux(w->size());
    for (size_t j = 0; j < w->size(); ++j) {
        const double th = theta0.phases()[static_cast<Eigen::Index>(j)];
        aux[j] = (*w)[j] * Complex(std::cos(th), -std::sin(th));
    }
    const ModelKind diam_kind = (kind == ModelKind::RealSphere) ? ModelKind::ComplexSphere : kind;
    const DiameterRecord rec = diameters(diam_kind, *w, aux, theta0.phases());
    out.d_theta0 = rec.d_theta;
    out.d_gram0 = contracting_diameter(diam_kind, rec);
    out.d_primary0 = rec.d_primary;
    if (kind == ModelKind::RealSphere || kind == ModelKind::ComplexSphere) {
        // D(W^0) is the chordal diameter for the sphere theorems.
        out.d_primary0 = rec.d_primary;
    }
    return out;
}

InitialDiameters initial_diameters_matrix(const MatrixStates& primary,
                                          const PhaseEnsemble& theta0) {
    InitialDiameters out;
    out.r0 = order_parameter(theta0);
    MatrixStates aux(primary.size());
    for (size_t j = 0; j < primary.size(); ++j) {
        const double th = theta0.phases()[static_cast<Eigen::Index>(j)];
        aux[j] = Complex(std::cos(th), -std::sin(th)) * primary[j];
    }
    const DiameterRecord rec = diameters(ModelKind::LoheMatrix, primary, aux, theta0.phases());
    out.d_theta0 = rec.d_theta;
    out.d_gram0 = rec.d_v;
    out.d_primary0 = rec.d_primary;
    return out;
}

void check_certificate_applies(TheoremId id, ModelKind model) {
    const auto ok = [&]() -> bool {
        switch (id) {
            case TheoremId::P21ii: return true;
            case TheoremId::P31:
            case TheoremId::T31:
                return model == ModelKind::ComplexSphere || model == ModelKind::RealSphere;
            case TheoremId::T32: return model == ModelKind::RealSphere;
            case TheoremId::P41:
            case TheoremId::T4SL: return model == ModelKind::SchrodingerLohe;
            case TheoremId::P42:
            case TheoremId::T4LHS: return model == ModelKind::LoheHermitianSphere;
            case TheoremId::P51:
            case TheoremId::T51: return model == ModelKind::LoheMatrix;
        }
        return false;
    }();
    if (!ok) {
        throw ConfigError("certificate " + to_string(id) + " does not apply to model " +
                          to_string(model));
    }
}

std::vector<Certificate> evaluate_certificates(const RunConfig& cfg,
                                               const FrequencySpectrum& a,
                                               const InitialDiameters& d0) {
    std::vector<Certificate> out;
    for (const TheoremId id : cfg.certificates) {
        check_certificate_applies(id, cfg.model);
        CertificateInputs in{a, Coupling(cfg.kappa, cfg.kappa1)};
        in.d_theta0 = d0.d_theta0;
        in.d_gram0 = d0.d_gram0;
        in.d_primary0 = (id == TheoremId::T32) ? d0.d_split0 : d0.d_primary0;
        in.r0 = d0.r0;
        in.dim = cfg.dimension;
        out.push_back(check_hypotheses(id, in));
    }
    return out;
}

RMatrix gram_modulus_of(const VectorStates& finals) {
    const int n = static_cast<int>(finals.size());
    RMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g(i, j) = std::abs(hermitian_inner(finals[static_cast<size_t>(i)],
                                               finals[static_cast<size_t>(j)]));
        }
    }
    return g;
}

RMatrix gram_modulus_of(const MatrixStates& finals) {
    const int n = static_cast<int>(finals.size());
    const auto d = finals[0].rows();
    RMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g(i, j) = std::abs((finals[static_cast<size_t>(i)] *
                                finals[static_cast<size_t>(j)].adjoint())
                                   .trace()) /
                      static_cast<double>(d);
        }
    }
    return g;
}

RMatrix geodesic_matrix_of(const VectorStates& finals) {
    const int n = static_cast<int>(finals.size());
    RMatrix g = RMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                g(i, j) = geodesic_distance(renormalize_vector(finals[static_cast<size_t>(i)]),
                                            renormalize_vector(finals[static_cast<size_t>(j)]));
            }
        }
    }
    return g;
}

template <typename PT>
void fill_common(RunSummary& sum, const RunConfig& cfg, const PT& paired,
                 const FrequencySpectrum& a) {
    sum.csv_times = paired.primary.times;
    sum.csv_series = paired.series;
    sum.csv_monitors = paired.primary.monitors;
    sum.final_theta = paired.kuramoto.snapshots.back();
    sum.kappa_eff = paired.kappa_eff;
    sum.convergence = detect_convergence(paired.primary);

    std::vector<double> aux_diam;
    aux_diam.reserve(paired.series.size());
    for (const auto& rec : paired.series) {
        aux_diam.push_back(contracting_diameter(cfg.model, rec));
    }
    if (sum.convergence.converged) {
        try {
            sum.rate_fit = fit_decay_rate(paired.primary.times, aux_diam);
        } catch (const FitError&) {
            sum.rate_fit.reset();
        }
    }
}

Json limit_to_json(const LimitReport& rep) {
    Json j;
    auto put = [&](const char* key, double v) {
        if (std::isnan(v)) {
            j[key] = nullptr;
        } else {
            j[key] = v;
        }
    };
    put("gram_unit_modulus", rep.gram_unit_modulus);
    put("additivity_residual", rep.additivity_residual);
    put("theorem32_residual", rep.theorem32_residual);
    put("offdiag_residual", rep.offdiag_residual);
    put("diag_common_residual", rep.diag_common_residual);
    put("locked_state_residual", rep.locked_state_residual);
    return j;
}

Json certificate_to_json(const Certificate& cert) {
    Json j;
    j["theorem"] = to_string(cert.theorem);
    j["pass"] = cert.pass;
    j["homogeneous"] = cert.homogeneous;
    if (std::isnan(cert.delta_star)) {
        j["delta_star"] = nullptr;
    } else {
        j["delta_star"] = cert.delta_star;
    }
    if (!cert.note.empty()) j["note"] = cert.note;
    Json conds = Json::array();
    for (const auto& c : cert.conditions) {
        conds.push_back(Json{{"name", c.name},
                             {"relation", c.relation},
                             {"measured", c.measured},
                             {"margin", c.margin}});
    }
    j["conditions"] = conds;
    return j;
}

Json rmatrix_json(const RMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

RunSummary run_scenario(const RunConfig& cfg) {
    RunSummary sum;
    sum.model = cfg.model;
    FrequencySpectrum a = build_frequencies(cfg);
    PhaseEnsemble theta0 = build_theta0(cfg);
    if (theta0.size() != cfg.agents || a.size() != cfg.agents) {
        throw ConfigError("run_scenario: N inconsistent with frequency/theta arrays");
    }
    IntegratorConfig icfg{cfg.dt, cfg.t_end, cfg.renormalize_every, cfg.record_stride};
    const Coupling coupling(cfg.kappa, cfg.kappa1);

    switch (cfg.model) {
        case ModelKind::Kuramoto: {
            FlowSystem<PhaseVec> sys;
            sys.rhs = [&](const PhaseVec& th) { return rhs_kuramoto(th, a.values(), cfg.kappa); };
            sys.project = [](PhaseVec&, bool) { return 0.0; };
            sys.phase_sum = [](const PhaseVec& th) { return th.sum(); };
            sys.tangent_norm_of_rhs = [&](const PhaseVec& th) {
                return tangent_sup_norm(rhs_kuramoto(th, a.values(), cfg.kappa));
            };
            Trajectory<PhaseVec> traj = run(sys, theta0.phases(), icfg);
            sum.kappa_eff = cfg.kappa;
            sum.csv_times = traj.times;
            sum.csv_monitors = traj.monitors;
            sum.csv_series.reserve(traj.snapshots.size());
            for (const auto& th : traj.snapshots) {
                DiameterRecord rec;
                rec.d_theta = th.maxCoeff() - th.minCoeff();
                rec.d_primary = rec.d_theta;
                sum.csv_series.push_back(rec);
            }
            sum.final_theta = traj.snapshots.back();
            sum.convergence = detect_convergence(traj);
            if (sum.convergence.converged) {
                std::vector<double> norms;
                for (const auto& m : traj.monitors) norms.push_back(m.max_rhs_norm);
                try {
                    sum.rate_fit = fit_decay_rate(traj.times, norms);
                } catch (const FitError&) {
                }
                LimitReport rep;
                double worst = 0.0;
                const auto& th = sum.final_theta;
                for (Eigen::Index j = 0; j < th.size(); ++j) {
                    double s = 0.0;
                    for (Eigen::Index k = 0; k < th.size(); ++k) s += std::sin(th[k] - th[j]);
                    worst = std::max(worst, std::abs(a.values()[j] +
                                                     cfg.kappa / th.size() * s));
                }
                rep.locked_state_residual = worst;
                sum.limits = rep;
            }
            InitialDiameters d0;
            d0.d_theta0 = theta0.diameter();
            d0.r0 = order_parameter(theta0);
            sum.certificates = evaluate_certificates(cfg, a, d0);
            break;
        }
        case ModelKind::ComplexSphere:
        case ModelKind::SchrodingerLohe:
        case ModelKind::LoheHermitianSphere:
        case ModelKind::RealSphere: {
            const SphereFlavor flavor = (cfg.model == ModelKind::RealSphere)
                                            ? SphereFlavor::Real
                                            : SphereFlavor::Complex;
            SphereEnsemble initial = build_sphere_initial(cfg, flavor, sum.warnings);
            const InitialDiameters d0 =
                initial_diameters_vector(cfg.model, initial.states(), theta0);
            PairedTrajectory<VectorStates> paired = [&] {
                if (cfg.model == ModelKind::RealSphere) {
                    const auto half = cfg.dimension / 2;
                    const RMatrix A = cfg.block_a.value_or(RMatrix::Zero(half, half));
                    const RMatrix B = cfg.block_b.value_or(RMatrix::Zero(half, half));
                    return paired_run_real_sphere(A, B, initial, theta0, a, coupling, icfg);
                }
                return paired_run(cfg.model, initial, theta0, a, coupling, icfg);
            }();
            fill_common(sum, cfg, paired, a);
            sum.final_vectors = paired.primary.snapshots.back();
            VectorStates finals_complex = sum.final_vectors;
            if (cfg.model == ModelKind::RealSphere) {
                finals_complex.clear();
                for (const auto& x : sum.final_vectors) {
                    finals_complex.push_back(real_to_complex_state(x.real()));
                }
            }
            sum.gram_modulus = gram_modulus_of(finals_complex);
            sum.delta_theta_matrix = geodesic_matrix_of(finals_complex);
            if (sum.convergence.converged) {
                sum.limits = verify_limits(cfg.model, sum.final_vectors, sum.final_theta, a,
                                           paired.kappa_eff, sum.convergence);
            }
            sum.certificates = evaluate_certificates(cfg, a, d0);
            break;
        }
        case ModelKind::LoheMatrix: {
            UnitaryEnsemble initial = build_unitary_initial(cfg, sum.warnings);
            const InitialDiameters d0 = initial_diameters_matrix(initial.matrices(), theta0);
            PairedTrajectory<MatrixStates> paired =
                paired_run(initial, theta0, a, coupling, icfg);
            fill_common(sum, cfg, paired, a);
            sum.final_matrices = paired.primary.snapshots.back();
            sum.gram_modulus = gram_modulus_of(sum.final_matrices);
            if (sum.convergence.converged) {
                sum.limits = verify_limits(sum.final_matrices, sum.final_theta, a,
                                           paired.kappa_eff, sum.convergence);
            }
            sum.certificates = evaluate_certificates(cfg, a, d0);
            break;
        }
        default:
            throw ConfigError("run_scenario: reduced kinds are not simulated directly");
    }

    write_outputs(sum, cfg.output);
    return sum;
}

std::string series_to_csv(const RunSummary& sum) {
    std::string out = "t,D_theta,D_primary,D_aux,max_rhs_norm,sum_theta,max_manifold_drift\n";
    for (size_t i = 0; i < sum.csv_times.size(); ++i) {
        const auto& rec = sum.csv_series[i];
        const auto& mon = sum.csv_monitors[i];
        const double d_aux = (sum.model == ModelKind::Kuramoto)
                                 ? 0.0
                                 : contracting_diameter(sum.model, rec);
        out += fmt17(sum.csv_times[i]);
        out += ',';
        out += fmt17(rec.d_theta);
        out += ',';
        out += fmt17(rec.d_primary);
        out += ',';
        out += fmt17(d_aux);
        out += ',';
        out += fmt17(mon.max_rhs_norm);
        out += ',';
        out += fmt17(mon.phase_sum);
        out += ',';
        out += fmt17(mon.max_manifold_drift);
        out += '\n';
    }
    return out;
}

std::string summary_to_json(const RunSummary& sum) {
    Json j;
    j["schema_version"] = 1;
    j["model"] = to_string(sum.model);
    j["kappa_eff"] = sum.kappa_eff;
    j["convergence"] = Json{{"converged", sum.convergence.converged},
                            {"t_converged", sum.convergence.t_converged
                                                ? Json(*sum.convergence.t_converged)
                                                : Json(nullptr)},
                            {"final_rhs_norm", sum.convergence.final_rhs_norm},
                            {"window", sum.convergence.window},
                            {"tolerance", sum.convergence.tolerance}};
    if (sum.rate_fit) {
        j["rate_fit"] = Json{{"rate", sum.rate_fit->rate},
                             {"r_squared", sum.rate_fit->r_squared},
                             {"t_lo", sum.rate_fit->t_lo},
                             {"t_hi", sum.rate_fit->t_hi},
                             {"samples", sum.rate_fit->samples}};
    } else {
        j["rate_fit"] = nullptr;
    }
    if (!sum.final_vectors.empty()) {
        Json st = Json::array();
        for (const auto& v : sum.final_vectors) {
            Json vecj = Json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                vecj.push_back(Json::array({v[i].real(), v[i].imag()}));
            }
            st.push_back(vecj);
        }
        j["final_states"] = st;
    }
    if (!sum.final_matrices.empty()) {
        Json st = Json::array();
        for (const auto& m : sum.final_matrices) {
            Json mj = Json::array();
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    mj.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
                }
            }
            st.push_back(mj);
        }
        j["final_states"] = st;
    }
    if (sum.final_theta.size() > 0) {
        Json th = Json::array();
        for (Eigen::Index i = 0; i < sum.final_theta.size(); ++i) {
            th.push_back(sum.final_theta[i]);
        }
        j["final_theta"] = th;
    }
    if (sum.gram_modulus.size() > 0) j["gram_modulus"] = rmatrix_json(sum.gram_modulus);
    if (sum.delta_theta_matrix.size() > 0) {
        j["delta_theta_matrix"] = rmatrix_json(sum.delta_theta_matrix);
    }
    Json certs = Json::array();
    for (const auto& c : sum.certificates) certs.push_back(certificate_to_json(c));
    j["certificates"] = certs;
    j["limits"] = sum.limits ? limit_to_json(*sum.limits) : Json(nullptr);
    j["kappa_star"] = sum.kappa_star ? Json(*sum.kappa_star) : Json(nullptr);
    j["warnings"] = sum.warnings;
    return j.dump(2) + "\n";
}

void write_outputs(const RunSummary& sum, const OutputPaths& paths) {
    if (!paths.csv.empty()) {
        std::ofstream f(paths.csv, std::ios::binary);
        if (!f) throw ConfigError("cannot open CSV output path: " + paths.csv);
        f << series_to_csv(sum);
    }
    if (!paths.json.empty()) {
        std::ofstream f(paths.json, std::ios::binary);
        if (!f) throw ConfigError("cannot open JSON output path: " + paths.json);
        f << summary_to_json(sum);
    }
}

std::string fig1_config_text() {
    return R"({
  "schema_version": 1,
  "model": "complex_sphere",
  "d": 2,
  "N": 4,
  "kappa": 1.0,
  "frequencies": {"values": [-0.2831, -0.0196, 0.0708, 0.2318]},
  "initial": {"states": [
    [[0.3895, -0.9178], [-0.0770, 0.0004]],
    [[-0.5190, 0.4832], [-0.5974, -0.3746]],
    [[-0.2123, -0.8137], [-0.5232, 0.1381]],
    [[0.1684, 0.3132], [0.6192, -0.7001]]
  ]},
  "theta_initial": "zeros",
  "dt": 0.01,
  "t_end": 100.0,
  "renormalize_every": 1,
  "record_stride": 1
}
)";
}

RunConfig fig1_config() {
    return parse_config(fig1_config_text());
}

const Fig1Reference& fig1_reference() {
    static const Fig1Reference ref = [] {
        Fig1Reference r;
        r.gaps = RVector(4);
        r.gaps << 0.0, 0.2726, 0.3647, 0.5310;
        r.delta_theta = RMatrix(4, 4);
        r.delta_theta << 0.0, 0.2726, 0.3647, 0.5310,
                         0.2726, 0.0, 0.0922, 0.2584,
                         0.3647, 0.0922, 0.0, 0.1662,
                         0.5310, 0.2584, 0.1662, 0.0;
        return r;
    }();
    return ref;
}

}  // namespace aggsync
