#include "aggsync/reduction.hpp"

#include <cmath>

namespace aggsync {

namespace {

const Complex kI(0.0, 1.0);

Complex phase(double angle) { return Complex(std::cos(angle), std::sin(angle)); }

VectorStates gauge_vectors(const VectorStates& primary, const PhaseVec& theta) {
    VectorStates out(primary.size());
    for (size_t j = 0; j < primary.size(); ++j) {
        out[j] = primary[j] * phase(-theta[static_cast<Eigen::Index>(j)]);
    }
    return out;
}

MatrixStates gauge_matrices(const MatrixStates& primary, const PhaseVec& theta) {
    MatrixStates out(primary.size());
    for (size_t j = 0; j < primary.size(); ++j) {
        out[j] = phase(-theta[static_cast<Eigen::Index>(j)]) * primary[j];
    }
    return out;
}

VectorStates complexify_states(const VectorStates& real_states) {
    VectorStates out(real_states.size());
    for (size_t j = 0; j < real_states.size(); ++j) {
        out[j] = real_to_complex_state(real_states[j].real());
    }
    return out;
}

double sphere_project(VectorStates& states, bool apply) {
    double drift = 0.0;
    for (auto& s : states) {
        drift = std::max(drift, std::abs(s.norm() - 1.0));
    }
    if (apply) {
        for (auto& s : states) {
            s = renormalize_vector(s);
        }
    }
    return drift;
}

double unitary_project(MatrixStates& states, bool apply) {
    double drift = 0.0;
    for (auto& s : states) {
        const auto d = s.rows();
        drift = std::max(drift, (s * s.adjoint() - CMatrix::Identity(d, d)).norm());
    }
    if (apply) {
        for (auto& s : states) {
            s = unitarize(s);
        }
    }
    return drift;
}

template <typename EnsT, typename PrimaryRhs, typename Project>
PairedTrajectory<EnsT> paired_run_impl(ModelKind kind, EnsT x0, const PhaseEnsemble& theta0,
                                       const FrequencySpectrum& a, const Coupling& c,
                                       const IntegratorConfig& cfg, PrimaryRhs&& primary_rhs,
                                       Project&& project,
                                       const std::function<VectorStates(const EnsT&)>& to_complex) {
    if (static_cast<int>(x0.size()) != a.size() || theta0.size() != a.size()) {
        throw DimensionError("paired_run: agent count mismatch");
    }
    const double kappa_eff = coupling_map(kind, c);
    using State = Paired<EnsT>;

    FlowSystem<State> sys;
    sys.rhs = [&, kappa_eff](const State& s) -> State {
        return State{primary_rhs(s.x), rhs_kuramoto(s.theta, a.values(), kappa_eff)};
    };
    sys.project = [&](State& s, bool apply) -> double { return project(s.x, apply); };
    sys.phase_sum = [](const State& s) { return s.theta.sum(); };
    sys.tangent_norm_of_rhs = [&, kappa_eff](const State& s) {
        return std::max(tangent_sup_norm(primary_rhs(s.x)),
                        tangent_sup_norm(rhs_kuramoto(s.theta, a.values(), kappa_eff)));
    };

    State init{std::move(x0), theta0.phases()};
    Trajectory<State> joint = run(sys, std::move(init), cfg);

    PairedTrajectory<EnsT> out;
    out.kind = kind;
    out.kappa_eff = kappa_eff;
    out.primary.times = joint.times;
    out.kuramoto.times = joint.times;
    out.primary.monitors = joint.monitors;
    out.kuramoto.monitors = joint.monitors;
    out.primary.snapshots.reserve(joint.snapshots.size());
    out.kuramoto.snapshots.reserve(joint.snapshots.size());
    out.auxiliary.reserve(joint.snapshots.size());
    out.series.reserve(joint.snapshots.size());
    for (auto& s : joint.snapshots) {
        const VectorStates* dummy = nullptr;
        (void)dummy;
        EnsT aux;
        if constexpr (std::is_same_v<EnsT, MatrixStates>) {
            aux = gauge_matrices(s.x, s.theta);
            out.series.push_back(diameters(kind, s.x, aux, s.theta));
        } else {
            const VectorStates complex_primary = to_complex ? to_complex(s.x) : s.x;
            aux = gauge_vectors(complex_primary, s.theta);
            out.series.push_back(diameters(kind, complex_primary, aux, s.theta));
        }
        out.auxiliary.push_back(std::move(aux));
        out.kuramoto.snapshots.push_back(std::move(s.theta));
        out.primary.snapshots.push_back(std::move(s.x));
    }
    return out;
}

}  // namespace

double coupling_map(ModelKind kind, const Coupling& c) {
    switch (kind) {
        case ModelKind::RealSphere:
        case ModelKind::ComplexSphere:
        case ModelKind::LoheMatrix:
            return c.kappa;
        case ModelKind::SchrodingerLohe:
            return 2.0 * c.kappa;
        case ModelKind::LoheHermitianSphere:
            return 2.0 * (c.kappa + c.kappa1);
        case ModelKind::Kuramoto:
            throw ConfigError("coupling_map: the Kuramoto model has no companion");
        default:
            throw ConfigError("coupling_map: reduced kinds are not paired");
    }
}

double contracting_diameter(ModelKind kind, const DiameterRecord& rec) {
    switch (kind) {
        case ModelKind::RealSphere:
        case ModelKind::ComplexSphere:
            return rec.d_r;
        case ModelKind::SchrodingerLohe:
        case ModelKind::LoheHermitianSphere:
            return rec.d_h;
        case ModelKind::LoheMatrix:
            return rec.d_v;
        default:
            throw ConfigError("contracting_diameter: primary kinds only");
    }
}

DiameterRecord diameters(ModelKind kind, const VectorStates& primary, const VectorStates& aux,
                         const PhaseVec& theta) {
    const int n = static_cast<int>(aux.size());
    DiameterRecord rec;
    rec.d_theta = theta.size() > 0 ? theta.maxCoeff() - theta.minCoeff() : 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Complex h = hermitian_inner(aux[i], aux[j]);
            rec.d_r = std::max(rec.d_r, std::abs(1.0 - h.real()));
            rec.d_h = std::max(rec.d_h, std::abs(1.0 - h));
            switch (kind) {
                case ModelKind::RealSphere:
                case ModelKind::ComplexSphere:
                    rec.d_primary = std::max(rec.d_primary, (primary[i] - primary[j]).norm());
                    break;
                case ModelKind::SchrodingerLohe:
                case ModelKind::LoheHermitianSphere:
                    rec.d_primary = std::max(
                        rec.d_primary, std::abs(1.0 - hermitian_inner(primary[i], primary[j])));
                    break;
                default:
                    throw ConfigError("diameters: kind does not act on vector states");
            }
        }
    }
    return rec;
}

DiameterRecord diameters(ModelKind kind, const MatrixStates& primary, const MatrixStates& aux,
                         const PhaseVec& theta) {
    if (kind != ModelKind::LoheMatrix) {
        throw ConfigError("diameters: kind does not act on matrix states");
    }
    const int n = static_cast<int>(aux.size());
    const auto d = aux.empty() ? 0 : aux[0].rows();
    const CMatrix id = CMatrix::Identity(d, d);
    DiameterRecord rec;
    rec.d_theta = theta.size() > 0 ? theta.maxCoeff() - theta.minCoeff() : 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const CMatrix block = aux[i] * aux[j].adjoint();
            rec.d_v = std::max(rec.d_v, (id - block).norm());
            const Complex proxy = block.trace() / static_cast<double>(d);
            rec.d_r = std::max(rec.d_r, std::abs(1.0 - proxy.real()));
            rec.d_h = std::max(rec.d_h, std::abs(1.0 - proxy));
            rec.d_primary =
                std::max(rec.d_primary, (id - primary[i] * primary[j].adjoint()).norm());
        }
    }
    return rec;
}

PairedTrajectory<VectorStates> paired_run(ModelKind kind, const SphereEnsemble& initial,
                                          const PhaseEnsemble& theta0,
                                          const FrequencySpectrum& a, const Coupling& c,
                                          const IntegratorConfig& cfg) {
    if (kind != ModelKind::ComplexSphere && kind != ModelKind::SchrodingerLohe &&
        kind != ModelKind::LoheHermitianSphere) {
        throw ConfigError("paired_run: expected a complex vector model kind");
    }
    auto rhs = [kind, &a, &c](const VectorStates& w) {
        return rhs_primary(kind, w, a.values(), c);
    };
    return paired_run_impl<VectorStates>(kind, initial.states(), theta0, a, c, cfg, rhs,
                                         sphere_project, nullptr);
}

PairedTrajectory<MatrixStates> paired_run(const UnitaryEnsemble& initial,
                                          const PhaseEnsemble& theta0,
                                          const FrequencySpectrum& a, const Coupling& c,
                                          const IntegratorConfig& cfg) {
    auto rhs = [&a, &c](const MatrixStates& u) {
        return rhs_primary(ModelKind::LoheMatrix, u, a.values(), c);
    };
    return paired_run_impl<MatrixStates>(ModelKind::LoheMatrix, initial.matrices(), theta0, a,
                                         c, cfg, rhs, unitary_project, nullptr);
}

PairedTrajectory<VectorStates> paired_run_real_sphere(const RMatrix& a_block,
                                                      const RMatrix& b_block,
                                                      const SphereEnsemble& initial,
                                                      const PhaseEnsemble& theta0,
                                                      const FrequencySpectrum& a,
                                                      const Coupling& c,
                                                      const IntegratorConfig& cfg) {
    if (initial.flavor() != SphereFlavor::Real) {
        throw ConfigError("paired_run_real_sphere: real-flavor ensemble required");
    }
    if (initial.dimension() % 2 != 0) {
        throw DimensionError("paired_run_real_sphere: even dimension required (augment first)");
    }
    // Drift assembled with -a_j: the complexified trajectory then satisfies the
    // reduced complex-sphere model with the same spectrum as the companion.
    std::vector<RMatrix> omegas;
    omegas.reserve(static_cast<size_t>(a.size()));
    for (int j = 0; j < a.size(); ++j) {
        omegas.push_back(build_frequency(a_block, b_block, -a.values()[j]));
    }
    auto rhs = [omegas = std::move(omegas), &c](const VectorStates& x) {
        return rhs_real_sphere(x, omegas, c.kappa);
    };
    return paired_run_impl<VectorStates>(ModelKind::RealSphere, initial.states(), theta0, a, c,
                                         cfg, rhs, sphere_project, complexify_states);
}

Trajectory<VectorStates> run_reduced_direct(ModelKind reduced_kind, const VectorStates& aux0,
                                            const PhaseEnsemble& theta0,
                                            const FrequencySpectrum& a, const Coupling& c,
                                            double kappa_eff, const IntegratorConfig& cfg) {
    using State = Paired<VectorStates>;
    FlowSystem<State> sys;
    sys.rhs = [&, kappa_eff](const State& s) -> State {
        return State{rhs_reduced(reduced_kind, s.x, s.theta, c),
                     rhs_kuramoto(s.theta, a.values(), kappa_eff)};
    };
    sys.project = [](State& s, bool apply) { return sphere_project(s.x, apply); };
    sys.phase_sum = [](const State& s) { return s.theta.sum(); };
    sys.tangent_norm_of_rhs = [&](const State& s) {
        return tangent_sup_norm(rhs_reduced(reduced_kind, s.x, s.theta, c));
    };
    Trajectory<State> joint = run(sys, State{aux0, theta0.phases()}, cfg);
    Trajectory<VectorStates> out;
    out.times = std::move(joint.times);
    out.monitors = std::move(joint.monitors);
    out.snapshots.reserve(joint.snapshots.size());
    for (auto& s : joint.snapshots) {
        out.snapshots.push_back(std::move(s.x));
    }
    return out;
}

Trajectory<MatrixStates> run_reduced_direct(const MatrixStates& aux0,
                                            const PhaseEnsemble& theta0,
                                            const FrequencySpectrum& a, const Coupling& c,
                                            double kappa_eff, const IntegratorConfig& cfg) {
    using State = Paired<MatrixStates>;
    FlowSystem<State> sys;
    sys.rhs = [&, kappa_eff](const State& s) -> State {
        return State{rhs_reduced(ModelKind::ReducedLmV, s.x, s.theta, c),
                     rhs_kuramoto(s.theta, a.values(), kappa_eff)};
    };
    sys.project = [](State& s, bool apply) { return unitary_project(s.x, apply); };
    sys.phase_sum = [](const State& s) { return s.theta.sum(); };
    sys.tangent_norm_of_rhs = [&](const State& s) {
        return tangent_sup_norm(rhs_reduced(ModelKind::ReducedLmV, s.x, s.theta, c));
    };
    Trajectory<State> joint = run(sys, State{aux0, theta0.phases()}, cfg);
    Trajectory<MatrixStates> out;
    out.times = std::move(joint.times);
    out.monitors = std::move(joint.monitors);
    out.snapshots.reserve(joint.snapshots.size());
    for (auto& s : joint.snapshots) {
        out.snapshots.push_back(std::move(s.x));
    }
    return out;
}

}  // namespace aggsync
