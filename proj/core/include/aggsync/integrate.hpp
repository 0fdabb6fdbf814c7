#pragma once

// Deterministic fixed-step RK4 with optional per-step projection back to the
// manifold (unit sphere / unitary group). No adaptivity: identical configs
// produce bit-identical trajectories, and the recorded monitor series are the
// basis of every conservation and convergence check.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "aggsync/models.hpp"

namespace aggsync {

struct IntegratorConfig {
    double dt = 0.01;
    double t_end = 100.0;
    int renormalize_every = 1;  // 0 disables projection (drift is still measured)
    int record_stride = 1;

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("IntegratorConfig: dt must be positive");
        if (dt > t_end) throw ConfigError("IntegratorConfig: dt must not exceed t_end");
        if (renormalize_every < 0) throw ConfigError("IntegratorConfig: renormalize_every >= 0");
        if (record_stride < 1) throw ConfigError("IntegratorConfig: record_stride >= 1");
    }
    long long steps() const { return std::llround(t_end / dt); }
};

struct MonitorRecord {
    double max_manifold_drift = 0.0;  // pre-projection defect at the latest step
    double phase_sum = 0.0;
    double max_rhs_norm = 0.0;
};

template <typename StateT>
struct Trajectory {
    std::vector<double> times;
    std::vector<StateT> snapshots;
    std::vector<MonitorRecord> monitors;

    const StateT& final_state() const { return snapshots.back(); }
    double final_time() const { return times.back(); }
};

struct ConvergenceReport {
    bool converged = false;
    std::optional<double> t_converged;
    double final_rhs_norm = 0.0;
    double window = 1.0;
    double tolerance = 1e-8;
};

// ---- state arithmetic for the RK4 stages -----------------------------------

inline PhaseVec axpy(const PhaseVec& base, const PhaseVec& dir, double h) {
    return base + h * dir;
}

inline VectorStates axpy(const VectorStates& base, const VectorStates& dir, double h) {
    VectorStates out(base.size());
    for (size_t j = 0; j < base.size(); ++j) out[j] = base[j] + h * dir[j];
    return out;
}

inline MatrixStates axpy(const MatrixStates& base, const MatrixStates& dir, double h) {
    MatrixStates out(base.size());
    for (size_t j = 0; j < base.size(); ++j) out[j] = base[j] + h * dir[j];
    return out;
}

// Joint (primary, phases) state for paired integrations.
template <typename EnsT>
struct Paired {
    EnsT x;
    PhaseVec theta;
};

template <typename EnsT>
Paired<EnsT> axpy(const Paired<EnsT>& base, const Paired<EnsT>& dir, double h) {
    return Paired<EnsT>{axpy(base.x, dir.x, h), base.theta + h * dir.theta};
}

namespace detail {

inline void accumulate(PhaseVec& acc, const PhaseVec& k, double w) { acc += w * k; }
inline void accumulate(VectorStates& acc, const VectorStates& k, double w) {
    for (size_t j = 0; j < acc.size(); ++j) acc[j] += w * k[j];
}
inline void accumulate(MatrixStates& acc, const MatrixStates& k, double w) {
    for (size_t j = 0; j < acc.size(); ++j) acc[j] += w * k[j];
}
template <typename EnsT>
void accumulate(Paired<EnsT>& acc, const Paired<EnsT>& k, double w) {
    accumulate(acc.x, k.x, w);
    acc.theta += w * k.theta;
}

inline bool all_finite(const PhaseVec& s) { return s.allFinite(); }
inline bool all_finite(const VectorStates& s) {
    for (const auto& v : s)
        if (!v.allFinite()) return false;
    return true;
}
inline bool all_finite(const MatrixStates& s) {
    for (const auto& m : s)
        if (!m.allFinite()) return false;
    return true;
}
template <typename EnsT>
bool all_finite(const Paired<EnsT>& s) {
    return all_finite(s.x) && s.theta.allFinite();
}

}  // namespace detail

// Classical RK4 update; flavor-preserving by construction.
template <typename StateT, typename Rhs>
StateT rk4_step(Rhs&& rhs, const StateT& state, double dt) {
    const StateT k1 = rhs(state);
    const StateT k2 = rhs(axpy(state, k1, 0.5 * dt));
    const StateT k3 = rhs(axpy(state, k2, 0.5 * dt));
    const StateT k4 = rhs(axpy(state, k3, dt));
    StateT acc = k1;
    detail::accumulate(acc, k2, 2.0);
    detail::accumulate(acc, k3, 2.0);
    detail::accumulate(acc, k4, 1.0);
    return axpy(state, acc, dt / 6.0);
}

// Vector field plus the manifold/monitor hooks the integrator needs.
template <typename StateT>
struct FlowSystem {
    std::function<StateT(const StateT&)> rhs;
    // Measures the pre-projection manifold defect and (when enabled) projects
    // in place. Identity + zero for flat state spaces.
    std::function<double(StateT&, bool apply)> project;
    std::function<double(const StateT&)> phase_sum;
    std::function<double(const StateT&)> tangent_norm_of_rhs;
};

template <typename StateT>
Trajectory<StateT> run(const FlowSystem<StateT>& sys, StateT state, const IntegratorConfig& cfg) {
    cfg.validate();
    const long long steps = cfg.steps();
    Trajectory<StateT> traj;
    const auto expected = static_cast<size_t>(steps / cfg.record_stride + 1);
    traj.times.reserve(expected);
    traj.snapshots.reserve(expected);
    traj.monitors.reserve(expected);

    double last_drift = sys.project ? sys.project(state, false) : 0.0;
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.snapshots.push_back(state);
        MonitorRecord m;
        m.max_manifold_drift = last_drift;
        m.phase_sum = sys.phase_sum ? sys.phase_sum(state) : 0.0;
        m.max_rhs_norm = sys.tangent_norm_of_rhs ? sys.tangent_norm_of_rhs(state) : 0.0;
        traj.monitors.push_back(m);
    };
    record(0.0);

    for (long long step = 1; step <= steps; ++step) {
        state = rk4_step(sys.rhs, state, cfg.dt);
        const double t = static_cast<double>(step) * cfg.dt;
        if (!detail::all_finite(state)) {
            throw NumericError("integration produced non-finite values at t = " +
                               std::to_string(t));
        }
        if (sys.project) {
            const bool apply =
                cfg.renormalize_every > 0 && step % cfg.renormalize_every == 0;
            last_drift = sys.project(state, apply);
        }
        if (step % cfg.record_stride == 0) {
            record(t);
        }
    }
    return traj;
}

// Converged iff the recorded sup-norm of the RHS stays below `tol` throughout
// the trailing `window`; t_converged is the earliest recorded time whose
// preceding window already satisfies that.
ConvergenceReport detect_convergence(const std::vector<double>& times,
                                     const std::vector<double>& rhs_norms,
                                     double tol = 1e-8, double window = 1.0);

template <typename StateT>
ConvergenceReport detect_convergence(const Trajectory<StateT>& traj, double tol = 1e-8,
                                     double window = 1.0) {
    std::vector<double> norms;
    norms.reserve(traj.monitors.size());
    for (const auto& m : traj.monitors) norms.push_back(m.max_rhs_norm);
    return detect_convergence(traj.times, norms, tol, window);
}

}  // namespace aggsync
