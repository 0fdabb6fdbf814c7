#include "aggsync/integrate.hpp"

namespace aggsync {

ConvergenceReport detect_convergence(const std::vector<double>& times,
                                     const std::vector<double>& rhs_norms, double tol,
                                     double window) {
    if (times.empty() || times.size() != rhs_norms.size()) {
        throw DimensionError("detect_convergence: empty or mismatched series");
    }
    ConvergenceReport rep;
    rep.window = window;
    rep.tolerance = tol;
    rep.final_rhs_norm = rhs_norms.back();

    const size_t n = times.size();
    size_t run_start = 0;
    bool in_run = false;
    for (size_t i = 0; i < n; ++i) {
        if (rhs_norms[i] < tol) {
            if (!in_run) {
                run_start = i;
                in_run = true;
            }
            if (!rep.t_converged && times[i] - times[run_start] >= window) {
                rep.t_converged = times[i];
            }
        } else {
            in_run = false;
        }
    }
    rep.converged = in_run && times.back() - times[run_start] >= window;
    return rep;
}

}  // namespace aggsync
