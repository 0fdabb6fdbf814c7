#pragma once

// Scenario execution: builds initial data from a RunConfig, runs the paired
// integration, evaluates requested certificates, convergence detection, rate
// fits and limit checks, and emits the CSV time series / JSON summary.
//
// CSV columns (17 significant digits, '.' decimal separator):
//   t, D_theta, D_primary, D_aux, max_rhs_norm, sum_theta, max_manifold_drift

#include <string>

#include "aggsync/config.hpp"
#include "aggsync/rng.hpp"

namespace aggsync {

struct RunSummary {
    ModelKind model = ModelKind::ComplexSphere;
    double kappa_eff = 0.0;
    ConvergenceReport convergence;
    std::optional<RateFit> rate_fit;          // on the contracting gauge diameter
    std::optional<LimitReport> limits;        // converged runs only
    std::vector<Certificate> certificates;
    std::optional<double> kappa_star;
    std::vector<std::string> warnings;

    // Final data, through the serializer.
    std::vector<CVector> final_vectors;
    std::vector<CMatrix> final_matrices;
    RVector final_theta;
    RMatrix gram_modulus;        // |<s_i, s_j>| at t_end (trace proxy for matrices)
    RMatrix delta_theta_matrix;  // geodesic distances at t_end (vector kinds)
    std::vector<double> csv_times;
    std::vector<DiameterRecord> csv_series;
    std::vector<MonitorRecord> csv_monitors;
};

// Runs the configured scenario and writes any configured output files.
RunSummary run_scenario(const RunConfig& config);

std::string summary_to_json(const RunSummary& summary);
std::string series_to_csv(const RunSummary& summary);
void write_outputs(const RunSummary& summary, const OutputPaths& paths);

// Bundled reference scenario: the d=2, N=4 complex-sphere run whose locked
// geodesic gaps calibrate the coupling. `fig1_config()` matches
// scenarios/fig1.json byte-for-byte.
RunConfig fig1_config();
std::string fig1_config_text();

struct Fig1Reference {
    RVector gaps;          // locked geodesic gaps relative to the first agent
    RMatrix delta_theta;   // full reference geodesic-distance matrix
};
const Fig1Reference& fig1_reference();

}  // namespace aggsync
