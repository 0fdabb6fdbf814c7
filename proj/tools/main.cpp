// Command-line front end: simulate | certify | calibrate-kappa |
// reproduce-fig1 | sweep. Exit codes: 0 success, 2 config error, 3 numeric
// error, 4 non-convergence when required (reproduce-fig1 always requires it).

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "aggsync/scenario.hpp"

namespace {

using namespace aggsync;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitNotConverged = 4;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RVector parse_csv_numbers(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            vals.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("not a number: '" + tok + "'");
        }
    }
    RVector v(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
    return v;
}

void print_summary_line(const RunSummary& sum) {
    std::printf("model=%s kappa_eff=%.6g converged=%s final_rhs_norm=%.3e",
                to_string(sum.model).c_str(), sum.kappa_eff,
                sum.convergence.converged ? "yes" : "no", sum.convergence.final_rhs_norm);
    if (sum.convergence.t_converged) {
        std::printf(" t_converged=%.4g", *sum.convergence.t_converged);
    }
    if (sum.rate_fit) {
        std::printf(" rate=%.6g r2=%.8g", sum.rate_fit->rate, sum.rate_fit->r_squared);
    }
    std::printf("\n");
    for (const auto& c : sum.certificates) {
        std::printf("certificate %s: %s (min margin %.3e%s)\n", to_string(c.theorem).c_str(),
                    c.pass ? "PASS" : "FAIL", c.min_margin(),
                    c.homogeneous ? ", homogeneous branch" : "");
    }
    for (const auto& w : sum.warnings) {
        std::printf("warning: %s\n", w.c_str());
    }
}

int cmd_simulate(const std::string& config_path, const std::string& csv_override,
                 const std::string& json_override, bool require_convergence) {
    std::vector<std::string> warnings;
    RunConfig cfg = parse_config(read_file(config_path), &warnings);
    if (!csv_override.empty()) cfg.output.csv = csv_override;
    if (!json_override.empty()) cfg.output.json = json_override;
    RunSummary sum = run_scenario(cfg);
    sum.warnings.insert(sum.warnings.begin(), warnings.begin(), warnings.end());
    if (!cfg.output.json.empty() || !cfg.output.csv.empty()) {
        write_outputs(sum, cfg.output);
    }
    print_summary_line(sum);
    if (require_convergence && !sum.convergence.converged) {
        return kExitNotConverged;
    }
    return kExitOk;
}

int cmd_certify(const std::string& config_path, const std::string& json_override) {
    std::vector<std::string> warnings;
    RunConfig cfg = parse_config(read_file(config_path), &warnings);
    if (cfg.certificates.empty()) {
        throw ConfigError("certify: config lists no certificates");
    }
    // Certificates depend on initial data only; avoid the full run.
    RunConfig probe = cfg;
    probe.t_end = probe.dt;
    probe.record_stride = 1;
    probe.output = {};
    RunSummary sum = run_scenario(probe);
    sum.warnings.insert(sum.warnings.begin(), warnings.begin(), warnings.end());
    const std::string text = summary_to_json(sum);
    if (!json_override.empty()) {
        std::ofstream f(json_override, std::ios::binary);
        if (!f) throw ConfigError("cannot open output: " + json_override);
        f << text;
    } else if (!cfg.output.json.empty()) {
        std::ofstream f(cfg.output.json, std::ios::binary);
        if (!f) throw ConfigError("cannot open output: " + cfg.output.json);
        f << text;
    } else {
        std::cout << text;
    }
    for (const auto& c : sum.certificates) {
        std::printf("certificate %s: %s (min margin %.3e%s)\n", to_string(c.theorem).c_str(),
                    c.pass ? "PASS" : "FAIL", c.min_margin(),
                    c.homogeneous ? ", homogeneous branch" : "");
    }
    return kExitOk;
}

int cmd_calibrate(const std::string& gaps_text, const std::string& freqs_text) {
    const RVector gaps = parse_csv_numbers(gaps_text);
    const FrequencySpectrum a(parse_csv_numbers(freqs_text));
    const double kappa_star = calibrate_kappa(gaps, a);
    std::printf("%.17g\n", kappa_star);
    return kExitOk;
}

int cmd_reproduce_fig1(const std::string& csv_path, const std::string& json_path) {
    RunConfig cfg = fig1_config();
    const Fig1Reference& ref = fig1_reference();

    FrequencySpectrum a(*cfg.freq_values);
    const double kappa_star = calibrate_kappa(ref.gaps, a);
    std::printf("calibrated kappa* = %.10g\n", kappa_star);
    cfg.kappa = kappa_star;
    cfg.output.csv = csv_path;
    cfg.output.json = json_path;

    RunSummary sum = run_scenario(cfg);
    sum.kappa_star = kappa_star;
    if (!csv_path.empty() || !json_path.empty()) {
        write_outputs(sum, cfg.output);
    }
    if (!sum.convergence.converged) {
        std::printf("run did not converge\n");
        return kExitNotConverged;
    }

    double gram_dev = 0.0;
    for (Eigen::Index i = 0; i < sum.gram_modulus.rows(); ++i) {
        for (Eigen::Index j = 0; j < sum.gram_modulus.cols(); ++j) {
            if (i != j) gram_dev = std::max(gram_dev, std::abs(sum.gram_modulus(i, j) - 1.0));
        }
    }
    const RMatrix& dt_mat = sum.delta_theta_matrix;
    const double add13 = std::abs(dt_mat(0, 2) - dt_mat(0, 1) - dt_mat(1, 2));
    const double add24 = std::abs(dt_mat(1, 3) - dt_mat(1, 2) - dt_mat(2, 3));
    const double add14 = std::abs(dt_mat(0, 3) - dt_mat(0, 1) - dt_mat(1, 2) - dt_mat(2, 3));
    const double table_dev = (dt_mat - ref.delta_theta).cwiseAbs().maxCoeff();

    bool ok = true;
    auto check = [&](const char* name, double value, double tol) {
        const bool pass = value < tol;
        ok = ok && pass;
        std::printf("%-28s %.3e (tol %.0e) %s\n", name, value, tol, pass ? "PASS" : "FAIL");
    };
    check("max | |<wi,wj>| - 1 |", gram_dev, 1e-3);
    check("additivity |13-12-23|", add13, 1e-3);
    check("additivity |24-23-34|", add24, 1e-3);
    check("additivity |14-12-23-34|", add14, 1e-3);
    check("max |DeltaTheta - table|", table_dev, 2e-2);
    std::printf("locked-state residual: %.3e\n",
                sum.limits ? sum.limits->locked_state_residual : -1.0);
    return ok ? kExitOk : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& seeds_text, int jobs) {
    std::vector<std::string> warnings;
    const RunConfig base = parse_config(read_file(config_path), &warnings);
    const RVector seeds_d = parse_csv_numbers(seeds_text);
    if (seeds_d.size() == 0) throw ConfigError("sweep: empty seed list");
    if (base.output.csv.empty() && base.output.json.empty()) {
        throw ConfigError("sweep: base config must set output paths (used as prefixes)");
    }

    std::vector<RunConfig> configs;
    for (Eigen::Index i = 0; i < seeds_d.size(); ++i) {
        const auto seed = static_cast<std::uint64_t>(seeds_d[i]);
        RunConfig cfg = base;
        if (cfg.model != ModelKind::Kuramoto) {
            cfg.initial_vectors.reset();
            cfg.initial_matrices.reset();
            cfg.initial_seed = seed;
        }
        if (base.freq_seed) cfg.freq_seed = seed;
        auto suffix = [&](const std::string& path) -> std::string {
            if (path.empty()) return path;
            const auto dot = path.rfind('.');
            const std::string tag = "_seed" + std::to_string(seed);
            if (dot == std::string::npos) return path + tag;
            return path.substr(0, dot) + tag + path.substr(dot);
        };
        cfg.output.csv = suffix(base.output.csv);
        cfg.output.json = suffix(base.output.json);
        configs.push_back(std::move(cfg));
    }

    std::atomic<size_t> next{0};
    std::atomic<int> failures{0};
    std::mutex io_mutex;
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            try {
                RunSummary sum = run_scenario(configs[i]);
                std::lock_guard<std::mutex> lock(io_mutex);
                std::printf("seed %llu: converged=%s final_rhs_norm=%.3e\n",
                            static_cast<unsigned long long>(*configs[i].initial_seed),
                            sum.convergence.converged ? "yes" : "no",
                            sum.convergence.final_rhs_norm);
            } catch (const std::exception& e) {
                failures.fetch_add(1);
                std::lock_guard<std::mutex> lock(io_mutex);
                std::fprintf(stderr, "seed run %zu failed: %s\n", i, e.what());
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return failures.load() == 0 ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and certification toolkit for heterogeneous first-order "
                 "aggregation models (Kuramoto companions, dimension reduction, locked-state "
                 "diagnostics)"};
    app.require_subcommand(1);

    std::string config_path, csv_path, json_path, gaps_text, freqs_text, seeds_text;
    bool require_convergence = false;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;

    auto* simulate = app.add_subcommand("simulate", "Run one configured scenario");
    simulate->add_option("--config", config_path, "JSON run configuration")->required();
    simulate->add_option("--csv", csv_path, "override CSV output path");
    simulate->add_option("--json", json_path, "override JSON summary path");
    simulate->add_flag("--require-convergence", require_convergence,
                       "exit 4 unless the run converges");

    auto* certify = app.add_subcommand("certify", "Evaluate theorem certificates for a config");
    certify->add_option("--config", config_path, "JSON run configuration")->required();
    certify->add_option("--json", json_path, "certificate report path (default stdout)");

    auto* calibrate =
        app.add_subcommand("calibrate-kappa", "Recover the coupling from locked gaps");
    calibrate->add_option("--gaps", gaps_text, "comma-separated locked gaps (first agent 0)")
        ->required();
    calibrate->add_option("--freqs", freqs_text, "comma-separated natural frequencies")
        ->required();

    auto* fig1 = app.add_subcommand(
        "reproduce-fig1", "Calibrate kappa from the reference gaps and rerun the bundled "
                          "reference scenario");
    fig1->add_option("--csv", csv_path, "CSV output path");
    fig1->add_option("--json", json_path, "JSON summary path");

    auto* sweep = app.add_subcommand("sweep", "Run a config across seeds, one worker per run");
    sweep->add_option("--config", config_path, "JSON run configuration")->required();
    sweep->add_option("--seeds", seeds_text, "comma-separated seed list")->required();
    sweep->add_option("--jobs", jobs, "max concurrent workers");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            return cmd_simulate(config_path, csv_path, json_path, require_convergence);
        }
        if (certify->parsed()) return cmd_certify(config_path, json_path);
        if (calibrate->parsed()) return cmd_calibrate(gaps_text, freqs_text);
        if (fig1->parsed()) return cmd_reproduce_fig1(csv_path, json_path);
        if (sweep->parsed()) return cmd_sweep(config_path, seeds_text, jobs);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitOk;
}
