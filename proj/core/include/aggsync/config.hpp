#pragma once

// JSON run configuration. Schema (version 1, unknown fields rejected):
//
// {
//   "schema_version": 1,
//   "model": "kuramoto" | "real_sphere" | "complex_sphere" |
//            "schrodinger_lohe" | "lohe_hermitian_sphere" | "lohe_matrix",
//   "d": 2, "N": 4,
//   "kappa": 1.0, "kappa1": 0.0,
//   "frequencies": {"values": [..]} | {"seed": 42, "spread": 0.5},
//   "initial": {"states": [..]} | {"seed": 7},
//   "theta_initial": "zeros" | {"values": [..]},        // explicit must be zero-sum
//   "block_a": [[..]], "block_b": [[..]],               // real_sphere only, optional
//   "dt": 0.01, "t_end": 100.0,
//   "renormalize_every": 1, "record_stride": 1,
//   "certificates": ["P3.1", ..],
//   "output": {"csv": "run.csv", "json": "run.json"}
// }
//
// Complex scalars are [re, im] pairs; vector states are length-d lists of
// pairs; matrices are flat row-major lists of d*d pairs. Explicit frequencies
// with nonzero mean are accepted, mean-subtracted, and recorded as a warning.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aggsync/certify.hpp"

namespace aggsync {

std::string to_string(ModelKind kind);
ModelKind model_from_string(const std::string& name);

struct OutputPaths {
    std::string csv;   // empty: not written
    std::string json;  // empty: not written
    bool operator==(const OutputPaths&) const = default;
};

struct RunConfig {
    int schema_version = 1;
    ModelKind model = ModelKind::ComplexSphere;
    int dimension = 2;
    int agents = 4;
    double kappa = 1.0;
    double kappa1 = 0.0;

    std::optional<RVector> freq_values;  // already mean-subtracted
    std::optional<std::uint64_t> freq_seed;
    double freq_spread = 0.5;

    std::optional<std::vector<CVector>> initial_vectors;
    std::optional<std::vector<CMatrix>> initial_matrices;
    std::optional<std::uint64_t> initial_seed;

    std::optional<RVector> theta_values;  // absent = zeros

    std::optional<RMatrix> block_a;  // real_sphere drift blocks (default zero)
    std::optional<RMatrix> block_b;

    double dt = 0.01;
    double t_end = 100.0;
    int renormalize_every = 1;
    int record_stride = 1;

    std::vector<TheoremId> certificates;
    OutputPaths output;

    bool operator==(const RunConfig& other) const;
};

// Throws ConfigError naming the offending field. Warnings (e.g. the
// mean-subtraction of explicit frequencies) are appended when a sink is given.
RunConfig parse_config(const std::string& json_text,
                       std::vector<std::string>* warnings = nullptr);

std::string serialize_config(const RunConfig& config);

}  // namespace aggsync
