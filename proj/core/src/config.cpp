#include "aggsync/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace aggsync {

using Json = nlohmann::ordered_json;

namespace {

constexpr double kMeanWarnTol = 1e-12;

void reject_unknown(const Json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError("unknown field '" + it.key() + "' in " + where);
        }
    }
}

double as_number(const Json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError("field '" + field + "' must be a number");
    return j.get<double>();
}

int as_int(const Json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ConfigError("field '" + field + "' must be an integer");
    return j.get<int>();
}

Complex as_complex(const Json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError("field '" + field + "' must be a [re, im] pair");
    }
    return Complex(j[0].get<double>(), j[1].get<double>());
}

RVector as_rvector(const Json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError("field '" + field + "' must be an array");
    RVector v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = as_number(j[i], field);
    }
    return v;
}

CVector as_cvector(const Json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError("field '" + field + "' must be an array of pairs");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = as_complex(j[i], field);
    }
    return v;
}

CMatrix as_cmatrix(const Json& j, int d, const std::string& field) {
    if (!j.is_array() || j.size() != static_cast<size_t>(d) * static_cast<size_t>(d)) {
        throw ConfigError("field '" + field + "' must be a flat row-major list of d*d pairs");
    }
    CMatrix m(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            m(r, c) = as_complex(j[static_cast<size_t>(r) * d + c], field);
        }
    }
    return m;
}

RMatrix as_rmatrix(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError("field '" + field + "' must be an array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    RMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!j[static_cast<size_t>(r)].is_array() ||
            static_cast<Eigen::Index>(j[static_cast<size_t>(r)].size()) != cols) {
            throw ConfigError("field '" + field + "' must be rectangular");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = as_number(j[static_cast<size_t>(r)][static_cast<size_t>(c)], field);
        }
    }
    return m;
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json cvector_to_json(const CVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
    return out;
}

Json cmatrix_to_json(const CMatrix& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(complex_to_json(m(r, c)));
    }
    return out;
}

Json rvector_to_json(const RVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Json rmatrix_to_json(const RMatrix& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Kuramoto: return "kuramoto";
        case ModelKind::RealSphere: return "real_sphere";
        case ModelKind::ComplexSphere: return "complex_sphere";
        case ModelKind::SchrodingerLohe: return "schrodinger_lohe";
        case ModelKind::LoheHermitianSphere: return "lohe_hermitian_sphere";
        case ModelKind::LoheMatrix: return "lohe_matrix";
        case ModelKind::ReducedSphereZ: return "reduced_sphere_z";
        case ModelKind::ReducedSlXi: return "reduced_sl_xi";
        case ModelKind::ReducedLhsXi: return "reduced_lhs_xi";
        case ModelKind::ReducedLmV: return "reduced_lm_v";
    }
    throw ConfigError("to_string: unknown model kind");
}

ModelKind model_from_string(const std::string& name) {
    for (ModelKind k :
         {ModelKind::Kuramoto, ModelKind::RealSphere, ModelKind::ComplexSphere,
          ModelKind::SchrodingerLohe, ModelKind::LoheHermitianSphere, ModelKind::LoheMatrix,
          ModelKind::ReducedSphereZ, ModelKind::ReducedSlXi, ModelKind::ReducedLhsXi,
          ModelKind::ReducedLmV}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown model '" + name + "'");
}

bool RunConfig::operator==(const RunConfig& other) const {
    auto opt_eq = [](const auto& a, const auto& b) {
        if (a.has_value() != b.has_value()) return false;
        if (!a.has_value()) return true;
        if constexpr (std::is_same_v<std::decay_t<decltype(*a)>, std::vector<CVector>> ||
                      std::is_same_v<std::decay_t<decltype(*a)>, std::vector<CMatrix>>) {
            if (a->size() != b->size()) return false;
            for (size_t i = 0; i < a->size(); ++i) {
                if ((*a)[i].rows() != (*b)[i].rows() || (*a)[i].cols() != (*b)[i].cols() ||
                    (*a)[i] != (*b)[i]) {
                    return false;
                }
            }
            return true;
        } else if constexpr (std::is_same_v<std::decay_t<decltype(*a)>, RVector> ||
                             std::is_same_v<std::decay_t<decltype(*a)>, RMatrix>) {
            return a->rows() == b->rows() && a->cols() == b->cols() && *a == *b;
        } else {
            return *a == *b;
        }
    };
    return schema_version == other.schema_version && model == other.model &&
           dimension == other.dimension && agents == other.agents && kappa == other.kappa &&
           kappa1 == other.kappa1 && opt_eq(freq_values, other.freq_values) &&
           opt_eq(freq_seed, other.freq_seed) && freq_spread == other.freq_spread &&
           opt_eq(initial_vectors, other.initial_vectors) &&
           opt_eq(initial_matrices, other.initial_matrices) &&
           opt_eq(initial_seed, other.initial_seed) && opt_eq(theta_values, other.theta_values) &&
           opt_eq(block_a, other.block_a) && opt_eq(block_b, other.block_b) && dt == other.dt &&
           t_end == other.t_end && renormalize_every == other.renormalize_every &&
           record_stride == other.record_stride && certificates == other.certificates &&
           output == other.output;
}

RunConfig parse_config(const std::string& json_text, std::vector<std::string>* warnings) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    reject_unknown(j,
                   {"schema_version", "model", "d", "N", "kappa", "kappa1", "frequencies",
                    "initial", "theta_initial", "block_a", "block_b", "dt", "t_end",
                    "renormalize_every", "record_stride", "certificates", "output"},
                   "config root");

    RunConfig cfg;
    if (!j.contains("model")) throw ConfigError("missing field 'model'");
    if (!j["model"].is_string()) throw ConfigError("field 'model' must be a string");
    cfg.model = model_from_string(j["model"].get<std::string>());
    if (is_reduced_kind(cfg.model)) {
        throw ConfigError("field 'model': reduced kinds are derived, not simulated directly");
    }
    if (j.contains("schema_version")) {
        cfg.schema_version = as_int(j["schema_version"], "schema_version");
        if (cfg.schema_version != 1) throw ConfigError("unsupported schema_version");
    }
    if (!j.contains("d")) throw ConfigError("missing field 'd'");
    if (!j.contains("N")) throw ConfigError("missing field 'N'");
    cfg.dimension = as_int(j["d"], "d");
    cfg.agents = as_int(j["N"], "N");
    if (cfg.dimension < 1) throw ConfigError("field 'd' must be positive");
    if (cfg.agents < 1) throw ConfigError("field 'N' must be positive");
    if (cfg.model == ModelKind::RealSphere && cfg.dimension % 2 != 0) {
        throw ConfigError("field 'd': real_sphere requires an even dimension (augment first)");
    }

    if (!j.contains("kappa")) throw ConfigError("missing field 'kappa'");
    cfg.kappa = as_number(j["kappa"], "kappa");
    if (j.contains("kappa1")) {
        cfg.kappa1 = as_number(j["kappa1"], "kappa1");
        if (cfg.model != ModelKind::LoheHermitianSphere && cfg.kappa1 != 0.0) {
            throw ConfigError("field 'kappa1' applies to lohe_hermitian_sphere only");
        }
    }
    if (cfg.kappa < 0.0 || cfg.kappa1 < 0.0) {
        throw ConfigError("coupling strengths must be non-negative");
    }

    if (!j.contains("frequencies")) throw ConfigError("missing field 'frequencies'");
    {
        const Json& f = j["frequencies"];
        if (!f.is_object()) throw ConfigError("field 'frequencies' must be an object");
        reject_unknown(f, {"values", "seed", "spread"}, "frequencies");
        if (f.contains("values")) {
            RVector v = as_rvector(f["values"], "frequencies.values");
            if (v.size() != cfg.agents) {
                throw ConfigError("frequencies.values length must equal N");
            }
            const double mean = v.mean();
            if (std::abs(mean) > kMeanWarnTol) {
                if (warnings) {
                    warnings->push_back("frequencies.values had nonzero mean " +
                                        std::to_string(mean) + "; mean-subtracted");
                }
                v.array() -= mean;
            }
            cfg.freq_values = std::move(v);
        } else if (f.contains("seed")) {
            cfg.freq_seed = f["seed"].get<std::uint64_t>();
            if (f.contains("spread")) cfg.freq_spread = as_number(f["spread"], "spread");
            if (cfg.freq_spread < 0.0) throw ConfigError("frequencies.spread must be >= 0");
        } else {
            throw ConfigError("frequencies needs either 'values' or 'seed'");
        }
    }

    if (cfg.model != ModelKind::Kuramoto) {
        if (!j.contains("initial")) throw ConfigError("missing field 'initial'");
        const Json& ini = j["initial"];
        if (!ini.is_object()) throw ConfigError("field 'initial' must be an object");
        reject_unknown(ini, {"states", "seed"}, "initial");
        if (ini.contains("states")) {
            const Json& st = ini["states"];
            if (!st.is_array() || st.size() != static_cast<size_t>(cfg.agents)) {
                throw ConfigError("initial.states must list N states");
            }
            if (cfg.model == ModelKind::LoheMatrix) {
                std::vector<CMatrix> mats;
                for (const auto& e : st) {
                    mats.push_back(as_cmatrix(e, cfg.dimension, "initial.states"));
                }
                cfg.initial_matrices = std::move(mats);
            } else {
                std::vector<CVector> vecs;
                for (const auto& e : st) {
                    CVector v = as_cvector(e, "initial.states");
                    if (v.size() != cfg.dimension) {
                        throw ConfigError("initial.states entries must have length d");
                    }
                    if (cfg.model == ModelKind::RealSphere &&
                        v.imag().cwiseAbs().maxCoeff() != 0.0) {
                        throw ConfigError("initial.states: real_sphere states must be real");
                    }
                    vecs.push_back(std::move(v));
                }
                cfg.initial_vectors = std::move(vecs);
            }
        } else if (ini.contains("seed")) {
            cfg.initial_seed = ini["seed"].get<std::uint64_t>();
        } else {
            throw ConfigError("initial needs either 'states' or 'seed'");
        }
    } else if (j.contains("initial")) {
        throw ConfigError("field 'initial' does not apply to the kuramoto model");
    }

    if (j.contains("theta_initial")) {
        const Json& th = j["theta_initial"];
        if (th.is_string()) {
            if (th.get<std::string>() != "zeros") {
                throw ConfigError("theta_initial must be \"zeros\" or {\"values\": [..]}");
            }
        } else if (th.is_object()) {
            reject_unknown(th, {"values"}, "theta_initial");
            if (!th.contains("values")) throw ConfigError("theta_initial.values missing");
            RVector v = as_rvector(th["values"], "theta_initial.values");
            if (v.size() != cfg.agents) {
                throw ConfigError("theta_initial.values length must equal N");
            }
            if (std::abs(v.sum()) > 1e-12) {
                throw ConfigError("theta_initial.values must be zero-sum");
            }
            cfg.theta_values = std::move(v);
        } else {
            throw ConfigError("theta_initial must be \"zeros\" or {\"values\": [..]}");
        }
    }

    for (const char* key : {"block_a", "block_b"}) {
        if (j.contains(key)) {
            if (cfg.model != ModelKind::RealSphere) {
                throw ConfigError(std::string("field '") + key + "' applies to real_sphere only");
            }
            RMatrix m = as_rmatrix(j[key], key);
            const auto half = cfg.dimension / 2;
            if (m.rows() != half || m.cols() != half) {
                throw ConfigError(std::string("field '") + key + "' must be (d/2) x (d/2)");
            }
            (std::string(key) == "block_a" ? cfg.block_a : cfg.block_b) = std::move(m);
        }
    }

    if (j.contains("dt")) cfg.dt = as_number(j["dt"], "dt");
    if (j.contains("t_end")) cfg.t_end = as_number(j["t_end"], "t_end");
    if (j.contains("renormalize_every")) {
        cfg.renormalize_every = as_int(j["renormalize_every"], "renormalize_every");
    }
    if (j.contains("record_stride")) {
        cfg.record_stride = as_int(j["record_stride"], "record_stride");
    }
    IntegratorConfig icfg{cfg.dt, cfg.t_end, cfg.renormalize_every, cfg.record_stride};
    icfg.validate();

    if (j.contains("certificates")) {
        if (!j["certificates"].is_array()) {
            throw ConfigError("field 'certificates' must be an array");
        }
        for (const auto& c : j["certificates"]) {
            if (!c.is_string()) throw ConfigError("certificates entries must be strings");
            cfg.certificates.push_back(theorem_from_string(c.get<std::string>()));
        }
    }

    if (j.contains("output")) {
        const Json& o = j["output"];
        if (!o.is_object()) throw ConfigError("field 'output' must be an object");
        reject_unknown(o, {"csv", "json"}, "output");
        if (o.contains("csv")) cfg.output.csv = o["csv"].get<std::string>();
        if (o.contains("json")) cfg.output.json = o["json"].get<std::string>();
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    Json j;
    j["schema_version"] = cfg.schema_version;
    j["model"] = to_string(cfg.model);
    j["d"] = cfg.dimension;
    j["N"] = cfg.agents;
    j["kappa"] = cfg.kappa;
    if (cfg.kappa1 != 0.0) j["kappa1"] = cfg.kappa1;
    Json f;
    if (cfg.freq_values) {
        f["values"] = rvector_to_json(*cfg.freq_values);
    } else if (cfg.freq_seed) {
        f["seed"] = *cfg.freq_seed;
        f["spread"] = cfg.freq_spread;
    }
    j["frequencies"] = f;
    if (cfg.model != ModelKind::Kuramoto) {
        Json ini;
        if (cfg.initial_vectors) {
            Json st = Json::array();
            for (const auto& v : *cfg.initial_vectors) st.push_back(cvector_to_json(v));
            ini["states"] = st;
        } else if (cfg.initial_matrices) {
            Json st = Json::array();
            for (const auto& m : *cfg.initial_matrices) st.push_back(cmatrix_to_json(m));
            ini["states"] = st;
        } else if (cfg.initial_seed) {
            ini["seed"] = *cfg.initial_seed;
        }
        j["initial"] = ini;
    }
    if (cfg.theta_values) {
        j["theta_initial"] = Json{{"values", rvector_to_json(*cfg.theta_values)}};
    } else {
        j["theta_initial"] = "zeros";
    }
    if (cfg.block_a) j["block_a"] = rmatrix_to_json(*cfg.block_a);
    if (cfg.block_b) j["block_b"] = rmatrix_to_json(*cfg.block_b);
    j["dt"] = cfg.dt;
    j["t_end"] = cfg.t_end;
    j["renormalize_every"] = cfg.renormalize_every;
    j["record_stride"] = cfg.record_stride;
    if (!cfg.certificates.empty()) {
        Json c = Json::array();
        for (const auto id : cfg.certificates) c.push_back(to_string(id));
        j["certificates"] = c;
    }
    if (!cfg.output.csv.empty() || !cfg.output.json.empty()) {
        Json o;
        if (!cfg.output.csv.empty()) o["csv"] = cfg.output.csv;
        if (!cfg.output.json.empty()) o["json"] = cfg.output.json;
        j["output"] = o;
    }
    return j.dump(2);
}

}  // namespace aggsync
