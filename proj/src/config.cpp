// config.cpp — Config schema, overrides, canonical serialization, manifest

#include "dforge/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "dforge/presets.hpp"
#include "dforge/tabular.hpp"

namespace dforge {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw ValidationError("config: unknown key '" + it.key() + "' in " + where);
    }
}

double require_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw ValidationError("config: missing numeric '" + std::string(key) + "' in " + where);
    return obj[key].get<double>();
}

Matrix parse_matrix(const json& rows, const std::string& where) {
    if (!rows.is_array() || rows.empty())
        throw ValidationError("config: matrix must be a non-empty array in " + where);
    const Index nr = Index(rows.size());
    const Index nc = Index(rows[0].size());
    Matrix m(nr, nc);
    for (Index r = 0; r < nr; ++r) {
        if (!rows[r].is_array() || Index(rows[r].size()) != nc)
            throw ValidationError("config: ragged matrix in " + where);
        for (Index c = 0; c < nc; ++c) {
            const json& entry = rows[r][c];
            if (!entry.is_array() || entry.size() != 2)
                throw ValidationError("config: matrix entries are [re, im] pairs in " + where);
            m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

TimeProfile parse_profile(const json& p, const std::string& where) {
    reject_unknown(p, {"kind", "params"}, where);
    if (!p.contains("kind") || !p["kind"].is_string())
        throw ValidationError("config: profile needs a 'kind' in " + where);
    const std::string kind = p["kind"].get<std::string>();
    const json params = p.value("params", json::object());
    if (kind == "constant") {
        reject_unknown(params, {"value"}, where);
        return TimeProfile::constant(require_number(params, "value", where));
    }
    if (kind == "exponential") {
        reject_unknown(params, {"amplitude", "rate", "power"}, where);
        return TimeProfile::exponential(require_number(params, "amplitude", where),
                                        require_number(params, "rate", where),
                                        int(params.value("power", 0.0)));
    }
    if (kind == "sinusoidal") {
        reject_unknown(params, {"amplitude", "omega", "phase"}, where);
        return TimeProfile::sinusoidal(require_number(params, "amplitude", where),
                                       require_number(params, "omega", where),
                                       params.value("phase", 0.0));
    }
    if (kind == "polynomial") {
        reject_unknown(params, {"coeffs"}, where);
        if (!params.contains("coeffs") || !params["coeffs"].is_array())
            throw ValidationError("config: polynomial profile needs 'coeffs' in " + where);
        return TimeProfile::polynomial(params["coeffs"].get<std::vector<double>>());
    }
    if (kind == "tabulated") {
        reject_unknown(params, {"times", "values"}, where);
        return TimeProfile::tabulated(params.at("times").get<std::vector<double>>(),
                                      params.at("values").get<std::vector<double>>());
    }
    throw ValidationError("config: unknown profile kind '" + kind + "' in " + where);
}

LindbladSpec parse_spec(const json& sys, const std::string& where) {
    reject_unknown(sys, {"dim", "hamiltonian_terms", "jump_terms"}, where);
    LindbladSpec spec;
    spec.dim = Index(require_number(sys, "dim", where));
    for (const json& term : sys.value("hamiltonian_terms", json::array())) {
        reject_unknown(term, {"matrix", "profile"}, where + ".hamiltonian_terms");
        spec.hamiltonian_terms.push_back({parse_matrix(term.at("matrix"), where),
                                          parse_profile(term.at("profile"), where)});
    }
    for (const json& term : sys.value("jump_terms", json::array())) {
        reject_unknown(term, {"matrix", "profile"}, where + ".jump_terms");
        spec.jump_terms.push_back({parse_matrix(term.at("matrix"), where),
                                   parse_profile(term.at("profile"), where)});
    }
    spec.validate();
    return spec;
}

Stage parse_stage(const std::string& name) {
    if (name == "dilate") return Stage::kDilate;
    if (name == "simulate") return Stage::kSimulate;
    if (name == "diagnose") return Stage::kDiagnose;
    if (name == "compare") return Stage::kCompare;
    if (name == "rescale") return Stage::kRescale;
    if (name == "figures") return Stage::kFigures;
    throw ValidationError("config: unknown stage '" + name + "'");
}

} // namespace

std::string stage_name(Stage stage) {
    switch (stage) {
        case Stage::kDilate: return "dilate";
        case Stage::kSimulate: return "simulate";
        case Stage::kDiagnose: return "diagnose";
        case Stage::kCompare: return "compare";
        case Stage::kRescale: return "rescale";
        case Stage::kFigures: return "figures";
    }
    return "?";
}

LindbladSpec ExperimentConfig::build_spec() const {
    if (explicit_spec) return *explicit_spec;
    return presets::make(preset, preset_params);
}

DensityMatrix ExperimentConfig::build_initial_state() const {
    const Index d = build_spec().dim;
    if (initial_state == "plus") {
        Vector v = Vector::Constant(d, Complex(1.0 / std::sqrt(double(d)), 0.0));
        return DensityMatrix::pure(v);
    }
    if (initial_state == "mixed")
        return DensityMatrix(Matrix::Identity(d, d) / double(d));
    if (initial_state == "ground") {
        Vector v = Vector::Zero(d);
        v(0) = 1.0;
        return DensityMatrix::pure(v);
    }
    throw ValidationError("config: unknown initial_state '" + initial_state + "'");
}

ExperimentConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: parse error: ") + e.what());
    }
    reject_unknown(doc, {"system", "grid", "pipeline", "cutoff", "perturbation", "output"},
                   "top level");

    ExperimentConfig cfg;
    if (!doc.contains("system")) throw ValidationError("config: missing 'system' block");
    const json& sys = doc["system"];
    if (sys.contains("preset")) {
        reject_unknown(sys, {"preset", "params"}, "system");
        cfg.preset = sys["preset"].get<std::string>();
        for (auto it = sys.value("params", json::object()).begin();
             it != sys.value("params", json::object()).end(); ++it)
            cfg.preset_params[it.key()] = it.value().get<double>();
        presets::make(cfg.preset, cfg.preset_params); // validate now
    } else {
        cfg.explicit_spec = parse_spec(sys, "system");
    }

    if (!doc.contains("grid")) throw ValidationError("config: missing 'grid' block");
    reject_unknown(doc["grid"], {"t_start", "t_end", "n_steps"}, "grid");
    cfg.grid = TimeGrid(doc["grid"].value("t_start", 0.0),
                        require_number(doc["grid"], "t_end", "grid"),
                        Index(require_number(doc["grid"], "n_steps", "grid")));

    if (!doc.contains("pipeline")) throw ValidationError("config: missing 'pipeline' block");
    const json& pipe = doc["pipeline"];
    reject_unknown(pipe, {"stages", "compare_tolerance", "initial_state"}, "pipeline");
    if (!pipe.contains("stages") || !pipe["stages"].is_array() || pipe["stages"].empty())
        throw ValidationError("config: pipeline.stages must be a non-empty list");
    for (const json& s : pipe["stages"]) cfg.stages.push_back(parse_stage(s.get<std::string>()));
    cfg.compare_tolerance = pipe.value("compare_tolerance", 1e-6);
    cfg.initial_state = pipe.value("initial_state", std::string("plus"));

    if (doc.contains("cutoff")) {
        reject_unknown(doc["cutoff"], {"C", "mode"}, "cutoff");
        CutoffPolicy policy;
        policy.C = require_number(doc["cutoff"], "C", "cutoff");
        const std::string mode = doc["cutoff"].value("mode", std::string("prefactor_clamp"));
        if (mode == "prefactor_clamp") policy.mode = CutoffPolicy::Mode::kPrefactorClamp;
        else if (mode == "norm_clamp") policy.mode = CutoffPolicy::Mode::kNormClamp;
        else throw ValidationError("config: unknown cutoff mode '" + mode + "'");
        cfg.cutoff = policy;
    }

    if (doc.contains("perturbation")) {
        reject_unknown(doc["perturbation"], {"delta", "generator"}, "perturbation");
        ExperimentConfig::Perturbation pert;
        pert.delta = require_number(doc["perturbation"], "delta", "perturbation");
        if (pert.delta < 0) throw ValidationError("config: perturbation.delta must be >= 0");
        pert.generator = parse_spec(doc["perturbation"].at("generator"), "perturbation.generator");
        cfg.perturbation = pert;
    }

    if (doc.contains("output")) {
        reject_unknown(doc["output"], {"directory", "formats"}, "output");
        cfg.output_directory = doc["output"].value("directory", std::string("out"));
        if (doc["output"].contains("formats"))
            cfg.formats = doc["output"]["formats"].get<std::vector<std::string>>();
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("config: cannot open " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string apply_overrides(const std::string& text, const std::vector<std::string>& overrides) {
    if (overrides.empty()) return text;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: parse error: ") + e.what());
    }
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ValidationError("override '" + ov + "' is not of the form key.path=value");
        const std::string path = ov.substr(0, eq);
        const std::string value = ov.substr(eq + 1);
        json* node = &doc;
        std::size_t pos = 0;
        while (true) {
            const auto dot = path.find('.', pos);
            const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
            if (dot == std::string::npos) {
                json parsed;
                try {
                    parsed = json::parse(value);
                } catch (const json::exception&) {
                    parsed = value; // bare strings allowed
                }
                (*node)[key] = parsed;
                break;
            }
            node = &((*node)[key]);
            pos = dot + 1;
        }
    }
    return doc.dump();
}

namespace {

void canonical_dump(const json& node, std::string& out) {
    switch (node.type()) {
        case json::value_t::object: {
            out += '{'; // nlohmann objects iterate in sorted key order
            bool first = true;
            for (auto it = node.begin(); it != node.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                canonical_dump(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < node.size(); ++i) {
                if (i) out += ',';
                canonical_dump(node[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float:
            out += format_double(node.get<double>());
            break;
        default:
            out += node.dump();
    }
}

} // namespace

std::string canonical_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: parse error: ") + e.what());
    }
    std::string out;
    canonical_dump(doc, out);
    return out;
}

std::string config_hash(const std::string& canonical_text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunManifest::to_json() const {
    json doc;
    doc["config_hash"] = config_hash;
    doc["tool_version"] = tool_version;
    json t = json::array();
    for (const auto& s : timings) t.push_back({{"stage", s.stage}, {"seconds", s.seconds}});
    doc["stage_seconds"] = t;
    doc["warnings"] = warnings;
    return doc.dump(2);
}

} // namespace dforge
