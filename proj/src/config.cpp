#include "lrc/config.hpp"

#include <set>

#include <nlohmann/json.hpp>

namespace lrc {

using nlohmann::json;

namespace {

json parse_strict(const std::string& text) {
    std::vector<std::set<std::string>> object_keys;
    json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::object_start) {
            object_keys.emplace_back();
        } else if (event == json::parse_event_t::object_end) {
            object_keys.pop_back();
        } else if (event == json::parse_event_t::key) {
            const auto key = parsed.get<std::string>();
            if (!object_keys.back().insert(key).second)
                throw ConfigError("duplicate key '" + key + "'");
        }
        return true;
    };
    try {
        return json::parse(text, cb);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key))
            throw ConfigError("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
    }
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ConfigError("missing key '" + path + "." + key + "'");
    if (!obj[key].is_number()) throw ConfigError("'" + path + "." + key + "' must be a number");
    return obj[key].get<double>();
}

double parse_norm_p(const json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return kNormInf;
        throw ConfigError("'norm_p' must be a number >= 1 or \"inf\"");
    }
    if (!v.is_number()) throw ConfigError("'norm_p' must be a number >= 1 or \"inf\"");
    const double p = v.get<double>();
    if (!(p >= 1.0)) throw ConfigError("'norm_p' must satisfy p >= 1");
    return p;
}

Placement parse_placement(const json& v) {
    const auto s = v.get<std::string>();
    if (s == "antipodal") return Placement::antipodal;
    if (s == "uniform-distinct") return Placement::uniform_distinct;
    if (s == "explicit") return Placement::explicit_sources;
    throw ConfigError("'placement' must be one of antipodal, uniform-distinct, explicit");
}

EngineKind parse_engine(const json& v) {
    const auto s = v.get<std::string>();
    if (s == "coupled") return EngineKind::coupled;
    if (s == "oracle") return EngineKind::oracle;
    throw ConfigError("'engine' must be coupled or oracle");
}

Coords parse_coords(const json& v, int d, const std::string& path) {
    if (!v.is_array() || static_cast<int>(v.size()) != d)
        throw ConfigError("'" + path + "' must be an array of " + std::to_string(d) + " integers");
    Coords c{};
    for (int i = 0; i < d; ++i) c[i] = v[static_cast<std::size_t>(i)].get<std::int32_t>();
    return c;
}

} // namespace

json family_to_json(const ParamFamily& fam) {
    json j;
    j["kind"] = fam.kind_name();
    switch (fam.kind) {
        case ParamFamily::Kind::constant:
            j["c"] = fam.a;
            break;
        case ParamFamily::Kind::table: {
            json values = json::object();
            for (const auto& [n, v] : fam.values) values[std::to_string(n)] = v;
            j["values"] = values;
            break;
        }
        default:
            j["a"] = fam.a;
            j["b"] = fam.b;
    }
    return j;
}

ParamFamily family_from_json(const json& j, const std::string& path) {
    if (j.is_number()) return ParamFamily::constant(j.get<double>()); // shorthand
    if (!j.is_object()) throw ConfigError("'" + path + "' must be a family object or a number");
    if (!j.contains("kind")) throw ConfigError("missing key '" + path + ".kind'");
    const auto kind = j["kind"].get<std::string>();
    if (kind == "constant") {
        reject_unknown(j, {"kind", "c"}, path);
        return ParamFamily::constant(require_number(j, "c", path));
    }
    if (kind == "affine-log" || kind == "log-squared" || kind == "power") {
        reject_unknown(j, {"kind", "a", "b"}, path);
        const double a = require_number(j, "a", path);
        const double b = require_number(j, "b", path);
        if (kind == "affine-log") return ParamFamily::affine_log(a, b);
        if (kind == "log-squared") return ParamFamily::log_squared(a, b);
        return ParamFamily::power(a, b);
    }
    if (kind == "table") {
        reject_unknown(j, {"kind", "values"}, path);
        if (!j.contains("values") || !j["values"].is_object())
            throw ConfigError("'" + path + ".values' must map n to values");
        std::map<std::uint64_t, double> values;
        for (const auto& [key, v] : j["values"].items())
            values[std::stoull(key)] = v.get<double>();
        return ParamFamily::table(std::move(values));
    }
    throw ConfigError("'" + path + ".kind' must be one of constant, affine-log, log-squared, power, table");
}

json scenario_to_json(const ScenarioSpec& spec) {
    json j;
    j["scenario"] = spec.name;
    j["d"] = spec.d;
    if (spec.norm_p == kNormInf)
        j["norm_p"] = "inf";
    else
        j["norm_p"] = spec.norm_p;
    j["alpha_minus"] = family_to_json(spec.alpha_minus);
    j["alpha_plus"] = family_to_json(spec.alpha_plus);
    j["lambda"] = family_to_json(spec.lambda);
    j["placement"] = to_string(spec.placement);
    if (spec.placement == Placement::explicit_sources) {
        std::vector<std::int32_t> sm(spec.source_minus.begin(), spec.source_minus.begin() + spec.d);
        std::vector<std::int32_t> sp(spec.source_plus.begin(), spec.source_plus.begin() + spec.d);
        j["source_minus"] = sm;
        j["source_plus"] = sp;
    }
    j["engine"] = to_string(spec.engine);
    j["n_grid"] = spec.m_grid;
    j["runs"] = spec.runs;
    j["seed"] = spec.master_seed;
    j["checkpoints"] = spec.checkpoints;
    if (spec.phase_m) {
        j["phase_m"] = *spec.phase_m;
        j["phase_a"] = spec.phase_a;
        j["phase_xi"] = spec.phase_xi;
    }
    j["defect_delta"] = spec.defect_delta;
    return j;
}

ScenarioSpec scenarios_apply_overrides(ScenarioSpec spec, const json& j);

ScenarioSpec scenario_from_json(const json& j) {
    if (!j.contains("scenario")) throw ConfigError("missing key 'scenario'");
    ScenarioSpec spec = builtin_scenario(j["scenario"].get<std::string>());
    return scenarios_apply_overrides(std::move(spec), j);
}

ScenarioSpec scenarios_apply_overrides(ScenarioSpec spec, const json& j) {
    bool grid_overridden = false;
    bool lambda_overridden = false;
    if (j.contains("d")) spec.d = j["d"].get<int>();
    if (j.contains("norm_p")) spec.norm_p = parse_norm_p(j["norm_p"]);
    if (j.contains("alpha_minus")) spec.alpha_minus = family_from_json(j["alpha_minus"], "alpha_minus");
    if (j.contains("alpha_plus")) spec.alpha_plus = family_from_json(j["alpha_plus"], "alpha_plus");
    if (j.contains("lambda")) {
        spec.lambda = family_from_json(j["lambda"], "lambda");
        lambda_overridden = true;
    }
    if (j.contains("placement")) spec.placement = parse_placement(j["placement"]);
    if (j.contains("source_minus")) spec.source_minus = parse_coords(j["source_minus"], spec.d, "source_minus");
    if (j.contains("source_plus")) spec.source_plus = parse_coords(j["source_plus"], spec.d, "source_plus");
    if (j.contains("engine")) spec.engine = parse_engine(j["engine"]);
    if (j.contains("n_grid")) {
        spec.m_grid = j["n_grid"].get<std::vector<int>>();
        grid_overridden = true;
    } else if (j.contains("m")) {
        spec.m_grid = {j["m"].get<int>()};
        grid_overridden = true;
    }
    if (j.contains("runs")) spec.runs = j["runs"].get<int>();
    if (j.contains("seed")) spec.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("checkpoints")) spec.checkpoints = j["checkpoints"].get<std::vector<double>>();
    if (j.contains("phase_m")) spec.phase_m = j["phase_m"].get<double>();
    if (j.contains("phase_a")) spec.phase_a = j["phase_a"].get<double>();
    if (j.contains("phase_xi")) spec.phase_xi = j["phase_xi"].get<double>();
    if (j.contains("defect_delta")) spec.defect_delta = j["defect_delta"].get<double>();

    // the case-iv intensity is materialized per grid, so a new grid without
    // an explicit lambda regenerates the table
    if (spec.name == "case-iv" && grid_overridden && !lambda_overridden) {
        std::map<std::uint64_t, double> tab;
        for (int m : spec.m_grid) {
            std::uint64_t n = 1;
            for (int i = 0; i < spec.d; ++i) n *= static_cast<std::uint64_t>(m);
            tab[n] = 1.0 + 1.0 / std::sqrt(std::log(static_cast<double>(n)));
        }
        spec.lambda = ParamFamily::table(std::move(tab));
    }
    spec.validate();
    return spec;
}

json params_to_json(const ModelParams& params) {
    json j;
    j["d"] = params.spec.d;
    j["m"] = params.spec.m;
    if (params.spec.norm_p == kNormInf)
        j["norm_p"] = "inf";
    else
        j["norm_p"] = params.spec.norm_p;
    j["alpha_minus"] = family_to_json(params.alpha_minus);
    j["alpha_plus"] = family_to_json(params.alpha_plus);
    j["lambda"] = family_to_json(params.lambda);
    j["placement"] = to_string(params.placement);
    if (params.placement == Placement::explicit_sources) {
        std::vector<std::int32_t> sm(params.source_minus.begin(), params.source_minus.begin() + params.spec.d);
        std::vector<std::int32_t> sp(params.source_plus.begin(), params.source_plus.begin() + params.spec.d);
        j["source_minus"] = sm;
        j["source_plus"] = sp;
    }
    return j;
}

ParsedConfig parse_config(const std::string& json_text) {
    const json doc = parse_strict(json_text);
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    static const std::set<std::string> allowed = {
        "d",          "m",        "norm_p",   "alpha_minus", "alpha_plus",  "lambda",
        "placement",  "engine",   "runs",     "n_grid",      "checkpoints", "scenario",
        "seed",       "out_dir",  "format",   "source_minus", "source_plus", "phase_m",
        "phase_a",    "phase_xi", "defect_delta"};
    reject_unknown(doc, allowed, "");

    ParsedConfig out;
    if (doc.contains("out_dir")) out.out_dir = doc["out_dir"].get<std::string>();
    if (doc.contains("format")) {
        out.format = doc["format"].get<std::string>();
        if (out.format != "csv" && out.format != "json")
            throw ConfigError("'format' must be csv or json");
    }

    if (doc.contains("scenario")) {
        out.scenario = scenario_from_json(doc);
        return out;
    }

    SimulateJob job;
    if (!doc.contains("m")) throw ConfigError("missing key 'm' (or 'scenario')");
    job.params.spec.m = doc["m"].get<int>();
    if (doc.contains("d")) job.params.spec.d = doc["d"].get<int>();
    if (doc.contains("norm_p")) job.params.spec.norm_p = parse_norm_p(doc["norm_p"]);
    if (doc.contains("alpha_minus")) job.params.alpha_minus = family_from_json(doc["alpha_minus"], "alpha_minus");
    if (doc.contains("alpha_plus")) job.params.alpha_plus = family_from_json(doc["alpha_plus"], "alpha_plus");
    if (doc.contains("lambda")) job.params.lambda = family_from_json(doc["lambda"], "lambda");
    if (doc.contains("placement")) job.params.placement = parse_placement(doc["placement"]);
    if (job.params.placement == Placement::explicit_sources) {
        if (!doc.contains("source_minus") || !doc.contains("source_plus"))
            throw ConfigError("explicit placement requires 'source_minus' and 'source_plus'");
        job.params.source_minus = parse_coords(doc["source_minus"], job.params.spec.d, "source_minus");
        job.params.source_plus = parse_coords(doc["source_plus"], job.params.spec.d, "source_plus");
    }
    if (doc.contains("engine")) job.engine = parse_engine(doc["engine"]);
    if (doc.contains("runs")) job.runs = doc["runs"].get<int>();
    if (doc.contains("seed")) job.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("checkpoints")) job.checkpoints = doc["checkpoints"].get<std::vector<double>>();
    if (doc.contains("n_grid")) throw ConfigError("'n_grid' is only valid together with 'scenario'");

    try {
        job.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (job.runs < 1) throw ConfigError("'runs' must be >= 1");
    out.simulate = job;
    return out;
}

} // namespace lrc
