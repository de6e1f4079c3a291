#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lrc/config.hpp"
#include "lrc/coupled.hpp"
#include "lrc/gillespie.hpp"
#include "lrc/io.hpp"
#include "lrc/rates.hpp"
#include "lrc/urn.hpp"

using namespace lrc;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<int> d, m, runs;
    std::optional<double> alpha_minus, alpha_plus, lambda_c, lambda_a, lambda_b;
    std::string lambda_kind;
    std::optional<std::uint64_t> seed;
    std::string engine, out_dir, format, scenario, norm_p;
};

void attach_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--d", o.d, "dimension");
    cmd->add_option("--m", o.m, "side length (n = m^d)");
    cmd->add_option("--norm-p", o.norm_p, "p-norm selector (>= 1 or 'inf')");
    cmd->add_option("--alpha-minus", o.alpha_minus, "first-type exponent (constant)");
    cmd->add_option("--alpha-plus", o.alpha_plus, "second-type exponent (constant)");
    cmd->add_option("--lambda-kind", o.lambda_kind, "intensity family kind");
    cmd->add_option("--lambda-c", o.lambda_c, "intensity constant c");
    cmd->add_option("--lambda-a", o.lambda_a, "intensity coefficient a");
    cmd->add_option("--lambda-b", o.lambda_b, "intensity coefficient b");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--runs", o.runs, "number of runs");
    cmd->add_option("--engine", o.engine, "coupled | oracle");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--format", o.format, "csv | json");
}

// flags override the config document; everything funnels through the same
// strict parser
json merged_document(const CommonOpts& o) {
    json doc = json::object();
    if (!o.config_path.empty()) {
        std::ifstream is(o.config_path);
        if (!is) throw ConfigError("cannot read config file '" + o.config_path + "'");
        std::stringstream ss;
        ss << is.rdbuf();
        doc = json::parse(ss.str()); // strictness re-checked by parse_config
    }
    if (o.d) doc["d"] = *o.d;
    if (o.m) doc["m"] = *o.m;
    if (!o.norm_p.empty()) {
        try {
            doc["norm_p"] = std::stod(o.norm_p);
        } catch (...) {
            doc["norm_p"] = o.norm_p;
        }
    }
    if (o.alpha_minus) doc["alpha_minus"] = json{{"kind", "constant"}, {"c", *o.alpha_minus}};
    if (o.alpha_plus) doc["alpha_plus"] = json{{"kind", "constant"}, {"c", *o.alpha_plus}};
    if (!o.lambda_kind.empty() || o.lambda_c || o.lambda_a || o.lambda_b) {
        json lam;
        lam["kind"] = o.lambda_kind.empty() ? "constant" : o.lambda_kind;
        if (o.lambda_c) lam["c"] = *o.lambda_c;
        if (o.lambda_a) lam["a"] = *o.lambda_a;
        if (o.lambda_b) lam["b"] = *o.lambda_b;
        if (lam["kind"] == "constant" && !lam.contains("c")) lam["c"] = 1.0;
        doc["lambda"] = lam;
    }
    if (o.seed) doc["seed"] = *o.seed;
    if (o.runs) doc["runs"] = *o.runs;
    if (!o.engine.empty()) doc["engine"] = o.engine;
    if (!o.out_dir.empty()) doc["out_dir"] = o.out_dir;
    if (!o.format.empty()) doc["format"] = o.format;
    if (!o.scenario.empty()) doc["scenario"] = o.scenario;
    return doc;
}

int cmd_rates(const CommonOpts& o) {
    auto cfg = parse_config(merged_document(o).dump());
    if (!cfg.simulate) throw ConfigError("rates needs instance parameters, not a scenario");
    const ModelParams& params = cfg.simulate->params;
    const RateSummary s = total_rates(params);
    json out;
    out["n"] = params.n();
    out["r_minus"] = s.r_minus;
    out["r_plus"] = s.r_plus;
    out["z"] = s.z;
    out["c_n"] = s.c;
    out["regime"] = to_string(s.regime);
    std::printf("%s\n", out.dump(2).c_str());
    return 0;
}

int cmd_simulate(const CommonOpts& o) {
    auto cfg = parse_config(merged_document(o).dump());
    if (!cfg.simulate) throw ConfigError("simulate needs instance parameters, not a scenario");
    const SimulateJob& job = *cfg.simulate;
    const RunContext ctx = make_run_context(job.params);

    std::vector<RunRow> rows(static_cast<std::size_t>(job.runs));
    parallel_runs(job.runs, [&](int i) {
        const std::uint64_t seed = derive_stream(job.seed, static_cast<std::uint64_t>(i));
        RunResult res;
        if (job.engine == EngineKind::coupled)
            res = coupled_run(ctx, seed, job.checkpoints).result;
        else
            res = gillespie_run(ctx, seed, job.checkpoints);
        rows[static_cast<std::size_t>(i)] = make_row(res, static_cast<std::uint64_t>(i));
    });

    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.format == "csv") {
        write_text_file(cfg.out_dir + "/runs.csv", rows_csv(rows));
    } else {
        json out;
        out["rng"] = std::string(Rng::family()) + "+splitmix64-stream";
        out["params"] = params_to_json(job.params);
        out["engine"] = to_string(job.engine);
        out["seed"] = job.seed;
        out["runs"] = job.runs;
        json jrows = json::array();
        for (const auto& r : rows) jrows.push_back(row_to_json(r));
        out["rows"] = jrows;
        write_text_file(cfg.out_dir + "/runs.json", out.dump(2) + "\n");
    }
    std::printf("simulate: %d runs of n=%llu (%s engine) -> %s\n", job.runs,
                static_cast<unsigned long long>(job.params.n()), to_string(job.engine).c_str(),
                cfg.out_dir.c_str());
    return 0;
}

int cmd_experiment(const CommonOpts& o) {
    auto cfg = parse_config(merged_document(o).dump());
    if (!cfg.scenario) throw ConfigError("experiment needs a 'scenario' (via --scenario or config)");
    const ScenarioReport rep = run_scenario(*cfg.scenario);
    write_report_files(rep, cfg.out_dir, rep.spec.name);
    for (const auto& c : rep.checks)
        std::printf("%-4s %s: %.6g %s %.6g\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value,
                    c.comparator.c_str(), c.threshold);
    std::printf("%s: %s (%.1fs) -> %s/%s_{runs.csv,report.json}\n", rep.spec.name.c_str(),
                rep.pass ? "PASS" : "FAIL", rep.runtime_sec, cfg.out_dir.c_str(), rep.spec.name.c_str());
    return 0;
}

int cmd_urn(std::uint64_t n, double z, int runs, std::uint64_t seed, const std::string& out_dir) {
    std::ostringstream os;
    os << "run_index,n,z,n_minus,n_plus,m_n,seed\n";
    for (int i = 0; i < runs; ++i) {
        const std::uint64_t s = derive_stream(seed, static_cast<std::uint64_t>(i));
        const auto [nm, np] = urn_run(n, z, s);
        os << i << ',' << n << ',' << format_double(z) << ',' << nm << ',' << np << ',' << std::min(nm, np)
           << ',' << s << "\n";
    }
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/urn.csv", os.str());
    std::printf("urn: %d runs of n=%llu, z=%g -> %s/urn.csv\n", runs, static_cast<unsigned long long>(n), z,
                out_dir.c_str());
    return 0;
}

int cmd_validate(int runs, std::uint64_t seed) {
    bool all = true;
    for (const std::string name : {"engine-crossval", "urn-crossval"}) {
        ScenarioSpec spec = builtin_scenario(name);
        if (runs > 0) spec.runs = runs;
        spec.master_seed = seed;
        const ScenarioReport rep = run_scenario(spec);
        for (const auto& c : rep.checks)
            std::printf("%-4s %s: p=%.4g (threshold %.3g)\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value,
                        c.threshold);
        all = all && rep.pass;
    }
    std::printf("validate: %s\n", all ? "PASS" : "FAIL");
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo laboratory for two competing long-range infections on the torus"};
    app.require_subcommand(1);

    CommonOpts rates_o, sim_o, exp_o;
    auto* rates_cmd = app.add_subcommand("rates", "print total rates and derived constants as JSON");
    attach_common(rates_cmd, rates_o);

    auto* sim_cmd = app.add_subcommand("simulate", "run one parameter set to cover, N times");
    attach_common(sim_cmd, sim_o);

    auto* exp_cmd = app.add_subcommand("experiment", "run a statistical scenario over an n-grid");
    attach_common(exp_cmd, exp_o);
    exp_cmd->add_option("--scenario", exp_o.scenario, "builtin scenario name");

    std::uint64_t urn_n = 25;
    double urn_z = 2.0;
    int urn_runs = 1000;
    std::uint64_t urn_seed = 20260810;
    std::string urn_out = "out";
    auto* urn_cmd = app.add_subcommand("urn", "exact two-color urn runs (the alpha = 0 reference)");
    urn_cmd->add_option("--n", urn_n, "target total mass");
    urn_cmd->add_option("--z", urn_z, "replacement weight of the second color");
    urn_cmd->add_option("--runs", urn_runs, "number of runs");
    urn_cmd->add_option("--seed", urn_seed, "master seed");
    urn_cmd->add_option("--out", urn_out, "output directory");

    int val_runs = 10000;
    std::uint64_t val_seed = 20260810;
    auto* val_cmd = app.add_subcommand("validate", "cross-check the engines and the urn reference");
    val_cmd->add_option("--runs", val_runs, "runs per side");
    val_cmd->add_option("--seed", val_seed, "master seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rates_cmd->parsed()) return cmd_rates(rates_o);
        if (sim_cmd->parsed()) return cmd_simulate(sim_o);
        if (exp_cmd->parsed()) return cmd_experiment(exp_o);
        if (urn_cmd->parsed()) return cmd_urn(urn_n, urn_z, urn_runs, urn_seed, urn_out);
        if (val_cmd->parsed()) return cmd_validate(val_runs, val_seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
