#include "lrc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "lrc/coupled.hpp"
#include "lrc/gillespie.hpp"
#include "lrc/rates.hpp"
#include "lrc/urn.hpp"
#include "lrc/yule.hpp"

namespace lrc {

int thread_count() {
    if (const char* env = std::getenv("LRC_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_runs(int total, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_count(), total);
    if (workers <= 1) {
        for (int i = 0; i < total; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

void ScenarioSpec::validate() const {
    if (runs < 100) throw std::invalid_argument("scenario: need at least 100 runs");
    if (m_grid.empty()) throw std::invalid_argument("scenario: empty n-grid");
    for (int m : m_grid)
        if (m < 2) throw std::invalid_argument("scenario: side lengths must be >= 2");
    if (phase_m && !(*phase_m > 0.0)) throw std::invalid_argument("scenario: phase constant must be positive");
}

RunRow make_row(const RunResult& r, std::uint64_t run_index) {
    RunRow row;
    row.run_index = run_index;
    row.m = r.m;
    row.n = r.n;
    row.z = r.z;
    row.c_n = r.c_n;
    row.n_minus = r.n_minus;
    row.n_plus = r.n_plus;
    row.m_n = r.m_n;
    row.t_cov = r.t_cov;
    row.proposals = r.proposals;
    row.rejections = r.rejections;
    row.defect_minus_at_tn = r.defect_minus_at_phase;
    row.defect_plus_at_tn = r.defect_plus_at_phase;
    row.seed = r.stream_seed;
    return row;
}

std::vector<std::string> builtin_scenario_names() {
    return {"coexistence", "case-i",  "case-ii",       "case-iii",        "case-iv",
            "defect-bound", "yule-law", "rn-convergence", "engine-crossval", "urn-crossval"};
}

namespace {

ParamFamily case_iv_lambda(const std::vector<int>& m_grid, int d) {
    // c_n = sqrt(log n), i.e. lambda = 1 + 1 / sqrt(log n), materialized on
    // the grid since it is not one of the closed family shapes
    std::map<std::uint64_t, double> tab;
    for (int m : m_grid) {
        std::uint64_t n = 1;
        for (int i = 0; i < d; ++i) n *= static_cast<std::uint64_t>(m);
        tab[n] = 1.0 + 1.0 / std::sqrt(std::log(static_cast<double>(n)));
    }
    return ParamFamily::table(std::move(tab));
}

} // namespace

ScenarioSpec builtin_scenario(const std::string& name) {
    ScenarioSpec s;
    s.name = name;
    s.d = 1;
    s.alpha_minus = ParamFamily::constant(0.5);
    s.alpha_plus = ParamFamily::constant(0.5);
    if (name == "coexistence") {
        // equal n-dependent exponents: the balanced-share fraction then grows
        // along the grid instead of approaching its limit from above
        s.alpha_minus = ParamFamily::table({{1000, 0.3}, {10000, 0.95}});
        s.alpha_plus = s.alpha_minus;
        s.lambda = ParamFamily::constant(1.0);
        s.m_grid = {1000, 10000};
    } else if (name == "case-i") {
        // adjacent sources at strong locality: the fast type overruns the
        // slow source's near field first, the most visible finite-n instance
        s.alpha_minus = ParamFamily::constant(0.95);
        s.alpha_plus = ParamFamily::constant(0.95);
        s.lambda = ParamFamily::log_squared(0.0, 1.0);
        s.placement = Placement::explicit_sources;
        s.source_minus = Coords{0};
        s.source_plus = Coords{1};
        s.m_grid = {10000};
    } else if (name == "case-ii") {
        s.lambda = ParamFamily::affine_log(1.0, 1.0);
        s.m_grid = {100, 10000};
    } else if (name == "case-iii") {
        s.lambda = ParamFamily::constant(2.0);
        s.m_grid = {100, 10000};
        s.phase_m = 8.0;
    } else if (name == "case-iv") {
        s.m_grid = {100, 10000};
        s.lambda = case_iv_lambda(s.m_grid, s.d);
    } else if (name == "defect-bound") {
        s.alpha_minus = ParamFamily::constant(0.0);
        s.alpha_plus = ParamFamily::constant(0.0);
        s.lambda = ParamFamily::constant(1.0);
        s.m_grid = {10000};
        s.phase_m = 8.0;
        s.defect_delta = 0.2;
    } else if (name == "yule-law") {
        s.m_grid = {2}; // unused
        s.runs = 100000;
    } else if (name == "rn-convergence") {
        s.d = 2;
        s.norm_p = kNormInf;
        s.alpha_minus = ParamFamily::constant(1.0);
        s.alpha_plus = ParamFamily::constant(1.0);
        s.m_grid = {32, 100, 317, 1000}; // ambient sides of 1e3..1e6
        s.runs = 100;                    // unused
    } else if (name == "engine-crossval") {
        s.m_grid = {7}; // geometries are fixed inside the scenario
        s.runs = 10000;
    } else if (name == "urn-crossval") {
        s.alpha_minus = ParamFamily::constant(0.0);
        s.alpha_plus = ParamFamily::constant(0.0);
        s.lambda = ParamFamily::constant(2.0);
        s.m_grid = {25};
        s.runs = 10000;
    } else {
        throw std::invalid_argument("unknown scenario '" + name + "'");
    }
    return s;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

ModelParams instance_params(const ScenarioSpec& spec, int m) {
    ModelParams p;
    p.spec = TorusSpec{spec.d, m, spec.norm_p};
    p.alpha_minus = spec.alpha_minus;
    p.alpha_plus = spec.alpha_plus;
    p.lambda = spec.lambda;
    p.placement = spec.placement;
    p.source_minus = spec.source_minus;
    p.source_plus = spec.source_plus;
    return p;
}

struct InstanceRuns {
    InstanceSummary summary;
    std::vector<RunResult> results;
};

// Executes spec.runs runs at side m with stream indices starting at
// seed_offset, in parallel, collecting rows in run-index order.
InstanceRuns run_instance(const ScenarioSpec& spec, int m, EngineKind engine, std::uint64_t seed_offset,
                          std::vector<RunRow>* rows) {
    const auto t0 = Clock::now();
    ModelParams params = instance_params(spec, m);
    const RunContext ctx = make_run_context(params);

    double phase_time = -1.0;
    std::vector<double> cps = spec.checkpoints;
    if (spec.phase_m) {
        phase_time = (std::log(static_cast<double>(ctx.n)) - *spec.phase_m) / ctx.rates.z;
        if (phase_time < 0.0) phase_time = 0.0;
        cps.push_back(phase_time);
    }
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

    InstanceRuns out;
    out.results.resize(static_cast<std::size_t>(spec.runs));
    parallel_runs(spec.runs, [&](int i) {
        const std::uint64_t seed = derive_stream(spec.master_seed, seed_offset + static_cast<std::uint64_t>(i));
        if (engine == EngineKind::coupled) {
            out.results[static_cast<std::size_t>(i)] = coupled_run(ctx, seed, cps, phase_time).result;
        } else {
            out.results[static_cast<std::size_t>(i)] = gillespie_run(ctx, seed, cps);
        }
    });

    if (rows) {
        for (int i = 0; i < spec.runs; ++i)
            rows->push_back(make_row(out.results[static_cast<std::size_t>(i)], seed_offset + static_cast<std::uint64_t>(i)));
    }

    InstanceSummary& s = out.summary;
    s.label = to_string(engine) + " m=" + std::to_string(m);
    s.m = m;
    s.n = ctx.n;
    s.z = ctx.rates.z;
    s.c_n = ctx.rates.c;
    s.runs = spec.runs;
    IntHistogram hist;
    for (const auto& r : out.results) hist.add(static_cast<std::int64_t>(r.m_n));
    s.m_n_histogram = hist.as_map();

    if (spec.phase_m) {
        int event = 0;
        for (const auto& r : out.results) {
            for (const auto& cp : r.checkpoints) {
                if (cp.time == phase_time) {
                    const bool small_minus =
                        cp.count_minus <= spec.phase_a * std::exp(phase_time);
                    const bool big_plus = cp.count_plus >= spec.phase_xi * static_cast<double>(ctx.n);
                    if (small_minus && big_plus) ++event;
                    break;
                }
            }
        }
        s.phase_event_fraction = static_cast<double>(event) / spec.runs;
    }

    s.runtime_sec = seconds_since(t0);
    return out;
}

IntHistogram histogram_of_n_minus(const std::vector<RunResult>& results) {
    IntHistogram h;
    for (const auto& r : results) h.add(static_cast<std::int64_t>(r.n_minus));
    return h;
}

void add_check(ScenarioReport& rep, std::string name, double value, std::string cmp, double threshold, bool pass) {
    rep.checks.push_back({std::move(name), value, std::move(cmp), threshold, pass});
}

void finalize(ScenarioReport& rep, Clock::time_point t0) {
    rep.pass = true;
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    rep.runtime_sec = seconds_since(t0);
}

void scenario_coexistence(const ScenarioSpec& spec, ScenarioReport& rep) {
    std::vector<double> fractions;
    for (std::size_t gi = 0; gi < spec.m_grid.size(); ++gi) {
        auto inst = run_instance(spec, spec.m_grid[gi], spec.engine,
                                 gi * static_cast<std::uint64_t>(spec.runs), &rep.rows);
        int over = 0;
        for (const auto& r : inst.results)
            if (static_cast<double>(r.m_n) / static_cast<double>(r.n) > 0.05) ++over;
        inst.summary.fraction = static_cast<double>(over) / spec.runs;
        fractions.push_back(*inst.summary.fraction);
        rep.instances.push_back(std::move(inst.summary));
    }
    add_check(rep, "fraction(M_n/n > 0.05) at largest n", fractions.back(), ">=", 0.9, fractions.back() >= 0.9);
    bool monotone = true;
    for (std::size_t i = 1; i < fractions.size(); ++i) monotone = monotone && fractions[i] >= fractions[i - 1];
    add_check(rep, "fraction(M_n/n > 0.05) non-decreasing in n", monotone ? 1.0 : 0.0, ">=", 1.0, monotone);
}

void scenario_case_i(const ScenarioSpec& spec, ScenarioReport& rep) {
    double last_fraction = 0.0;
    for (std::size_t gi = 0; gi < spec.m_grid.size(); ++gi) {
        auto inst = run_instance(spec, spec.m_grid[gi], spec.engine,
                                 gi * static_cast<std::uint64_t>(spec.runs), &rep.rows);
        int ones = 0;
        for (const auto& r : inst.results)
            if (r.m_n == 1) ++ones;
        inst.summary.fraction = static_cast<double>(ones) / spec.runs;
        last_fraction = *inst.summary.fraction;
        rep.instances.push_back(std::move(inst.summary));
    }
    add_check(rep, "fraction(M_n = 1) at largest n", last_fraction, ">=", 0.9, last_fraction >= 0.9);
}

void scenario_case_ii(const ScenarioSpec& spec, ScenarioReport& rep) {
    std::vector<double> tvs;
    for (std::size_t gi = 0; gi < spec.m_grid.size(); ++gi) {
        auto inst = run_instance(spec, spec.m_grid[gi], spec.engine,
                                 gi * static_cast<std::uint64_t>(spec.runs), &rep.rows);
        IntHistogram hist;
        for (const auto& r : inst.results) hist.add(static_cast<std::int64_t>(r.m_n));
        const ReferencePmf ref = geometric_reference(std::exp(-1.0), std::max<std::int64_t>(hist.hi(), 2));
        inst.summary.tv = tv_distance(hist, ref);
        tvs.push_back(*inst.summary.tv);
        rep.instances.push_back(std::move(inst.summary));
    }
    add_check(rep, "TV(M_n, Geo(e^-1)) at largest n", tvs.back(), "<", 0.1, tvs.back() < 0.1);
    add_check(rep, "TV at largest n below TV at smallest n", tvs.back(), "<", tvs.front(), tvs.back() < tvs.front());
}

void scenario_case_iii(const ScenarioSpec& spec, ScenarioReport& rep) {
    std::vector<double> medians;
    for (std::size_t gi = 0; gi < spec.m_grid.size(); ++gi) {
        auto inst = run_instance(spec, spec.m_grid[gi], spec.engine,
                                 gi * static_cast<std::uint64_t>(spec.runs), &rep.rows);
        std::vector<double> obs;
        obs.reserve(inst.results.size());
        const double logn = std::log(static_cast<double>(inst.summary.n));
        for (const auto& r : inst.results)
            obs.push_back(std::log(static_cast<double>(r.m_n)) * inst.summary.z / logn);
        inst.summary.median_value = median(obs);
        inst.summary.iqr_value = interquartile_range(obs);
        medians.push_back(*inst.summary.median_value);
        rep.instances.push_back(std::move(inst.summary));
    }
    const double last = medians.back();
    add_check(rep, "median(log(M_n) Z/log n) at largest n, lower", last, ">=", 0.75, last >= 0.75);
    add_check(rep, "median(log(M_n) Z/log n) at largest n, upper", last, "<=", 1.25, last <= 1.25);
    add_check(rep, "median closer to 1 than at smallest n", std::abs(last - 1.0), "<", std::abs(medians.front() - 1.0),
              std::abs(last - 1.0) < std::abs(medians.front() - 1.0));
}

void scenario_case_iv(const ScenarioSpec& spec, ScenarioReport& rep) {
    std::vector<double> medians, iqrs;
    for (std::size_t gi = 0; gi < spec.m_grid.size(); ++gi) {
        auto inst = run_instance(spec, spec.m_grid[gi], spec.engine,
                                 gi * static_cast<std::uint64_t>(spec.runs), &rep.rows);
        std::vector<double> obs;
        obs.reserve(inst.results.size());
        const double logn = std::log(static_cast<double>(inst.summary.n));
        for (const auto& r : inst.results)
            obs.push_back((logn - std::log(static_cast<double>(r.m_n))) / inst.summary.c_n);
        inst.summary.median_value = median(obs);
        inst.summary.iqr_value = interquartile_range(obs);
        medians.push_back(*inst.summary.median_value);
        iqrs.push_back(*inst.summary.iqr_value);
        rep.instances.push_back(std::move(inst.summary));
    }
    add_check(rep, "median((log n - log M_n)/c_n) at largest n, lower", medians.back(), ">=", 0.6,
              medians.back() >= 0.6);
    add_check(rep, "median((log n - log M_n)/c_n) at largest n, upper", medians.back(), "<=", 1.4,
              medians.back() <= 1.4);
    add_check(rep, "IQR shrinking from smallest to largest n", iqrs.back(), "<", iqrs.front(),
              iqrs.back() < iqrs.front());
}

void scenario_defect_bound(const ScenarioSpec& spec, ScenarioReport& rep) {
    for (std::size_t gi = 0; gi < spec.m_grid.size(); ++gi) {
        auto inst = run_instance(spec, spec.m_grid[gi], spec.engine,
                                 gi * static_cast<std::uint64_t>(spec.runs), &rep.rows);
        const double n = static_cast<double>(inst.summary.n);
        const double threshold = n * std::exp(-(*spec.phase_m) * (1.0 + spec.defect_delta));
        int em = 0, ep = 0;
        for (const auto& r : inst.results) {
            if (static_cast<double>(r.defect_minus_at_phase) > threshold) ++em;
            if (static_cast<double>(r.defect_plus_at_phase) > threshold) ++ep;
        }
        inst.summary.exceed_minus = static_cast<double>(em) / spec.runs;
        inst.summary.exceed_plus = static_cast<double>(ep) / spec.runs;
        add_check(rep, "defect exceedance (first type) at n=" + std::to_string(inst.summary.n),
                  *inst.summary.exceed_minus, "<", 0.1, *inst.summary.exceed_minus < 0.1);
        add_check(rep, "defect exceedance (second type) at n=" + std::to_string(inst.summary.n),
                  *inst.summary.exceed_plus, "<", 0.1, *inst.summary.exceed_plus < 0.1);
        rep.instances.push_back(std::move(inst.summary));
    }
}

void scenario_yule_law(const ScenarioSpec& spec, ScenarioReport& rep) {
    const auto t0 = Clock::now();
    Rng rng(derive_stream(spec.master_seed, 0));
    IntHistogram hist;
    double sum = 0.0;
    const double t = std::log(2.0);
    for (int i = 0; i < spec.runs; ++i) {
        const std::int64_t s = yule_size(1.0, t, rng);
        hist.add(s);
        sum += static_cast<double>(s);
    }
    const double empirical_mean = sum / spec.runs;
    const ReferencePmf ref = geometric_reference(0.5, std::max<std::int64_t>(hist.hi(), 2));
    const GofResult gof = chi_square_gof(hist, ref);

    InstanceSummary s;
    s.label = "yule sigma=1 t=log 2";
    s.n = static_cast<std::uint64_t>(spec.runs);
    s.runs = spec.runs;
    s.m_n_histogram = hist.as_map();
    s.mean_value = empirical_mean;
    s.p_value = gof.p_value;
    s.statistic = gof.statistic;
    s.runtime_sec = seconds_since(t0);
    rep.instances.push_back(std::move(s));

    add_check(rep, "chi-square p-value vs Geo(1/2)", gof.p_value, ">", 0.01, gof.p_value > 0.01);
    add_check(rep, "empirical mean within 2% of 2", std::abs(empirical_mean - 2.0), "<=", 0.04,
              std::abs(empirical_mean - 2.0) <= 0.04);
}

void scenario_rn_convergence(const ScenarioSpec& spec, ScenarioReport& rep) {
    const std::vector<std::uint64_t> n_list = {1000, 10000, 100000, 1000000};
    const double alpha = spec.alpha_minus.eval(n_list.front());
    const auto errors = check_rate_convergence(alpha, spec.d, spec.norm_p, n_list);
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        InstanceSummary s;
        s.label = "n=" + std::to_string(n_list[i]);
        s.n = n_list[i];
        s.extra = {errors[i]};
        rep.instances.push_back(std::move(s));
    }
    add_check(rep, "relative error at n=1e6", errors.back(), "<", 0.02, errors.back() < 0.02);
    bool decreasing = true;
    for (std::size_t i = 1; i < errors.size(); ++i) decreasing = decreasing && errors[i] < errors[i - 1];
    add_check(rep, "relative errors strictly decreasing", decreasing ? 1.0 : 0.0, ">=", 1.0, decreasing);
}

void scenario_engine_crossval(const ScenarioSpec& spec, ScenarioReport& rep) {
    struct Config {
        std::string label;
        int d;
        int m;
        double am, ap, lam;
    };
    const std::vector<Config> configs = {
        {"d=1 m=7 equal-alpha lambda=1", 1, 7, 0.5, 0.5, 1.0},
        {"d=1 m=7 equal-alpha lambda=2", 1, 7, 0.5, 0.5, 2.0},
        {"d=1 m=7 alpha 0/0.5 lambda=1", 1, 7, 0.0, 0.5, 1.0},
        {"d=2 m=5 equal-alpha lambda=1", 2, 5, 0.5, 0.5, 1.0},
        {"d=2 m=5 equal-alpha lambda=2", 2, 5, 0.5, 0.5, 2.0},
        {"d=2 m=5 alpha 0/0.5 lambda=1", 2, 5, 0.0, 0.5, 1.0},
    };
    std::uint64_t offset = 0;
    for (const auto& cfg : configs) {
        ScenarioSpec sub = spec;
        sub.d = cfg.d;
        sub.m_grid = {cfg.m};
        sub.alpha_minus = ParamFamily::constant(cfg.am);
        sub.alpha_plus = ParamFamily::constant(cfg.ap);
        sub.lambda = ParamFamily::constant(cfg.lam);

        auto coupled_inst = run_instance(sub, cfg.m, EngineKind::coupled, offset, &rep.rows);
        offset += static_cast<std::uint64_t>(spec.runs);
        auto oracle_inst = run_instance(sub, cfg.m, EngineKind::oracle, offset, &rep.rows);
        offset += static_cast<std::uint64_t>(spec.runs);

        const GofResult gof = chi_square_two_sample(histogram_of_n_minus(coupled_inst.results),
                                                    histogram_of_n_minus(oracle_inst.results));
        coupled_inst.summary.label = "coupled " + cfg.label;
        oracle_inst.summary.label = "oracle " + cfg.label;
        coupled_inst.summary.p_value = gof.p_value;
        coupled_inst.summary.statistic = gof.statistic;
        rep.instances.push_back(std::move(coupled_inst.summary));
        rep.instances.push_back(std::move(oracle_inst.summary));
        add_check(rep, "two-sample p (" + cfg.label + ")", gof.p_value, ">", 0.01, gof.p_value > 0.01);
    }
}

void scenario_urn_crossval(const ScenarioSpec& spec, ScenarioReport& rep) {
    const int m = spec.m_grid.front();
    auto coupled_inst = run_instance(spec, m, EngineKind::coupled, 0, &rep.rows);

    const auto t0 = Clock::now();
    const std::uint64_t n = coupled_inst.summary.n;
    const double z = coupled_inst.summary.z;
    std::vector<std::uint64_t> urn_minus(static_cast<std::size_t>(spec.runs));
    parallel_runs(spec.runs, [&](int i) {
        const std::uint64_t seed =
            derive_stream(spec.master_seed, static_cast<std::uint64_t>(spec.runs) + static_cast<std::uint64_t>(i));
        urn_minus[static_cast<std::size_t>(i)] = urn_run(n, z, seed).first;
    });
    IntHistogram urn_hist;
    for (auto v : urn_minus) urn_hist.add(static_cast<std::int64_t>(v));

    InstanceSummary urn_summary;
    urn_summary.label = "urn n=" + std::to_string(n) + " z=" + std::to_string(z);
    urn_summary.n = n;
    urn_summary.z = z;
    urn_summary.runs = spec.runs;
    urn_summary.m_n_histogram = urn_hist.as_map();
    urn_summary.runtime_sec = seconds_since(t0);

    const GofResult gof = chi_square_two_sample(histogram_of_n_minus(coupled_inst.results), urn_hist);
    coupled_inst.summary.p_value = gof.p_value;
    coupled_inst.summary.statistic = gof.statistic;
    rep.instances.push_back(std::move(coupled_inst.summary));
    rep.instances.push_back(std::move(urn_summary));
    add_check(rep, "two-sample p (coupled vs urn)", gof.p_value, ">", 0.01, gof.p_value > 0.01);
}

} // namespace

ScenarioReport run_scenario(const ScenarioSpec& spec) {
    spec.validate();
    const auto t0 = Clock::now();
    ScenarioReport rep;
    rep.spec = spec;
    rep.rng_family = std::string(Rng::family()) + "+splitmix64-stream";

    if (spec.name == "coexistence") {
        scenario_coexistence(spec, rep);
    } else if (spec.name == "case-i") {
        scenario_case_i(spec, rep);
    } else if (spec.name == "case-ii") {
        scenario_case_ii(spec, rep);
    } else if (spec.name == "case-iii") {
        scenario_case_iii(spec, rep);
    } else if (spec.name == "case-iv") {
        scenario_case_iv(spec, rep);
    } else if (spec.name == "defect-bound") {
        scenario_defect_bound(spec, rep);
    } else if (spec.name == "yule-law") {
        scenario_yule_law(spec, rep);
    } else if (spec.name == "rn-convergence") {
        scenario_rn_convergence(spec, rep);
    } else if (spec.name == "engine-crossval") {
        scenario_engine_crossval(spec, rep);
    } else if (spec.name == "urn-crossval") {
        scenario_urn_crossval(spec, rep);
    } else {
        throw std::invalid_argument("unknown scenario '" + spec.name + "'");
    }
    finalize(rep, t0);
    return rep;
}

DefectBoundResult check_defect_bound(const ModelParams& params, double m, double delta, int runs,
                                     std::uint64_t master_seed) {
    params.validate();
    const std::uint64_t n = params.n();
    const double max_alpha = std::max(params.alpha_minus.eval(n), params.alpha_plus.eval(n));
    if (!(delta > 0.0) || delta >= 1.0 - max_alpha / params.spec.d)
        throw std::invalid_argument("defect bound: delta must lie in (0, 1 - max(alpha)/d)");
    if (!(m >= 1.0)) throw std::invalid_argument("defect bound: m must be >= 1");

    const RunContext ctx = make_run_context(params);
    double phase_time = (std::log(static_cast<double>(n)) - m) / ctx.rates.z;
    if (phase_time < 0.0) phase_time = 0.0;

    DefectBoundResult res;
    res.phase_time = phase_time;
    res.threshold = static_cast<double>(n) * std::exp(-m * (1.0 + delta));
    res.runs = runs;
    std::vector<std::uint8_t> exceed_m(static_cast<std::size_t>(runs), 0), exceed_p(static_cast<std::size_t>(runs), 0);
    parallel_runs(runs, [&](int i) {
        const std::uint64_t seed = derive_stream(master_seed, static_cast<std::uint64_t>(i));
        const auto out = coupled_run(ctx, seed, {}, phase_time);
        exceed_m[static_cast<std::size_t>(i)] =
            static_cast<double>(out.result.defect_minus_at_phase) > res.threshold;
        exceed_p[static_cast<std::size_t>(i)] =
            static_cast<double>(out.result.defect_plus_at_phase) > res.threshold;
    });
    int em = 0, ep = 0;
    for (int i = 0; i < runs; ++i) {
        em += exceed_m[static_cast<std::size_t>(i)];
        ep += exceed_p[static_cast<std::size_t>(i)];
    }
    res.exceed_minus = static_cast<double>(em) / runs;
    res.exceed_plus = static_cast<double>(ep) / runs;
    return res;
}

std::vector<double> check_rate_convergence(double alpha, int d, double norm_p,
                                           std::span<const std::uint64_t> n_list) {
    if (!(alpha >= 0.0) || alpha >= d) throw std::invalid_argument("rate convergence: alpha must lie in [0, d)");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw std::invalid_argument("rate convergence: n_list must be increasing");
    const double limit = limit_constant(alpha, d, norm_p);
    std::vector<double> errors;
    errors.reserve(n_list.size());
    for (std::uint64_t n : n_list) {
        const double rn = rate_sum(n, alpha, d, norm_p);
        const double scaled = rn / std::pow(static_cast<double>(n), 1.0 - alpha / d);
        errors.push_back(std::abs(scaled - limit) / limit);
    }
    return errors;
}

} // namespace lrc
