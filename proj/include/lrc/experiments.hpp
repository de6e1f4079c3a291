#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lrc/engine.hpp"
#include "lrc/model.hpp"
#include "lrc/stats.hpp"

namespace lrc {

// A scenario: a parameter template swept over an n-grid, a per-run engine,
// and the statistical verdict evaluated on the collected observables.
struct ScenarioSpec {
    std::string name;
    int d = 1;
    double norm_p = 2.0;
    ParamFamily alpha_minus = ParamFamily::constant(0.0);
    ParamFamily alpha_plus = ParamFamily::constant(0.0);
    ParamFamily lambda = ParamFamily::constant(1.0);
    Placement placement = Placement::antipodal;
    Coords source_minus{};
    Coords source_plus{};
    EngineKind engine = EngineKind::coupled;
    std::vector<int> m_grid;
    int runs = 2000;
    std::uint64_t master_seed = 20260810;
    std::vector<double> checkpoints;
    // when set, runs sample the coupling defect at (log n - phase_m) / z and
    // the phase-event indicator is evaluated with (phase_a, phase_xi)
    std::optional<double> phase_m;
    double phase_a = 20.0;
    double phase_xi = 1e-3;
    double defect_delta = 0.2;

    void validate() const;
    bool operator==(const ScenarioSpec&) const = default;
};

// One CSV row per run; the schema is part of the tool's external contract.
struct RunRow {
    std::uint64_t run_index = 0;
    int m = 0;
    std::uint64_t n = 0;
    double z = 1.0;
    double c_n = 0.0;
    std::uint32_t n_minus = 0;
    std::uint32_t n_plus = 0;
    std::uint32_t m_n = 0;
    double t_cov = 0.0;
    std::uint64_t proposals = 0;
    std::uint64_t rejections = 0;
    std::int64_t defect_minus_at_tn = -1;
    std::int64_t defect_plus_at_tn = -1;
    std::uint64_t seed = 0;
};

RunRow make_row(const RunResult& r, std::uint64_t run_index);

struct CheckResult {
    std::string name;
    double value = 0.0;
    std::string comparator; // human-readable, e.g. ">=", "<"
    double threshold = 0.0;
    bool pass = false;
};

// Summary of all runs at a single grid point (or engine/config label).
struct InstanceSummary {
    std::string label;
    int m = 0;
    std::uint64_t n = 0;
    double z = 1.0;
    double c_n = 0.0;
    int runs = 0;
    std::map<std::int64_t, std::uint64_t> m_n_histogram;
    std::optional<double> fraction;
    std::optional<double> median_value;
    std::optional<double> iqr_value;
    std::optional<double> mean_value;
    std::optional<double> tv;
    std::optional<double> p_value;
    std::optional<double> statistic;
    std::optional<double> phase_event_fraction;
    std::optional<double> exceed_minus;
    std::optional<double> exceed_plus;
    std::vector<double> extra; // free-form per-instance values (e.g. rel. errors)
    double runtime_sec = 0.0;
};

struct ScenarioReport {
    ScenarioSpec spec;
    std::string rng_family;
    std::vector<InstanceSummary> instances;
    std::vector<CheckResult> checks;
    std::vector<RunRow> rows;
    bool pass = false;
    double runtime_sec = 0.0;
};

std::vector<std::string> builtin_scenario_names();
ScenarioSpec builtin_scenario(const std::string& name);
ScenarioReport run_scenario(const ScenarioSpec& spec);

// Fraction of runs whose sampled defect size at (log n - m) / z exceeds
// n * exp(-m (1 + delta)), per type. Requires delta < 1 - max(alpha)/d.
struct DefectBoundResult {
    double exceed_minus = 0.0;
    double exceed_plus = 0.0;
    double threshold = 0.0;
    double phase_time = 0.0;
    int runs = 0;
};

DefectBoundResult check_defect_bound(const ModelParams& params, double m, double delta, int runs,
                                     std::uint64_t master_seed);

// Relative errors |R_n / n^(1 - alpha/d) - R| / R along an increasing volume
// grid.
std::vector<double> check_rate_convergence(double alpha, int d, double norm_p,
                                           std::span<const std::uint64_t> n_list);

// Worker-pool parallel map over run indices; results must be written to
// per-index slots so the outcome is schedule independent. Thread count comes
// from LRC_THREADS (default: hardware concurrency).
int thread_count();
void parallel_runs(int total, const std::function<void(int)>& fn);

} // namespace lrc
