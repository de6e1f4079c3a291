#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "lrc/config.hpp"
#include "lrc/coupled.hpp"
#include "lrc/gillespie.hpp"
#include "lrc/io.hpp"
#include "lrc/rates.hpp"
#include "lrc/urn.hpp"
#include "lrc/yule.hpp"

namespace py = pybind11;
using namespace lrc;

namespace {

TorusSpec make_spec(int d, int m, double norm_p) { return TorusSpec{d, m, norm_p}; }

ModelParams make_params(int d, int m, double norm_p, const ParamFamily& alpha_minus,
                        const ParamFamily& alpha_plus, const ParamFamily& lambda, const std::string& placement,
                        std::vector<std::int32_t> source_minus, std::vector<std::int32_t> source_plus) {
    ModelParams p;
    p.spec = TorusSpec{d, m, norm_p};
    p.alpha_minus = alpha_minus;
    p.alpha_plus = alpha_plus;
    p.lambda = lambda;
    if (placement == "antipodal")
        p.placement = Placement::antipodal;
    else if (placement == "uniform-distinct")
        p.placement = Placement::uniform_distinct;
    else if (placement == "explicit")
        p.placement = Placement::explicit_sources;
    else
        throw std::invalid_argument("placement must be antipodal, uniform-distinct, or explicit");
    for (std::size_t i = 0; i < source_minus.size() && i < kMaxDim; ++i) p.source_minus[i] = source_minus[i];
    for (std::size_t i = 0; i < source_plus.size() && i < kMaxDim; ++i) p.source_plus[i] = source_plus[i];
    return p;
}

TypeTag tag_from(const std::string& s) {
    if (s == "minus") return TypeTag::minus;
    if (s == "plus") return TypeTag::plus;
    throw std::invalid_argument("type must be 'minus' or 'plus'");
}

} // namespace

PYBIND11_MODULE(_lrc, m) {
    m.doc() = "Monte Carlo engines for two competing long-range infections on the discrete torus";

    py::class_<TorusSpec>(m, "TorusSpec")
        .def(py::init(&make_spec), py::arg("d"), py::arg("m"), py::arg("norm_p") = 2.0)
        .def_readonly("d", &TorusSpec::d)
        .def_readonly("m", &TorusSpec::m)
        .def_readonly("norm_p", &TorusSpec::norm_p)
        .def("volume", &TorusSpec::volume);

    m.def(
        "torus_distance",
        [](std::vector<std::int64_t> u, std::vector<std::int64_t> v, const TorusSpec& spec) {
            return torus_distance(wrap(u, spec), wrap(v, spec), spec);
        },
        py::arg("u"), py::arg("v"), py::arg("spec"));
    m.def(
        "wrap",
        [](std::vector<std::int64_t> raw, const TorusSpec& spec) {
            const Coords c = wrap(raw, spec);
            return std::vector<std::int32_t>(c.begin(), c.begin() + spec.d);
        },
        py::arg("coords"), py::arg("spec"));
    m.def(
        "nearest_nonzero",
        [](const TorusSpec& spec, std::uint64_t k) {
            std::vector<std::pair<std::vector<std::int32_t>, double>> out;
            for (const auto& [c, dist] : nearest_nonzero(spec, k))
                out.emplace_back(std::vector<std::int32_t>(c.begin(), c.begin() + spec.d), dist);
            return out;
        },
        py::arg("spec"), py::arg("k"));

    py::class_<ParamFamily>(m, "ParamFamily")
        .def_static("constant", &ParamFamily::constant, py::arg("c"))
        .def_static("affine_log", &ParamFamily::affine_log, py::arg("a"), py::arg("b"))
        .def_static("log_squared", &ParamFamily::log_squared, py::arg("a"), py::arg("b"))
        .def_static("power", &ParamFamily::power, py::arg("a"), py::arg("b"))
        .def_static("table", [](const std::map<std::uint64_t, double>& v) { return ParamFamily::table(v); },
                    py::arg("values"))
        .def("eval", &ParamFamily::eval, py::arg("n"))
        .def_property_readonly("kind", &ParamFamily::kind_name);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init(&make_params), py::arg("d"), py::arg("m"), py::arg("norm_p") = 2.0,
             py::arg("alpha_minus") = ParamFamily::constant(0.0),
             py::arg("alpha_plus") = ParamFamily::constant(0.0),
             py::arg("lambda_plus") = ParamFamily::constant(1.0), py::arg("placement") = "antipodal",
             py::arg("source_minus") = std::vector<std::int32_t>{},
             py::arg("source_plus") = std::vector<std::int32_t>{})
        .def_property_readonly("n", &ModelParams::n);

    py::class_<RateSummary>(m, "RateSummary")
        .def_readonly("r_minus", &RateSummary::r_minus)
        .def_readonly("r_plus", &RateSummary::r_plus)
        .def_readonly("z", &RateSummary::z)
        .def_readonly("c_n", &RateSummary::c)
        .def_property_readonly("regime", [](const RateSummary& s) { return to_string(s.regime); });

    m.def("total_rates", [](const ModelParams& p) { return total_rates(p); }, py::arg("params"));
    m.def(
        "partial_rate_sum",
        [](std::uint64_t j, double alpha, const TorusSpec& ambient) { return partial_rate_sum(j, alpha, ambient); },
        py::arg("j"), py::arg("alpha"), py::arg("ambient"));
    m.def("rate_sum", &rate_sum, py::arg("n"), py::arg("alpha"), py::arg("d"), py::arg("norm_p") = 2.0);
    m.def("limit_constant", &limit_constant, py::arg("alpha"), py::arg("d"), py::arg("norm_p") = 2.0);
    m.def(
        "classify_regime",
        [](const ParamFamily& am, const ParamFamily& ap, const ParamFamily& lam, int d, double norm_p,
           std::vector<std::uint64_t> grid) {
            const auto rep = classify_regime(am, ap, lam, d, norm_p, grid);
            std::vector<std::tuple<std::uint64_t, double, double>> series;
            for (const auto& pt : rep.series) series.emplace_back(pt.n, pt.z, pt.c);
            return py::make_tuple(to_string(rep.regime), series, rep.approximate);
        },
        py::arg("alpha_minus"), py::arg("alpha_plus"), py::arg("lambda_plus"), py::arg("d"),
        py::arg("norm_p"), py::arg("n_grid"));
    m.def(
        "displacement_probabilities",
        [](const ModelParams& p, const std::string& type) { return displacement_table(p, tag_from(type)).probs; },
        py::arg("params"), py::arg("type"));

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &Rng::next_u64)
        .def("next_unit", &Rng::next_unit)
        .def("next_exponential", &Rng::next_exponential, py::arg("rate"));

    m.def("derive_stream", &derive_stream, py::arg("master_seed"), py::arg("run_index"));
    m.def("yule_size", &yule_size, py::arg("sigma"), py::arg("t"), py::arg("rng"));
    m.def("geometric_pmf", &geometric_pmf, py::arg("p"), py::arg("k"));
    m.def(
        "yule_trajectory",
        [](double sigma, double t_max, std::int64_t cap, Rng& rng) {
            const auto traj = yule_trajectory(sigma, t_max, cap, rng);
            std::vector<std::pair<double, std::int64_t>> events;
            for (const auto& ev : traj.events) events.emplace_back(ev.time, ev.size);
            return py::make_tuple(events, traj.capped);
        },
        py::arg("sigma"), py::arg("t_max"), py::arg("size_cap"), py::arg("rng"));

    py::class_<CheckpointRecord>(m, "CheckpointRecord")
        .def_readonly("time", &CheckpointRecord::time)
        .def_readonly("count_minus", &CheckpointRecord::count_minus)
        .def_readonly("count_plus", &CheckpointRecord::count_plus);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("n_minus", &RunResult::n_minus)
        .def_readonly("n_plus", &RunResult::n_plus)
        .def_readonly("m_n", &RunResult::m_n)
        .def_readonly("t_cov", &RunResult::t_cov)
        .def_readonly("checkpoints", &RunResult::checkpoints)
        .def_readonly("proposals", &RunResult::proposals)
        .def_readonly("rejections", &RunResult::rejections)
        .def_readonly("defect_minus_at_phase", &RunResult::defect_minus_at_phase)
        .def_readonly("defect_plus_at_phase", &RunResult::defect_plus_at_phase)
        .def_readonly("seed", &RunResult::stream_seed)
        .def_readonly("n", &RunResult::n)
        .def_readonly("z", &RunResult::z)
        .def_readonly("c_n", &RunResult::c_n);

    py::class_<DefectLog>(m, "DefectLog")
        .def_readonly("roots_minus", &DefectLog::roots_minus)
        .def_readonly("roots_plus", &DefectLog::roots_plus)
        .def_readonly("capped_minus", &DefectLog::capped_minus)
        .def_readonly("capped_plus", &DefectLog::capped_plus);

    m.def(
        "gillespie_run",
        [](const ModelParams& p, std::uint64_t seed, std::vector<double> checkpoints) {
            return gillespie_run(make_run_context(p), seed, checkpoints);
        },
        py::arg("params"), py::arg("seed"), py::arg("checkpoints") = std::vector<double>{});
    m.def(
        "coupled_run",
        [](const ModelParams& p, std::uint64_t seed, std::vector<double> checkpoints, double phase_time) {
            auto out = coupled_run(make_run_context(p), seed, checkpoints, phase_time);
            return py::make_tuple(out.result, out.log);
        },
        py::arg("params"), py::arg("seed"), py::arg("checkpoints") = std::vector<double>{},
        py::arg("phase_time") = -1.0);
    m.def(
        "defect_size",
        [](const DefectLog& log, double t, const std::string& type, double z, Rng& rng) {
            return defect_size(log, t, tag_from(type), z, rng);
        },
        py::arg("log"), py::arg("t"), py::arg("type"), py::arg("z"), py::arg("rng"));

    m.def("urn_run", &urn_run, py::arg("n"), py::arg("z"), py::arg("seed"));

    m.def("builtin_scenario_names", &builtin_scenario_names);
    m.def(
        "run_scenario_json",
        [](const std::string& config_json) {
            const auto cfg = parse_config(config_json);
            if (!cfg.scenario) throw std::invalid_argument("config must name a scenario");
            return report_to_json(run_scenario(*cfg.scenario)).dump();
        },
        py::arg("config_json"));
    m.def(
        "rows_csv_for_scenario",
        [](const std::string& config_json) {
            const auto cfg = parse_config(config_json);
            if (!cfg.scenario) throw std::invalid_argument("config must name a scenario");
            return rows_csv(run_scenario(*cfg.scenario).rows);
        },
        py::arg("config_json"));
}
