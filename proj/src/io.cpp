#include "lrc/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lrc/config.hpp"

namespace lrc {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_rows_csv(std::ostream& os, std::span<const RunRow> rows) {
    os << kRunCsvHeader << "\n";
    for (const auto& r : rows) {
        os << r.run_index << ',' << r.m << ',' << r.n << ',' << format_double(r.z) << ',' << format_double(r.c_n)
           << ',' << r.n_minus << ',' << r.n_plus << ',' << r.m_n << ',' << format_double(r.t_cov) << ','
           << r.proposals << ',' << r.rejections << ',' << r.defect_minus_at_tn << ',' << r.defect_plus_at_tn << ','
           << r.seed << "\n";
    }
}

std::string rows_csv(std::span<const RunRow> rows) {
    std::ostringstream os;
    write_rows_csv(os, rows);
    return os.str();
}

json row_to_json(const RunRow& r) {
    json j;
    j["run_index"] = r.run_index;
    j["m"] = r.m;
    j["n"] = r.n;
    j["z"] = r.z;
    j["c_n"] = r.c_n;
    j["n_minus"] = r.n_minus;
    j["n_plus"] = r.n_plus;
    j["m_n"] = r.m_n;
    j["t_cov"] = r.t_cov;
    j["proposals"] = r.proposals;
    j["rejections"] = r.rejections;
    j["defect_minus_at_tn"] = r.defect_minus_at_tn;
    j["defect_plus_at_tn"] = r.defect_plus_at_tn;
    j["seed"] = r.seed;
    return j;
}

namespace {

json instance_to_json(const InstanceSummary& s) {
    json j;
    j["label"] = s.label;
    j["m"] = s.m;
    j["n"] = s.n;
    j["z"] = s.z;
    j["c_n"] = s.c_n;
    j["runs"] = s.runs;
    json hist = json::object();
    for (const auto& [k, v] : s.m_n_histogram) hist[std::to_string(k)] = v;
    j["m_n_histogram"] = hist;
    if (s.fraction) j["fraction"] = *s.fraction;
    if (s.median_value) j["median"] = *s.median_value;
    if (s.iqr_value) j["iqr"] = *s.iqr_value;
    if (s.mean_value) j["mean"] = *s.mean_value;
    if (s.tv) j["tv"] = *s.tv;
    if (s.p_value) j["p_value"] = *s.p_value;
    if (s.statistic) j["statistic"] = *s.statistic;
    if (s.phase_event_fraction) j["phase_event_fraction"] = *s.phase_event_fraction;
    if (s.exceed_minus) j["exceed_minus"] = *s.exceed_minus;
    if (s.exceed_plus) j["exceed_plus"] = *s.exceed_plus;
    if (!s.extra.empty()) j["extra"] = s.extra;
    j["runtime_sec"] = s.runtime_sec;
    return j;
}

} // namespace

json report_to_json(const ScenarioReport& report) {
    json j;
    j["rng"] = report.rng_family;
    j["spec"] = scenario_to_json(report.spec);
    json instances = json::array();
    for (const auto& inst : report.instances) instances.push_back(instance_to_json(inst));
    j["instances"] = instances;
    json checks = json::array();
    for (const auto& c : report.checks) {
        json cj;
        cj["name"] = c.name;
        cj["value"] = c.value;
        cj["comparator"] = c.comparator;
        cj["threshold"] = c.threshold;
        cj["pass"] = c.pass;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    j["pass"] = report.pass;
    j["runtime_sec"] = report.runtime_sec;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << content;
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

void write_report_files(const ScenarioReport& report, const std::string& dir, const std::string& stem) {
    std::filesystem::create_directories(dir);
    write_text_file(dir + "/" + stem + "_runs.csv", rows_csv(report.rows));
    write_text_file(dir + "/" + stem + "_report.json", report_to_json(report).dump(2) + "\n");
}

} // namespace lrc
