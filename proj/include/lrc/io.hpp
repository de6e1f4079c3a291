#pragma once

#include <ostream>
#include <span>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "lrc/experiments.hpp"

namespace lrc {

// %.17g — round-trippable doubles in text output
std::string format_double(double v);

inline constexpr const char* kRunCsvHeader =
    "run_index,m,n,z,c_n,n_minus,n_plus,m_n,t_cov,proposals,rejections,"
    "defect_minus_at_tn,defect_plus_at_tn,seed";

void write_rows_csv(std::ostream& os, std::span<const RunRow> rows);
std::string rows_csv(std::span<const RunRow> rows);

nlohmann::json row_to_json(const RunRow& row);
nlohmann::json report_to_json(const ScenarioReport& report);

// Writes <dir>/<stem>_runs.csv and <dir>/<stem>_report.json, creating the
// directory if needed.
void write_report_files(const ScenarioReport& report, const std::string& dir, const std::string& stem);

void write_text_file(const std::string& path, const std::string& content);

} // namespace lrc
