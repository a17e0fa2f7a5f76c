#pragma once

#include <string>

#include "aenmf/experiment.hpp"

namespace aenmf {

// Everything except wall-clock times, so equal reports give equal bytes.
std::string results_json(const RunReport& report);
// One row per method; metric columns hold "mean±std".
std::string summary_csv(const RunReport& report);
// Per-iteration series of one run; header only when the run has no trace.
std::string trace_csv(const RunRecord& run);
std::string timings_json(const RunReport& report);
// "single:vision" -> "single_vision_run3.csv"
std::string trace_file_name(const std::string& method, int run);

// Writes results.json, summary.csv, timings.json and traces/<method>_run<r>.csv
// under out_dir, creating it if needed.
void emit_report(const RunReport& report, const std::string& out_dir);

}  // namespace aenmf
