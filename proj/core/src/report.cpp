#include "aenmf/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aenmf/errors.hpp"
#include "config_json.hpp"

namespace aenmf {
namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

ojson summary_json(const MetricSummary& s) { return {{"mean", s.mean}, {"std", s.std}}; }

ojson metrics_json(const MetricReport& m) {
  return {{"acc", m.acc},
          {"nmi", m.nmi},
          {"ari", m.ari},
          {"f_score", m.f_score},
          {"precision", m.precision},
          {"recall", m.recall},
          {"precision_defined", m.precision_defined},
          {"recall_defined", m.recall_defined}};
}

ojson run_json(const RunRecord& r) {
  ojson j;
  j["run"] = r.run;
  j["seed"] = r.seed;
  j["ok"] = r.ok;
  if (!r.ok) {
    j["error_category"] = r.error_category;
    j["error"] = r.error;
    return j;
  }
  j["metrics"] = metrics_json(r.metrics);
  j["iterations"] = r.trace.size();
  if (!r.trace.empty()) j["final_objective"] = r.trace.back().objective;
  j["labels"] = r.labels;
  return j;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

std::string results_json(const RunReport& report) {
  ojson j;
  j["config"] = config_json(report.config);
  ojson mods = ojson::array();
  for (std::size_t v = 0; v < report.modality_names.size(); ++v) {
    mods.push_back({{"name", report.modality_names[v]}, {"dim", report.modality_dims[v]}});
  }
  j["data"] = {{"n_samples", report.n_samples}, {"modalities", mods}};
  ojson methods = ojson::array();
  for (const auto& m : report.methods) {
    ojson mj;
    mj["name"] = m.name;
    mj["runs_ok"] = m.runs_ok;
    mj["aggregate"] = {{"acc", summary_json(m.acc)},
                       {"nmi", summary_json(m.nmi)},
                       {"ari", summary_json(m.ari)},
                       {"f_score", summary_json(m.f_score)},
                       {"precision", summary_json(m.precision)},
                       {"recall", summary_json(m.recall)}};
    ojson runs = ojson::array();
    for (const auto& r : m.runs) runs.push_back(run_json(r));
    mj["runs"] = runs;
    methods.push_back(mj);
  }
  j["methods"] = methods;
  return j.dump(2) + "\n";
}

std::string summary_csv(const RunReport& report) {
  std::ostringstream os;
  os << "method,runs,runs_ok,acc,nmi,ari,f_score,precision,recall\n";
  auto cell = [](const MetricSummary& s) { return fmt("%.6f", s.mean) + "±" + fmt("%.6f", s.std); };
  for (const auto& m : report.methods) {
    os << m.name << ',' << m.runs.size() << ',' << m.runs_ok << ',' << cell(m.acc) << ','
       << cell(m.nmi) << ',' << cell(m.ari) << ',' << cell(m.f_score) << ','
       << cell(m.precision) << ',' << cell(m.recall) << '\n';
  }
  return os.str();
}

std::string trace_csv(const RunRecord& run) {
  std::ostringstream os;
  const bool acc = !run.acc_trace.empty();
  os << "iter,objective,residual_m1,residual_m2,residual_s,max_update_delta,hm_min";
  if (acc) os << ",acc";
  os << '\n';
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    const IterTrace& t = run.trace[i];
    os << t.iter << ',' << fmt("%.17g", t.objective) << ',' << fmt("%.17g", t.residual_m1) << ','
       << fmt("%.17g", t.residual_m2) << ',' << fmt("%.17g", t.residual_s) << ','
       << fmt("%.17g", t.max_update_delta) << ',' << fmt("%.17g", t.hm_min);
    if (acc) os << ',' << (i < run.acc_trace.size() ? fmt("%.17g", run.acc_trace[i]) : "nan");
    os << '\n';
  }
  return os.str();
}

std::string timings_json(const RunReport& report) {
  ojson j;
  j["load_seconds"] = report.load_seconds;
  ojson methods = ojson::array();
  for (const auto& m : report.methods) {
    ojson runs = ojson::array();
    for (const auto& r : m.runs) {
      runs.push_back({{"run", r.run},
                      {"fit_seconds", r.fit_seconds},
                      {"cluster_seconds", r.cluster_seconds}});
    }
    methods.push_back({{"name", m.name}, {"runs", runs}});
  }
  j["methods"] = methods;
  return j.dump(2) + "\n";
}

std::string trace_file_name(const std::string& method, int run) {
  std::string safe = method;
  for (char& c : safe) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '.';
    if (!ok) c = '_';
  }
  return safe + "_run" + std::to_string(run) + ".csv";
}

void emit_report(const RunReport& report, const std::string& out_dir) {
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir / "traces", ec);
  if (ec) throw IoError("cannot create '" + (dir / "traces").string() + "': " + ec.message());
  write_file(dir / "results.json", results_json(report));
  write_file(dir / "summary.csv", summary_csv(report));
  write_file(dir / "timings.json", timings_json(report));
  for (const auto& m : report.methods) {
    for (const auto& r : m.runs) write_file(dir / "traces" / trace_file_name(m.name, r.run), trace_csv(r));
  }
}

}  // namespace aenmf
