#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "aenmf/config.hpp"
#include "aenmf/errors.hpp"
#include "aenmf/experiment.hpp"
#include "aenmf/log.hpp"
#include "aenmf/matrix_io.hpp"
#include "aenmf/metrics.hpp"
#include "aenmf/report.hpp"

namespace fs = std::filesystem;
using namespace aenmf;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  bool quiet = false;
  std::string truth;
  std::string pred;
};

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kParse:
      return 2;
    case ErrorCategory::kConfig:
      return 3;
    case ErrorCategory::kSolver:
      return 4;
    case ErrorCategory::kIo:
      return 5;
    default:
      return 1;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
}

ExperimentConfig load_with_overrides(const Options& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (o.seed) cfg.base_seed = *o.seed;
  if (o.runs) cfg.n_runs = *o.runs;
  cfg.validate();
  return cfg;
}

int cmd_run(const Options& o) {
  const ExperimentConfig cfg = load_with_overrides(o);
  const RunReport report = run_experiment(cfg);
  if (o.out == "-") {
    std::cout << results_json(report);
  } else {
    emit_report(report, o.out);
    log::info("report written to " + o.out);
  }
  return 0;
}

int cmd_gen(const Options& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (!cfg.data.synthetic) throw ConfigError("gen: config has no data.synthetic section");
  if (o.seed) cfg.data.synthetic->seed = *o.seed;
  const Dataset data = generate(*cfg.data.synthetic);
  make_dir(o.out);
  nlohmann::ordered_json mods = nlohmann::ordered_json::array();
  for (const auto& m : data.modalities) {
    const std::string file = m.name + ".csv";
    save_matrix((fs::path(o.out) / file).string(), m.x, Orientation::kSamplesAsRows);
    mods.push_back({{"name", m.name}, {"path", file}, {"orientation", "rows"}});
  }
  save_labels((fs::path(o.out) / "labels.txt").string(), data.truth);
  nlohmann::ordered_json dataset;
  dataset["data"] = {{"modalities", mods}, {"labels", "labels.txt"}};
  write_text(fs::path(o.out) / "dataset.json", dataset.dump(2) + "\n");
  log::info("dataset written to " + o.out);
  return 0;
}

int cmd_metrics(const Options& o) {
  const Labels truth = load_labels(o.truth);
  const Labels pred = load_labels(o.pred);
  const MetricReport m = evaluate(truth, pred);
  nlohmann::ordered_json j = {{"acc", m.acc},
                              {"nmi", m.nmi},
                              {"ari", m.ari},
                              {"f_score", m.f_score},
                              {"precision", m.precision},
                              {"recall", m.recall},
                              {"precision_defined", m.precision_defined},
                              {"recall_defined", m.recall_defined}};
  const std::string text = j.dump(2) + "\n";
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
  } else {
    write_text(o.out, text);
  }
  return 0;
}

int cmd_solve(const Options& o) {
  const ExperimentConfig cfg = load_with_overrides(o);
  const Dataset data = load_dataset(cfg);
  const ExperimentConfig rc = resolve_config(cfg, data);
  const RunRecord rec = run_fit(rc, data, method_admm(rc, "ours"), 0);
  if (!rec.ok) {
    log::warn("solve failed: " + rec.error);
    return rec.error_category == "solver" ? 4 : 1;
  }
  if (o.out == "-") {
    write_matrix(std::cout, rec.hstar, Orientation::kSamplesAsRows);
    return 0;
  }
  make_dir(o.out);
  save_matrix((fs::path(o.out) / "hstar.csv").string(), rec.hstar, Orientation::kSamplesAsRows);
  save_labels((fs::path(o.out) / "labels.txt").string(), rec.labels);
  write_text(fs::path(o.out) / "trace.csv", trace_csv(rec));
  std::ostringstream os;
  os << "H* (" << rec.hstar.rows() << " x " << rec.hstar.cols() << ") written to " << o.out
     << ", acc=" << rec.metrics.acc;
  log::info(os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-modal deep auto-encoder-like NMF clustering"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool runs) {
    sub->add_option("--config", o.config, "JSON configuration file")->required();
    sub->add_option("--seed", o.seed, "Override the base seed");
    if (runs) sub->add_option("--runs", o.runs, "Override the number of runs")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", o.quiet, "Suppress progress output");
  };

  auto* run = app.add_subcommand("run", "Run an experiment and write its report");
  common(run, true);
  run->add_option("--out", o.out, "Output directory, or - for results.json on stdout")->default_str("results");

  auto* gen = app.add_subcommand("gen", "Write a synthetic dataset to files");
  common(gen, false);
  gen->add_option("--out", o.out, "Output directory")->required();

  auto* metrics = app.add_subcommand("metrics", "Score predicted labels against ground truth");
  metrics->add_option("truth", o.truth, "Ground-truth labels, one integer per line")->required();
  metrics->add_option("pred", o.pred, "Predicted labels, one integer per line")->required();
  metrics->add_option("--out", o.out, "Output file, or - for stdout")->default_str("-");
  metrics->add_flag("--quiet", o.quiet, "Suppress progress output");

  auto* solve = app.add_subcommand("solve", "Fit once and write the consensus representation");
  common(solve, false);
  solve->add_option("--out", o.out, "Output directory, or - for H* on stdout")->default_str("solve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (o.out.empty()) o.out = *run ? "results" : *solve ? "solve" : "-";
  log::set_quiet(o.quiet);
  try {
    if (*run) return cmd_run(o);
    if (*gen) return cmd_gen(o);
    if (*metrics) return cmd_metrics(o);
    if (*solve) return cmd_solve(o);
  } catch (const Error& e) {
    std::cerr << "aenmf: " << to_string(e.category()) << " error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "aenmf: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
