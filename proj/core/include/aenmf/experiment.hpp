#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aenmf/admm.hpp"
#include "aenmf/config.hpp"
#include "aenmf/metrics.hpp"
#include "aenmf/synth.hpp"

namespace aenmf {

struct RunRecord {
  int run = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::string error_category;
  MetricReport metrics;
  Labels labels;
  std::vector<IterTrace> trace;
  // Accuracy of H* after every iteration, when requested.
  std::vector<double> acc_trace;
  // Consensus representation; empty for the feature-space baselines.
  Matrix hstar;
  double fit_seconds = 0.0;
  double cluster_seconds = 0.0;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct MethodReport {
  std::string name;
  std::vector<RunRecord> runs;
  // Aggregates over the successful runs only.
  int runs_ok = 0;
  MetricSummary acc, nmi, ari, f_score, precision, recall;
};

struct RunReport {
  // Fully resolved: k and layer sizes are the values actually used.
  ExperimentConfig config;
  int n_samples = 0;
  std::vector<std::string> modality_names;
  std::vector<int> modality_dims;
  std::vector<MethodReport> methods;
  double load_seconds = 0.0;
};

Dataset load_dataset(const ExperimentConfig& cfg);

// Materializes k and the layer sizes against the loaded data.
ExperimentConfig resolve_config(const ExperimentConfig& cfg, const Dataset& data);

// Solver settings of a fit-based method ("ours", "none", "ae", "gr", "cr").
AdmmConfig method_admm(const ExperimentConfig& cfg, const std::string& method);

// Fits once and clusters H*; used by every fit-based method.
RunRecord run_fit(const ExperimentConfig& resolved, const Dataset& data, const AdmmConfig& admm,
                  int run);

// Run r of every method uses seed base_seed + r. A failing run is recorded
// with its error and does not stop the experiment.
RunReport run_experiment(const ExperimentConfig& cfg, const Dataset& data);
RunReport run_experiment(const ExperimentConfig& cfg);

MetricSummary summarize(const std::vector<double>& values);

}  // namespace aenmf
