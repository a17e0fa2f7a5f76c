#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aenmf/config.hpp"
#include "aenmf/errors.hpp"
#include "aenmf/experiment.hpp"
#include "aenmf/report.hpp"

using namespace aenmf;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  SynthSpec s = complementary_spec({12, 10}, 10, 0.5, 3);
  cfg.data.synthetic = s;
  cfg.layer_sizes = {6, 3};
  cfg.layer_sizes_explicit = true;
  cfg.admm.max_iters = 15;
  cfg.pretrain.max_iters = 30;
  cfg.n_runs = 1;
  cfg.base_seed = 11;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path temp_path(const std::string& tag) {
  return fs::temp_directory_path() / ("aenmf_pipeline_" + std::to_string(::getpid()) + "_" + tag);
}

}  // namespace

TEST(Summarize, PopulationMoments) {
  const MetricSummary s = summarize({1.0, 3.0});
  EXPECT_EQ(s.mean, 2.0);
  EXPECT_EQ(s.std, 1.0);
  const MetricSummary one = summarize({0.7});
  EXPECT_EQ(one.mean, 0.7);
  EXPECT_EQ(one.std, 0.0);
}

TEST(ResolveConfig, MaterializesKAndLayers) {
  ExperimentConfig cfg = small_config();
  cfg.layer_sizes = {500, 50};
  cfg.layer_sizes_explicit = false;
  const Dataset data = load_dataset(cfg);
  const ExperimentConfig rc = resolve_config(cfg, data);
  EXPECT_EQ(rc.k, 3);
  EXPECT_LT(rc.layer_sizes.front(), 10);
  EXPECT_GE(rc.layer_sizes.back(), 3);
}

TEST(MethodAdmm, AblationSettings) {
  const ExperimentConfig cfg = small_config();
  const AdmmConfig none = method_admm(cfg, "none");
  EXPECT_EQ(none.encoder_weight, 0.0);
  EXPECT_EQ(none.beta, 0.0);
  EXPECT_EQ(none.lambda, 0.0);
  const AdmmConfig gr = method_admm(cfg, "gr");
  EXPECT_EQ(gr.encoder_weight, 0.0);
  EXPECT_EQ(gr.beta, cfg.admm.beta);
  EXPECT_EQ(gr.lambda, 0.0);
  const AdmmConfig ours = method_admm(cfg, "ours");
  EXPECT_EQ(ours.encoder_weight, 1.0);
  EXPECT_EQ(ours.lambda, cfg.admm.lambda);
  EXPECT_THROW(method_admm(cfg, "concat"), ConfigError);
}

TEST(RunExperiment, SingleRunAggregatesEqualTheRun) {
  const RunReport report = run_experiment(small_config());
  ASSERT_EQ(report.methods.size(), 4u);
  EXPECT_EQ(report.methods[0].name, "ours");
  EXPECT_EQ(report.methods[1].name, "single:modality0");
  EXPECT_EQ(report.methods[2].name, "single:modality1");
  EXPECT_EQ(report.methods[3].name, "concat");
  for (const MethodReport& m : report.methods) {
    ASSERT_EQ(m.runs.size(), 1u);
    ASSERT_TRUE(m.runs[0].ok) << m.runs[0].error;
    EXPECT_EQ(m.runs_ok, 1);
    EXPECT_EQ(m.runs[0].seed, 11u);
    EXPECT_EQ(m.acc.mean, m.runs[0].metrics.acc);
    EXPECT_EQ(m.nmi.mean, m.runs[0].metrics.nmi);
    EXPECT_EQ(m.acc.std, 0.0);
  }
  EXPECT_FALSE(report.methods[0].runs[0].trace.empty());
  EXPECT_TRUE(report.methods[1].runs[0].trace.empty());
}

TEST(RunExperiment, RunSeedsFollowTheBaseSeed) {
  ExperimentConfig cfg = small_config();
  cfg.methods = {"concat"};
  cfg.n_runs = 3;
  const RunReport report = run_experiment(cfg);
  for (int r = 0; r < 3; ++r) EXPECT_EQ(report.methods[0].runs[static_cast<std::size_t>(r)].seed, 11u + r);
}

TEST(RunExperiment, TraceAccuracyIsRecordedPerIteration) {
  ExperimentConfig cfg = small_config();
  cfg.methods = {"ours"};
  cfg.trace_acc = true;
  const RunReport report = run_experiment(cfg);
  const RunRecord& run = report.methods[0].runs[0];
  EXPECT_EQ(run.acc_trace.size(), run.trace.size());
  EXPECT_NE(trace_csv(run).find(",acc\n"), std::string::npos);
}

TEST(Report, CsvShapes) {
  const RunReport report = run_experiment(small_config());
  std::istringstream summary(summary_csv(report));
  std::string line;
  std::getline(summary, line);
  EXPECT_EQ(line, "method,runs,runs_ok,acc,nmi,ari,f_score,precision,recall");
  int rows = 0;
  while (std::getline(summary, line)) rows += line.empty() ? 0 : 1;
  EXPECT_EQ(rows, static_cast<int>(report.methods.size()));

  const std::string baseline = trace_csv(report.methods[1].runs[0]);
  EXPECT_EQ(baseline, "iter,objective,residual_m1,residual_m2,residual_s,max_update_delta,hm_min\n");
  const std::string fitted = trace_csv(report.methods[0].runs[0]);
  EXPECT_EQ(std::count(fitted.begin(), fitted.end(), '\n'),
            static_cast<long>(report.methods[0].runs[0].trace.size()) + 1);
}

TEST(Report, TraceFileNames) {
  EXPECT_EQ(trace_file_name("single:vision", 3), "single_vision_run3.csv");
  EXPECT_EQ(trace_file_name("ours", 0), "ours_run0.csv");
}

TEST(Report, EmittedFilesAreReproducible) {
  const fs::path a = temp_path("a"), b = temp_path("b");
  emit_report(run_experiment(small_config()), a.string());
  emit_report(run_experiment(small_config()), b.string());
  for (const char* name : {"results.json", "summary.csv", "traces/ours_run0.csv",
                           "traces/single_modality0_run0.csv", "traces/concat_run0.csv"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  EXPECT_TRUE(fs::exists(a / "timings.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Report, UnwritableDirectoryIsAnIoError) {
  const fs::path blocker = temp_path("file");
  std::ofstream(blocker) << "x";
  RunReport report;
  report.config = small_config();
  EXPECT_THROW(emit_report(report, (blocker / "out").string()), IoError);
  fs::remove(blocker);
}
