#include "aenmf/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "aenmf/errors.hpp"
#include "aenmf/log.hpp"
#include "aenmf/matrix_io.hpp"
#include "aenmf/spectral.hpp"

namespace aenmf {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Matrix stack_features(const std::vector<ModalityData>& mods) {
  Eigen::Index rows = 0;
  for (const auto& m : mods) rows += m.x.rows();
  Matrix out(rows, mods.front().x.cols());
  Eigen::Index at = 0;
  for (const auto& m : mods) {
    out.middleRows(at, m.x.rows()) = m.x;
    at += m.x.rows();
  }
  return out;
}

void record_failure(RunRecord& rec, const std::exception& e) {
  rec.ok = false;
  rec.error = e.what();
  const auto* err = dynamic_cast<const Error*>(&e);
  rec.error_category = err ? to_string(err->category()) : "internal";
}

RunRecord run_baseline(const ExperimentConfig& cfg, const Dataset& data, const Matrix& features,
                       int run) {
  RunRecord rec;
  rec.run = run;
  rec.seed = cfg.base_seed + static_cast<std::uint64_t>(run);
  try {
    const auto t0 = Clock::now();
    const ClusterAssignment a = spectral_cluster(features, cfg.k, cfg.spectral, rec.seed);
    rec.cluster_seconds = seconds_since(t0);
    rec.labels = a.labels;
    rec.metrics = evaluate(data.truth, rec.labels);
    rec.ok = true;
  } catch (const std::exception& e) {
    record_failure(rec, e);
  }
  return rec;
}

void aggregate(MethodReport& m) {
  std::vector<double> acc, nmi_v, ari, f, p, r;
  for (const auto& run : m.runs) {
    if (!run.ok) continue;
    acc.push_back(run.metrics.acc);
    nmi_v.push_back(run.metrics.nmi);
    ari.push_back(run.metrics.ari);
    f.push_back(run.metrics.f_score);
    p.push_back(run.metrics.precision);
    r.push_back(run.metrics.recall);
  }
  m.runs_ok = static_cast<int>(acc.size());
  m.acc = summarize(acc);
  m.nmi = summarize(nmi_v);
  m.ari = summarize(ari);
  m.f_score = summarize(f);
  m.precision = summarize(p);
  m.recall = summarize(r);
}

}  // namespace

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

Dataset load_dataset(const ExperimentConfig& cfg) {
  if (cfg.data.synthetic) return generate(*cfg.data.synthetic);
  Dataset d;
  for (const auto& src : cfg.data.files) {
    d.modalities.push_back({src.name, load_matrix(src.path, src.orientation), std::nullopt});
  }
  d.truth = load_labels(cfg.data.labels);
  const Eigen::Index n = d.modalities.front().x.cols();
  for (const auto& m : d.modalities) {
    if (m.x.cols() != n) {
      std::ostringstream os;
      os << "modality '" << m.name << "' has " << m.x.cols() << " samples, expected " << n;
      throw InputError(os.str());
    }
  }
  if (static_cast<Eigen::Index>(d.truth.size()) != n) {
    std::ostringstream os;
    os << "labels file has " << d.truth.size() << " entries for " << n << " samples";
    throw InputError(os.str());
  }
  return d;
}

ExperimentConfig resolve_config(const ExperimentConfig& cfg, const Dataset& data) {
  ExperimentConfig out = cfg;
  if (data.modalities.empty()) throw InputError("dataset has no modalities");
  const int n = static_cast<int>(data.modalities.front().x.cols());
  if (out.k == 0) out.k = static_cast<int>(std::set<int>(data.truth.begin(), data.truth.end()).size());
  if (out.k < 1 || out.k > n) {
    std::ostringstream os;
    os << "k=" << out.k << " is not in [1, " << n << "]";
    throw ConfigError(os.str());
  }
  int min_dim = std::numeric_limits<int>::max();
  for (const auto& m : data.modalities) min_dim = std::min(min_dim, static_cast<int>(m.x.rows()));
  out.layer_sizes =
      resolve_layer_sizes(cfg.layer_sizes, cfg.layer_sizes_explicit, min_dim, n, out.k);
  out.layer_sizes_explicit = true;
  return out;
}

AdmmConfig method_admm(const ExperimentConfig& cfg, const std::string& method) {
  AdmmConfig a = cfg.admm;
  bool ae = true, gr = true, cr = true;
  if (method == "ours") {
    ae = cfg.ablation.use_ae_encoder_term;
    gr = cfg.ablation.use_graph_reg;
    cr = cfg.ablation.use_consensus_reg;
  } else if (method == "none") {
    ae = gr = cr = false;
  } else if (method == "ae") {
    gr = cr = false;
  } else if (method == "gr") {
    ae = cr = false;
  } else if (method == "cr") {
    ae = gr = false;
  } else {
    throw ConfigError("method '" + method + "' is not fit-based");
  }
  a.encoder_weight = ae ? 1.0 : 0.0;
  if (!gr) a.beta = 0.0;
  if (!cr) a.lambda = 0.0;
  return a;
}

RunRecord run_fit(const ExperimentConfig& resolved, const Dataset& data, const AdmmConfig& admm,
                  int run) {
  RunRecord rec;
  rec.run = run;
  rec.seed = resolved.base_seed + static_cast<std::uint64_t>(run);
  try {
    FitOptions opts{resolved.pretrain, resolved.graph};
    IterationCallback on_iter;
    if (resolved.trace_acc) {
      on_iter = [&](const IterTrace&, const AdmmState& st) {
        double acc = std::numeric_limits<double>::quiet_NaN();
        try {
          acc = accuracy(data.truth,
                         spectral_cluster(st.hstar, resolved.k, resolved.spectral, rec.seed).labels);
        } catch (const Error&) {
        }
        rec.acc_trace.push_back(acc);
      };
    }
    const auto t0 = Clock::now();
    FitResult fit_result =
        fit(data.modalities, resolved.layer_sizes, admm, opts, rec.seed, on_iter);
    rec.fit_seconds = seconds_since(t0);
    rec.trace = std::move(fit_result.traces);
    rec.hstar = std::move(fit_result.hstar);
    const auto t1 = Clock::now();
    rec.labels = spectral_cluster(rec.hstar, resolved.k, resolved.spectral, rec.seed).labels;
    rec.cluster_seconds = seconds_since(t1);
    rec.metrics = evaluate(data.truth, rec.labels);
    rec.ok = true;
  } catch (const std::exception& e) {
    record_failure(rec, e);
  }
  return rec;
}

RunReport run_experiment(const ExperimentConfig& cfg, const Dataset& data) {
  cfg.validate();
  RunReport report;
  report.config = resolve_config(cfg, data);
  const ExperimentConfig& rc = report.config;
  report.n_samples = static_cast<int>(data.modalities.front().x.cols());
  for (const auto& m : data.modalities) {
    report.modality_names.push_back(m.name);
    report.modality_dims.push_back(static_cast<int>(m.x.rows()));
  }

  auto progress = [](const MethodReport& m, const RunRecord& r) {
    std::ostringstream os;
    os << m.name << " run " << r.run << ": ";
    if (r.ok) {
      os << "acc=" << r.metrics.acc << " nmi=" << r.metrics.nmi;
      log::info(os.str());
    } else {
      os << "failed (" << r.error_category << "): " << r.error;
      log::warn(os.str());
    }
  };

  for (const std::string& method : rc.methods) {
    if (method == "single") {
      for (const auto& mod : data.modalities) {
        MethodReport m;
        m.name = "single:" + mod.name;
        for (int r = 0; r < rc.n_runs; ++r) {
          m.runs.push_back(run_baseline(rc, data, mod.x, r));
          progress(m, m.runs.back());
        }
        aggregate(m);
        report.methods.push_back(std::move(m));
      }
      continue;
    }
    MethodReport m;
    m.name = method;
    if (method == "concat") {
      const Matrix features = stack_features(data.modalities);
      for (int r = 0; r < rc.n_runs; ++r) {
        m.runs.push_back(run_baseline(rc, data, features, r));
        progress(m, m.runs.back());
      }
    } else {
      const AdmmConfig admm = method_admm(rc, method);
      for (int r = 0; r < rc.n_runs; ++r) {
        m.runs.push_back(run_fit(rc, data, admm, r));
        progress(m, m.runs.back());
      }
    }
    aggregate(m);
    report.methods.push_back(std::move(m));
  }
  return report;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  const Dataset data = load_dataset(cfg);
  const double load = seconds_since(t0);
  RunReport report = run_experiment(cfg, data);
  report.load_seconds = load;
  return report;
}

}  // namespace aenmf
