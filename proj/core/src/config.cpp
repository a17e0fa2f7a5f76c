#include "aenmf/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "aenmf/errors.hpp"
#include "config_json.hpp"

namespace aenmf {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Reads the members of one JSON object and rejects any member left unread.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj.is_object()) fail(path_, "expected an object");
  }

  const json* find(const char* key) {
    const auto it = obj_.find(key);
    if (it == obj_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  void read(const char* key, int& out) {
    if (const json* v = find(key)) out = as_int(*v, where(key));
  }
  void read(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(where(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void read(const char* key, double& out) {
    if (const json* v = find(key)) out = as_double(*v, where(key));
  }
  void read(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(where(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void read(const char* key, std::string& out) {
    if (const json* v = find(key)) out = as_string(*v, where(key));
  }
  void read(const char* key, std::vector<int>& out) {
    if (const json* v = find(key)) out = as_int_list(*v, where(key));
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) fail(where(it.key()), "unknown key");
    }
  }

  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
  }

  static int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      fail(path, "integer out of range");
    }
    return static_cast<int>(x);
  }
  static double as_double(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }
  static std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }
  static std::vector<int> as_int_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(as_int(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

const char* weighting_name(EdgeWeighting w) { return w == EdgeWeighting::kHeat ? "heat" : "binary"; }

EdgeWeighting parse_weighting(const std::string& s, const std::string& path) {
  if (s == "heat") return EdgeWeighting::kHeat;
  if (s == "binary") return EdgeWeighting::kBinary;
  ObjectReader::fail(path, "expected 'heat' or 'binary'");
}

const char* affinity_name(SpectralAffinity a) {
  return a == SpectralAffinity::kCosine ? "cosine" : "gaussian";
}

SpectralAffinity parse_affinity(const std::string& s, const std::string& path) {
  if (s == "cosine") return SpectralAffinity::kCosine;
  if (s == "gaussian") return SpectralAffinity::kGaussian;
  ObjectReader::fail(path, "expected 'cosine' or 'gaussian'");
}

SynthSpec parse_synth(const json& j, const std::string& path) {
  SynthSpec s;
  ObjectReader r(j, path);
  r.read("n_clusters", s.n_clusters);
  r.read("samples_per_cluster", s.samples_per_cluster);
  r.read("modality_dims", s.modality_dims);
  if (const json* mm = r.find("merge_map")) {
    const std::string mp = r.where("merge_map");
    if (!mm->is_array()) ObjectReader::fail(mp, "expected an array per modality");
    for (std::size_t v = 0; v < mm->size(); ++v) {
      const std::string vp = mp + "[" + std::to_string(v) + "]";
      if (!(*mm)[v].is_array()) ObjectReader::fail(vp, "expected an array of groups");
      MergeGroups groups;
      for (std::size_t g = 0; g < (*mm)[v].size(); ++g) {
        groups.push_back(
            ObjectReader::as_int_list((*mm)[v][g], vp + "[" + std::to_string(g) + "]"));
      }
      s.merge_map.push_back(std::move(groups));
    }
  }
  r.read("noise_sigma", s.noise_sigma);
  r.read("outlier_fraction", s.outlier_fraction);
  r.read("seed", s.seed);
  if (const json* sep = r.find("center_separation"); sep && !sep->is_null()) {
    s.center_separation = ObjectReader::as_double(*sep, r.where("center_separation"));
  }
  r.read("separable_by_fusion", s.separable_by_fusion);
  r.finish();
  try {
    s.validate();
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return s;
}

DataSource parse_data(const json& j, const std::string& base_dir) {
  DataSource d;
  ObjectReader r(j, "data");
  if (const json* mods = r.find("modalities")) {
    if (!mods->is_array()) ObjectReader::fail("data.modalities", "expected an array");
    for (std::size_t i = 0; i < mods->size(); ++i) {
      const std::string mp = "data.modalities[" + std::to_string(i) + "]";
      ModalitySource m;
      std::string orientation = to_string(m.orientation);
      ObjectReader mr((*mods)[i], mp);
      mr.read("name", m.name);
      mr.read("path", m.path);
      mr.read("orientation", orientation);
      mr.finish();
      if (m.path.empty()) ObjectReader::fail(mp + ".path", "missing");
      if (m.name.empty()) m.name = "modality" + std::to_string(i);
      try {
        m.orientation = parse_orientation(orientation);
      } catch (const ConfigError& e) {
        ObjectReader::fail(mp + ".orientation", e.what());
      }
      if (!base_dir.empty() && fs::path(m.path).is_relative()) {
        m.path = (fs::path(base_dir) / m.path).lexically_normal().string();
      }
      d.files.push_back(std::move(m));
    }
  }
  r.read("labels", d.labels);
  if (!d.labels.empty() && !base_dir.empty() && fs::path(d.labels).is_relative()) {
    d.labels = (fs::path(base_dir) / d.labels).lexically_normal().string();
  }
  if (const json* syn = r.find("synthetic")) d.synthetic = parse_synth(*syn, "data.synthetic");
  r.finish();
  return d;
}

}  // namespace

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> names{"ours", "none", "ae", "gr", "cr", "single", "concat"};
  return names;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  const bool files = !data.files.empty();
  if (files == data.synthetic.has_value()) {
    fail("data: give either 'modalities' (with 'labels') or 'synthetic', not both or neither");
  }
  if (files && data.labels.empty()) fail("data.labels: required with modality files");
  if (n_runs < 1) fail("n_runs must be >= 1");
  if (k < 0) fail("k must be >= 0");
  if (layer_sizes.empty()) fail("layer_sizes must not be empty");
  for (int p : layer_sizes) {
    if (p < 1) fail("layer_sizes entries must be >= 1");
  }
  for (std::size_t i = 1; i < layer_sizes.size(); ++i) {
    if (layer_sizes[i] >= layer_sizes[i - 1]) fail("layer_sizes must be strictly decreasing");
  }
  if (graph.k_nn < 1) fail("graph.k_nn must be >= 1");
  if (graph.sigma && !(*graph.sigma > 0.0)) fail("graph.sigma must be > 0");
  if (spectral.k_nn < 1) fail("spectral.k_nn must be >= 1");
  if (spectral.kmeans.restarts < 1) fail("spectral.restarts must be >= 1");
  if (spectral.kmeans.max_iters < 1) fail("spectral.max_iters must be >= 1");
  if (pretrain.max_iters < 1) fail("pretrain.max_iters must be >= 1");
  if (!(pretrain.tol >= 0.0)) fail("pretrain.tol must be >= 0");
  if (!(pretrain.eps > 0.0)) fail("pretrain.eps must be > 0");
  if (methods.empty()) fail("methods must not be empty");
  std::set<std::string> seen;
  for (const auto& m : methods) {
    const auto& known = known_methods();
    if (std::find(known.begin(), known.end(), m) == known.end()) fail("unknown method '" + m + "'");
    if (!seen.insert(m).second) fail("method '" + m + "' listed twice");
  }
  try {
    admm.validate();
  } catch (const ParameterError& e) {
    fail(e.what());
  }
}

ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::string& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }

  ExperimentConfig cfg;
  ObjectReader r(root, "");
  if (const json* d = r.find("data")) cfg.data = parse_data(*d, base_dir);
  if (r.find("layer_sizes")) {
    r.read("layer_sizes", cfg.layer_sizes);
    cfg.layer_sizes_explicit = true;
  }
  if (const json* a = r.find("admm")) {
    ObjectReader ar(*a, "admm");
    ar.read("beta", cfg.admm.beta);
    ar.read("lambda", cfg.admm.lambda);
    ar.read("mu1", cfg.admm.mu1);
    ar.read("mu2", cfg.admm.mu2);
    ar.read("mu3", cfg.admm.mu3);
    ar.read("max_iters", cfg.admm.max_iters);
    ar.read("tol", cfg.admm.tol);
    ar.read("eps_guard", cfg.admm.eps_guard);
    ar.read("clip_tol", cfg.admm.clip_tol);
    ar.finish();
  }
  if (const json* p = r.find("pretrain")) {
    ObjectReader pr(*p, "pretrain");
    pr.read("max_iters", cfg.pretrain.max_iters);
    pr.read("tol", cfg.pretrain.tol);
    pr.read("eps", cfg.pretrain.eps);
    pr.read("monotone_slack", cfg.pretrain.monotone_slack);
    pr.finish();
  }
  if (const json* g = r.find("graph")) {
    ObjectReader gr(*g, "graph");
    std::string weighting = weighting_name(cfg.graph.weighting);
    gr.read("k_nn", cfg.graph.k_nn);
    gr.read("weighting", weighting);
    cfg.graph.weighting = parse_weighting(weighting, "graph.weighting");
    if (const json* s = gr.find("sigma"); s && !s->is_null()) {
      cfg.graph.sigma = ObjectReader::as_double(*s, "graph.sigma");
    }
    gr.finish();
  }
  if (const json* s = r.find("spectral")) {
    ObjectReader sr(*s, "spectral");
    std::string affinity = affinity_name(cfg.spectral.affinity);
    sr.read("affinity", affinity);
    cfg.spectral.affinity = parse_affinity(affinity, "spectral.affinity");
    sr.read("k_nn", cfg.spectral.k_nn);
    sr.read("restarts", cfg.spectral.kmeans.restarts);
    sr.read("max_iters", cfg.spectral.kmeans.max_iters);
    sr.finish();
  }
  r.read("k", cfg.k);
  r.read("n_runs", cfg.n_runs);
  r.read("base_seed", cfg.base_seed);
  r.read("use_ae_encoder_term", cfg.ablation.use_ae_encoder_term);
  r.read("use_graph_reg", cfg.ablation.use_graph_reg);
  r.read("use_consensus_reg", cfg.ablation.use_consensus_reg);
  if (const json* m = r.find("methods")) {
    if (!m->is_array()) ObjectReader::fail("methods", "expected an array of names");
    cfg.methods.clear();
    for (std::size_t i = 0; i < m->size(); ++i) {
      cfg.methods.push_back(ObjectReader::as_string((*m)[i], "methods[" + std::to_string(i) + "]"));
    }
  }
  r.read("trace_acc", cfg.trace_acc);
  r.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string dir = fs::path(path).parent_path().string();
  ExperimentConfig cfg = parse_config(buf.str(), path, dir.empty() ? "." : dir);
  for (const auto& m : cfg.data.files) {
    if (!fs::exists(m.path)) throw ConfigError("data file '" + m.path + "' does not exist");
  }
  if (!cfg.data.labels.empty() && !fs::exists(cfg.data.labels)) {
    throw ConfigError("labels file '" + cfg.data.labels + "' does not exist");
  }
  return cfg;
}

ojson synth_json(const SynthSpec& s) {
  ojson j;
  j["n_clusters"] = s.n_clusters;
  j["samples_per_cluster"] = s.samples_per_cluster;
  j["modality_dims"] = s.modality_dims;
  j["merge_map"] = s.merge_map;
  j["noise_sigma"] = s.noise_sigma;
  j["outlier_fraction"] = s.outlier_fraction;
  j["seed"] = s.seed;
  j["center_separation"] = s.center_separation ? ojson(*s.center_separation) : ojson(nullptr);
  j["separable_by_fusion"] = s.separable_by_fusion;
  return j;
}

ojson config_json(const ExperimentConfig& cfg) {
  ojson j;
  ojson data = ojson::object();
  if (cfg.data.synthetic) {
    data["synthetic"] = synth_json(*cfg.data.synthetic);
  } else {
    ojson mods = ojson::array();
    for (const auto& m : cfg.data.files) {
      mods.push_back({{"name", m.name}, {"path", m.path}, {"orientation", to_string(m.orientation)}});
    }
    data["modalities"] = mods;
    data["labels"] = cfg.data.labels;
  }
  j["data"] = data;
  j["layer_sizes"] = cfg.layer_sizes;
  j["admm"] = {{"beta", cfg.admm.beta},       {"lambda", cfg.admm.lambda},
               {"mu1", cfg.admm.mu1},         {"mu2", cfg.admm.mu2},
               {"mu3", cfg.admm.mu3},         {"max_iters", cfg.admm.max_iters},
               {"tol", cfg.admm.tol},         {"eps_guard", cfg.admm.eps_guard},
               {"clip_tol", cfg.admm.clip_tol}};
  j["pretrain"] = {{"max_iters", cfg.pretrain.max_iters},
                   {"tol", cfg.pretrain.tol},
                   {"eps", cfg.pretrain.eps},
                   {"monotone_slack", cfg.pretrain.monotone_slack}};
  j["graph"] = {{"k_nn", cfg.graph.k_nn},
                {"weighting", weighting_name(cfg.graph.weighting)},
                {"sigma", cfg.graph.sigma ? ojson(*cfg.graph.sigma) : ojson(nullptr)}};
  j["spectral"] = {{"affinity", affinity_name(cfg.spectral.affinity)},
                   {"k_nn", cfg.spectral.k_nn},
                   {"restarts", cfg.spectral.kmeans.restarts},
                   {"max_iters", cfg.spectral.kmeans.max_iters}};
  j["k"] = cfg.k;
  j["n_runs"] = cfg.n_runs;
  j["base_seed"] = cfg.base_seed;
  j["use_ae_encoder_term"] = cfg.ablation.use_ae_encoder_term;
  j["use_graph_reg"] = cfg.ablation.use_graph_reg;
  j["use_consensus_reg"] = cfg.ablation.use_consensus_reg;
  j["methods"] = cfg.methods;
  j["trace_acc"] = cfg.trace_acc;
  return j;
}

std::string dump_config(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

std::vector<int> resolve_layer_sizes(const std::vector<int>& requested, bool is_explicit,
                                     int min_dim, int n, int k) {
  const int bound = std::min(min_dim - 1, n);
  auto describe = [&] {
    std::ostringstream os;
    os << "layer_sizes [";
    for (std::size_t i = 0; i < requested.size(); ++i) os << (i ? "," : "") << requested[i];
    os << "] do not fit data with min dimension " << min_dim << " and " << n << " samples";
    return os.str();
  };
  if (requested.empty()) throw ConfigError("layer_sizes must not be empty");
  bool fits = requested.front() <= bound;
  for (std::size_t i = 0; i < requested.size(); ++i) {
    if (requested[i] < 1 || (i > 0 && requested[i] >= requested[i - 1])) fits = false;
  }
  if (fits) return requested;
  if (is_explicit) throw ConfigError(describe());

  const int first = std::min(std::max(1, min_dim / 2), bound);
  const double ratio = static_cast<double>(first) / requested.front();
  std::vector<int> out(requested.size());
  out[0] = first;
  for (std::size_t i = 1; i < out.size(); ++i) {
    out[i] = std::max(1, static_cast<int>(std::lround(requested[i] * ratio)));
  }
  out.back() = std::max(out.back(), k);
  for (std::size_t i = out.size() - 1; i > 0; --i) out[i - 1] = std::max(out[i - 1], out[i] + 1);
  if (out.front() > bound || first < 1) throw ConfigError(describe());
  return out;
}

}  // namespace aenmf
