#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aenmf/admm.hpp"
#include "aenmf/graph.hpp"
#include "aenmf/matrix_io.hpp"
#include "aenmf/pretrain.hpp"
#include "aenmf/spectral.hpp"
#include "aenmf/synth.hpp"

namespace aenmf {

struct ModalitySource {
  std::string name;
  std::string path;
  Orientation orientation = Orientation::kSamplesAsRows;
};

// Either matrix files plus a labels file, or a synthetic specification.
struct DataSource {
  std::vector<ModalitySource> files;
  std::string labels;
  std::optional<SynthSpec> synthetic;
};

struct AblationSwitches {
  bool use_ae_encoder_term = true;
  bool use_graph_reg = true;
  bool use_consensus_reg = true;
};

// Method names accepted in ExperimentConfig::methods:
//   ours    full model, subject to the ablation switches
//   none    no encoder term, no graph term, no consensus term
//   ae      encoder term only
//   gr      graph term only
//   cr      consensus term only
//   single  spectral clustering of every modality on its own
//   concat  spectral clustering of the stacked features
const std::vector<std::string>& known_methods();

struct ExperimentConfig {
  DataSource data;
  std::vector<int> layer_sizes{500, 50};
  // False when layer_sizes are the defaults, which may be scaled down to fit
  // the data (see resolve_layer_sizes).
  bool layer_sizes_explicit = false;
  AdmmConfig admm;
  PretrainOptions pretrain;
  GraphOptions graph;
  SpectralOptions spectral;
  // 0 means the number of distinct ground-truth labels.
  int k = 0;
  int n_runs = 10;
  std::uint64_t base_seed = 0;
  AblationSwitches ablation;
  std::vector<std::string> methods{"ours", "single", "concat"};
  // Cluster H* after every iteration and record the accuracy in the trace.
  bool trace_acc = false;

  void validate() const;
};

// Parses a JSON configuration. Unknown keys are errors. Relative data paths
// are resolved against base_dir.
ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::string& base_dir = {});
// Reads and parses a file; data paths are relative to the file's directory and
// must exist.
ExperimentConfig load_config(const std::string& path);

// JSON text of the configuration with every default written out.
std::string dump_config(const ExperimentConfig& cfg);

// Explicit sizes are checked: strictly decreasing, positive, and
// layer_sizes[0] < min_dim and <= n. Default sizes that do not fit are shrunk:
// the first layer becomes min_dim / 2 (capped by the bounds), the others are
// scaled by the same ratio, the last is kept >= k, and the sequence is then
// made strictly decreasing.
std::vector<int> resolve_layer_sizes(const std::vector<int>& requested, bool is_explicit,
                                     int min_dim, int n, int k);

}  // namespace aenmf
