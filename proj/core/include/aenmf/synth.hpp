#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aenmf/modality.hpp"

namespace aenmf {

// Groups of true clusters that share one blob in a modality. Clusters not
// named in any group keep their own blob.
using MergeGroups = std::vector<std::vector<int>>;

struct SynthSpec {
  int n_clusters = 3;
  int samples_per_cluster = 100;
  std::vector<int> modality_dims{60, 40};
  // One entry per modality; missing entries mean "no merging".
  std::vector<MergeGroups> merge_map;
  double noise_sigma = 1.0;
  double outlier_fraction = 0.0;
  std::uint64_t seed = 0;
  // Pairwise distance between blob centers; defaults to
  // 10 * max(noise_sigma, 0.1) * sqrt(d_v).
  std::optional<double> center_separation;
  // When set, every pair of true clusters must be separated by at least one
  // modality.
  bool separable_by_fusion = false;

  void validate() const;
};

struct Dataset {
  std::vector<ModalityData> modalities;
  Labels truth;
};

// Blob index of every true cluster in modality v (dense, 0..blobs-1).
std::vector<int> blob_map(const SynthSpec& spec, std::size_t v);

Dataset generate(const SynthSpec& spec);

// Three clusters seen through `dims.size()` modalities, each modality merging
// a different pair of clusters ({0,1}, {1,2}, {0,2}, ...). No single modality
// separates all clusters; their combination does.
SynthSpec complementary_spec(const std::vector<int>& dims, int samples_per_cluster,
                             double noise_sigma, std::uint64_t seed);

}  // namespace aenmf
