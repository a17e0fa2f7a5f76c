#pragma once

#include <cstdint>
#include <vector>

#include "aenmf/dense.hpp"

namespace aenmf {

struct ClusterAssignment {
  std::vector<int> labels;
  int k = 0;
  // Within-cluster sum of squared distances of the kept solution.
  double inertia = 0.0;
  // Inertia after every Lloyd iteration of the kept restart.
  std::vector<double> inertia_history;
};

struct KMeansOptions {
  int restarts = 10;
  int max_iters = 300;
};

// Rows of `points` are observations. k-means++ seeding, Lloyd iterations,
// best of `restarts` by inertia. Requires 1 <= k <= rows(points).
ClusterAssignment kmeans(const Matrix& points, int k, const KMeansOptions& opts,
                         std::uint64_t seed);

enum class SpectralAffinity {
  // exp(-(1 - cos(h_i, h_j)) / sigma), sigma = mean cosine distance of k-NN pairs.
  kCosine,
  // exp(-||h_i - h_j||^2 / sigma^2), sigma = median k-NN distance.
  kGaussian,
};

struct SpectralOptions {
  SpectralAffinity affinity = SpectralAffinity::kCosine;
  int k_nn = 10;
  KMeansOptions kmeans;
};

struct SpectralEmbedding {
  Matrix rows;          // n x k, unit-norm rows
  Vector eigenvalues;   // k smallest of L_sym, ascending
  int zero_rows = 0;    // rows left at zero (isolated samples)
};

// Sparsified, symmetrized sample affinity over the columns of h.
Matrix spectral_affinity(const Matrix& h, const SpectralOptions& opts);

// Row-normalized eigenvectors of the k smallest eigenvalues of
// L_sym = I - D^{-1/2} W D^{-1/2}.
SpectralEmbedding spectral_embedding(const Matrix& w, int k);

// Clusters the columns of h (p x n) into k groups.
ClusterAssignment spectral_cluster(const Matrix& h, int k, const SpectralOptions& opts,
                                   std::uint64_t seed);

}  // namespace aenmf
