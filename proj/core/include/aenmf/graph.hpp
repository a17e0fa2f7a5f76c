#pragma once

#include <optional>
#include <vector>

#include "aenmf/dense.hpp"

namespace aenmf {

enum class EdgeWeighting { kBinary, kHeat };

struct GraphOptions {
  int k_nn = 5;
  EdgeWeighting weighting = EdgeWeighting::kHeat;
  // Heat-kernel width; unset means the median length of the k-NN edges.
  std::optional<double> sigma;
};

// Directed k-NN graph before symmetrization. Row i holds the weights of the
// edges i -> j for the k_nn nearest samples j of sample i.
struct KnnGraph {
  Matrix weights;
  std::vector<std::vector<int>> neighbors;
  double sigma = 0.0;
};

// Laplacian prior for one modality. factor * factor^T == laplacian, and the
// eigendecomposition of the laplacian (clipped at zero) is retained so the
// fine-tuning solver does not have to recompute it.
struct GraphPrior {
  Matrix affinity;
  Matrix laplacian;
  Matrix factor;
  SymEig laplacian_eig;
};

// Columns of x are samples. Neighbors are ranked by Euclidean distance with
// ties broken by sample index.
KnnGraph knn_directed(const Matrix& x, const GraphOptions& opts);

// Symmetrized affinity (W0 + W0^T) / 2 of the directed k-NN graph.
Matrix knn_affinity(const Matrix& x, const GraphOptions& opts);

// L = D - W. W must be symmetric to 1e-10.
Matrix laplacian(const Matrix& w);

// A = Q P^{1/2} with L = Q P Q^T; always n x n (zero columns for null modes).
Matrix laplacian_factor(const Matrix& l);

GraphPrior build_graph_prior(const Matrix& x, const GraphOptions& opts);

}  // namespace aenmf
