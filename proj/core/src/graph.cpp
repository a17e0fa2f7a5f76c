#include "aenmf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aenmf/errors.hpp"

namespace aenmf {
namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kNegativeEigTol = 1e-6;

Matrix pairwise_sq_distances(const Matrix& x) {
  const Vector sq = x.colwise().squaredNorm().transpose();
  Matrix d = -2.0 * (x.transpose() * x);
  d.colwise() += sq;
  d.rowwise() += sq.transpose();
  return d.cwiseMax(0.0);
}

struct Eig {
  SymEig eig;
  Matrix factor;
};

Eig factor_laplacian(const Matrix& l) {
  Eig out;
  out.eig = sym_eig(l);
  const Eigen::Index n = out.eig.values.size();
  if (n > 0 && out.eig.values(n - 1) < -kNegativeEigTol) {
    std::ostringstream os;
    os << "laplacian_factor: eigenvalue " << out.eig.values(n - 1)
       << " is below -1e-6; input is not a graph Laplacian";
    throw ContractError(os.str());
  }
  out.eig.values = out.eig.values.cwiseMax(0.0);
  out.factor = out.eig.vectors * out.eig.values.cwiseSqrt().asDiagonal();
  return out;
}

}  // namespace

KnnGraph knn_directed(const Matrix& x, const GraphOptions& opts) {
  const Eigen::Index n = x.cols();
  if (opts.k_nn < 1 || opts.k_nn >= n) {
    std::ostringstream os;
    os << "knn_affinity: k_nn must satisfy 1 <= k_nn < n (k_nn=" << opts.k_nn << ", n=" << n
       << ")";
    throw ParameterError(os.str());
  }
  const Matrix d2 = pairwise_sq_distances(x);
  const auto k = static_cast<std::size_t>(opts.k_nn);

  KnnGraph g;
  g.neighbors.resize(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<double> edge_lengths;
  edge_lengths.reserve(static_cast<std::size_t>(n) * k);
  for (Eigen::Index i = 0; i < n; ++i) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    order.erase(order.begin() + i);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](int a, int b) {
                        if (d2(i, a) != d2(i, b)) return d2(i, a) < d2(i, b);
                        return a < b;
                      });
    auto& nb = g.neighbors[static_cast<std::size_t>(i)];
    nb.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    for (int j : nb) edge_lengths.push_back(std::sqrt(d2(i, j)));
  }

  if (opts.weighting == EdgeWeighting::kHeat) {
    if (opts.sigma) {
      if (!(*opts.sigma > 0.0)) throw ParameterError("knn_affinity: sigma must be positive");
      g.sigma = *opts.sigma;
    } else {
      auto mid = edge_lengths.begin() + static_cast<std::ptrdiff_t>(edge_lengths.size() / 2);
      std::nth_element(edge_lengths.begin(), mid, edge_lengths.end());
      g.sigma = *mid;
      if (!(g.sigma > 0.0)) g.sigma = 1.0;  // every neighbor coincides
    }
  }

  g.weights = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j : g.neighbors[static_cast<std::size_t>(i)]) {
      g.weights(i, j) = opts.weighting == EdgeWeighting::kBinary
                            ? 1.0
                            : std::exp(-d2(i, j) / (g.sigma * g.sigma));
    }
  }
  return g;
}

Matrix knn_affinity(const Matrix& x, const GraphOptions& opts) {
  const KnnGraph g = knn_directed(x, opts);
  return 0.5 * (g.weights + g.weights.transpose());
}

Matrix laplacian(const Matrix& w) {
  if (w.rows() != w.cols()) throw DimensionError("laplacian: affinity must be square");
  const double asym = (w - w.transpose()).cwiseAbs().maxCoeff();
  if (w.size() > 0 && asym > kSymmetryTol) {
    std::ostringstream os;
    os << "laplacian: affinity is not symmetric (max |W - W^T| = " << asym << ")";
    throw ContractError(os.str());
  }
  Matrix l = -w;
  l.diagonal() += w.rowwise().sum();
  return l;
}

Matrix laplacian_factor(const Matrix& l) { return factor_laplacian(l).factor; }

GraphPrior build_graph_prior(const Matrix& x, const GraphOptions& opts) {
  GraphPrior prior;
  prior.affinity = knn_affinity(x, opts);
  prior.laplacian = laplacian(prior.affinity);
  Eig e = factor_laplacian(prior.laplacian);
  prior.factor = std::move(e.factor);
  prior.laplacian_eig = std::move(e.eig);
  return prior;
}

}  // namespace aenmf
