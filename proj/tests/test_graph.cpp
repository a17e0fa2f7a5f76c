#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "aenmf/errors.hpp"
#include "aenmf/graph.hpp"
#include "support.hpp"

using namespace aenmf;
using aenmf::testing::gaussian;
using aenmf::testing::uniform;

namespace {

Matrix random_symmetric_affinity(int n, std::mt19937_64& rng) {
  Matrix w = uniform(n, n, rng);
  w = (w + w.transpose()).eval() / 2.0;
  w.diagonal().setZero();
  return w;
}

}  // namespace

TEST(KnnAffinity, OneDimensionalGeometry) {
  Matrix x(1, 3);
  x << 0, 1, 10;
  const Matrix w = knn_affinity(x, {1, EdgeWeighting::kBinary, std::nullopt});
  EXPECT_DOUBLE_EQ(w(0, 1), 1.0);
  EXPECT_EQ(w(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(w(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(w(2, 1), 0.5);
  EXPECT_EQ(w.diagonal().cwiseAbs().maxCoeff(), 0.0);
}

TEST(KnnAffinity, SymmetricAndBounded) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const Matrix x = gaussian(4, 25, rng);
    const Matrix w = knn_affinity(x, {});
    EXPECT_EQ((w - w.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_GE(w.minCoeff(), 0.0);
    EXPECT_LE(w.maxCoeff(), 1.0);
    EXPECT_EQ(w.diagonal().cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(KnnDirected, MatchesBruteForceNeighbors) {
  std::mt19937_64 rng(2);
  const Matrix x = gaussian(3, 20, rng);
  const KnnGraph g = knn_directed(x, {3, EdgeWeighting::kHeat, std::nullopt});
  for (int i = 0; i < 20; ++i) {
    std::vector<std::pair<double, int>> d;
    for (int j = 0; j < 20; ++j) {
      if (j != i) d.emplace_back((x.col(i) - x.col(j)).squaredNorm(), j);
    }
    std::sort(d.begin(), d.end());
    std::vector<int> expect{d[0].second, d[1].second, d[2].second};
    std::vector<int> got = g.neighbors[static_cast<std::size_t>(i)];
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, expect);
    int nonzero = 0;
    for (int j = 0; j < 20; ++j) nonzero += g.weights(i, j) != 0.0;
    EXPECT_EQ(nonzero, 3);
  }
}

TEST(KnnAffinity, DuplicatePointsGetUnitHeatWeight) {
  Matrix x(1, 4);
  x << 0, 0, 5, 7;
  const KnnGraph g = knn_directed(x, {1, EdgeWeighting::kHeat, std::nullopt});
  EXPECT_DOUBLE_EQ(g.weights(0, 1), 1.0);
}

TEST(KnnAffinity, PermutationEquivariant) {
  std::mt19937_64 rng(3);
  const Matrix x = gaussian(3, 15, rng);
  std::vector<int> perm(15);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix xp(3, 15);
  for (int j = 0; j < 15; ++j) xp.col(j) = x.col(perm[j]);
  const Matrix w = knn_affinity(x, {}), wp = knn_affinity(xp, {});
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) EXPECT_NEAR(wp(i, j), w(perm[i], perm[j]), 1e-12);
}

TEST(KnnAffinity, InvalidNeighborCount) {
  const Matrix x = Matrix::Ones(2, 4);
  EXPECT_THROW(knn_affinity(x, {4, EdgeWeighting::kHeat, std::nullopt}), ParameterError);
  EXPECT_THROW(knn_affinity(x, {0, EdgeWeighting::kHeat, std::nullopt}), ParameterError);
}

TEST(Laplacian, TwoNodeGraph) {
  Matrix w(2, 2);
  w << 0, 1, 1, 0;
  Matrix expect(2, 2);
  expect << 1, -1, -1, 1;
  EXPECT_EQ(laplacian(w), expect);
}

TEST(Laplacian, EmptyGraph) { EXPECT_EQ(laplacian(Matrix::Zero(3, 3)).cwiseAbs().maxCoeff(), 0.0); }

TEST(Laplacian, QuadraticFormMatchesEdgeSum) {
  std::mt19937_64 rng(4);
  const Matrix w = random_symmetric_affinity(8, rng);
  const Matrix l = laplacian(w);
  for (int t = 0; t < 10; ++t) {
    const Vector x = gaussian(8, 1, rng);
    double edge_sum = 0.0;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) edge_sum += w(i, j) * (x(i) - x(j)) * (x(i) - x(j));
    EXPECT_NEAR(x.dot(l * x), 0.5 * edge_sum, 1e-10);
  }
}

TEST(Laplacian, RejectsAsymmetricAffinity) {
  Matrix w(2, 2);
  w << 0, 1, 0.5, 0;
  EXPECT_THROW(laplacian(w), ContractError);
}

TEST(LaplacianFactor, RankOne) {
  Matrix l(2, 2);
  l << 1, -1, -1, 1;
  const Matrix a = laplacian_factor(l);
  EXPECT_LE((a * a.transpose() - l).norm(), 1e-12);
  int nonzero_cols = 0;
  for (int j = 0; j < a.cols(); ++j) nonzero_cols += a.col(j).norm() > 1e-12;
  EXPECT_EQ(nonzero_cols, 1);
}

TEST(LaplacianFactor, ZeroLaplacian) {
  const Matrix a = laplacian_factor(Matrix::Zero(3, 3));
  EXPECT_EQ(a.cwiseAbs().maxCoeff(), 0.0);
}

TEST(LaplacianFactor, RejectsNegativeSpectrum) {
  EXPECT_THROW(laplacian_factor(-Matrix::Identity(2, 2)), ContractError);
}

TEST(GraphPrior, InvariantsAndTraceIdentity) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Matrix x = uniform(5, 30, rng);
    const GraphPrior g = build_graph_prior(x, {});
    const Matrix& l = g.laplacian;
    EXPECT_LE((l * Vector::Ones(30)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_GE(sym_eig(l).values.minCoeff(), -1e-9);
    EXPECT_LE((g.factor * g.factor.transpose() - l).norm(), 1e-8 * std::max(1.0, l.norm()));
    EXPECT_EQ(g.factor.rows(), 30);
    EXPECT_EQ(g.factor.cols(), 30);
    const Matrix h = uniform(4, 30, rng);
    EXPECT_NEAR((h * l * h.transpose()).trace(), (h * g.factor).squaredNorm(), 1e-8);
  }
}
