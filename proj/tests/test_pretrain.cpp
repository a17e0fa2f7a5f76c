#include <gtest/gtest.h>

#include <numeric>

#include "aenmf/errors.hpp"
#include "aenmf/pretrain.hpp"
#include "support.hpp"

using namespace aenmf;
using aenmf::testing::uniform;

namespace {

Matrix disjoint_support(int d, int p, std::mt19937_64& rng) {
  std::vector<int> owner(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) owner[static_cast<std::size_t>(i)] = i % p;
  std::shuffle(owner.begin(), owner.end(), rng);
  Matrix z = Matrix::Zero(d, p);
  for (int i = 0; i < d; ++i) z(i, owner[static_cast<std::size_t>(i)]) = 1.0;
  for (int j = 0; j < p; ++j) z.col(j).normalize();
  return z;
}

void expect_monotone(const std::vector<double>& j, double slack) {
  for (std::size_t t = 1; t < j.size(); ++t) {
    EXPECT_LE(j[t], j[t - 1] + slack * std::max(1.0, j[t - 1])) << "iteration " << t;
  }
}

}  // namespace

TEST(PretrainLayer, AllOnesRankOne) {
  const LayerFit f = pretrain_layer(Matrix::Ones(2, 2), 1, {}, 1);
  EXPECT_LE(f.objective.back(), 1e-6);
  EXPECT_NEAR(layer_objective(Matrix::Ones(2, 2), f.z, f.h), f.objective.back(), 1e-12);
}

TEST(PretrainLayer, DisjointSupportExactFactorization) {
  std::mt19937_64 rng(1);
  const Matrix z0 = disjoint_support(12, 3, rng);
  const Matrix x = z0 * uniform(3, 20, rng, 0.5, 1.5);
  // Off-support entries of Z decay like 1/t, so the exact solution needs a long run.
  PretrainOptions opts;
  opts.max_iters = 60000;
  opts.tol = 0.0;
  const LayerFit f = pretrain_layer(x, 3, opts, 7);
  EXPECT_LE(f.objective.back(), 1e-6);
  EXPECT_LE((f.z * f.h - x).norm(), 1e-3);
}

TEST(PretrainLayer, RandomInputDecreasesAndStaysNonnegative) {
  std::mt19937_64 rng(2);
  const Matrix x = uniform(20, 30, rng);
  const LayerFit f = pretrain_layer(x, 5, {}, 3);
  EXPECT_LT(f.objective.back(), f.objective.front());
  EXPECT_GE(f.z.minCoeff(), 0.0);
  EXPECT_GE(f.h.minCoeff(), 0.0);
  expect_monotone(f.objective, 1e-9);
}

TEST(PretrainLayer, MonotoneAcrossSeeds) {
  PretrainOptions opts;
  opts.tol = 0.0;
  opts.max_iters = 60;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const LayerFit f = pretrain_layer(uniform(15, 25, rng), 4, opts, seed);
    ASSERT_EQ(f.objective.size(), 61u);
    expect_monotone(f.objective, opts.monotone_slack);
  }
}

TEST(PretrainLayer, PlainNmfWithoutEncoder) {
  std::mt19937_64 rng(3);
  const Matrix x = uniform(10, 12, rng);
  PretrainOptions opts;
  opts.encoder_weight = 0.0;
  const LayerFit f = pretrain_layer(x, 3, opts, 1);
  EXPECT_NEAR(f.objective.back(), (x - f.z * f.h).squaredNorm(), 1e-9);
  expect_monotone(f.objective, 1e-9);
}

TEST(PretrainLayer, Deterministic) {
  std::mt19937_64 rng(4);
  const Matrix x = uniform(10, 12, rng);
  const LayerFit a = pretrain_layer(x, 3, {}, 42), b = pretrain_layer(x, 3, {}, 42);
  EXPECT_EQ(a.z, b.z);
  EXPECT_EQ(a.h, b.h);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(PretrainLayer, ZeroIterationsReturnsTheStart) {
  std::mt19937_64 rng(5);
  const Matrix x = uniform(6, 8, rng);
  PretrainOptions opts;
  opts.max_iters = 0;
  const LayerFit f = pretrain_layer(x, 2, opts, 1);
  ASSERT_EQ(f.objective.size(), 1u);
  const double scale = std::sqrt(x.mean() / 2.0);
  EXPECT_LE(f.z.maxCoeff(), scale);
  EXPECT_LE(f.h.maxCoeff(), scale);
}

TEST(PretrainLayer, PermutingSamplesPermutesH) {
  std::mt19937_64 rng(6);
  const Matrix x = uniform(8, 12, rng);
  std::vector<int> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix xp(8, 12);
  for (int j = 0; j < 12; ++j) xp.col(j) = x.col(perm[j]);
  const LayerFit a = pretrain_layer(x, 3, {}, 9), b = pretrain_layer(xp, 3, {}, 9);
  EXPECT_LE((a.z - b.z).norm(), 1e-8 * a.z.norm());
  for (int j = 0; j < 12; ++j) EXPECT_LE((b.h.col(j) - a.h.col(perm[j])).norm(), 1e-8 * a.h.norm());
}

TEST(PretrainLayer, RejectsOversizedLayer) {
  EXPECT_THROW(pretrain_layer(Matrix::Ones(4, 3), 4, {}, 0), ParameterError);
  EXPECT_THROW(pretrain_layer(Matrix::Ones(4, 3), 0, {}, 0), ParameterError);
}

TEST(PretrainLayer, RejectsWrongKeyCount) {
  EXPECT_THROW(pretrain_layer(Matrix::Ones(4, 3), 2, {}, 0, {1, 2}), DimensionError);
}

TEST(ColumnKeys, FollowSampleContent) {
  Matrix x(2, 3);
  x << 1, 2, 1, -0.0, 3, 0.0;
  const auto keys = column_keys(x);
  EXPECT_EQ(keys[0], keys[2]);
  EXPECT_NE(keys[0], keys[1]);
}

TEST(PretrainStack, SingleLayerEqualsPretrainLayer) {
  std::mt19937_64 rng(7);
  const Matrix x = uniform(10, 12, rng);
  const LayerStack s = pretrain_stack(x, {4}, {}, 11);
  const LayerFit f = pretrain_layer(x, 4, {}, 11);
  ASSERT_EQ(s.depth(), 1u);
  EXPECT_EQ(s.layers[0].z, f.z);
  EXPECT_EQ(s.layers[0].h, f.h);
}

TEST(PretrainStack, ShapeChain) {
  std::mt19937_64 rng(8);
  const LayerStack s = pretrain_stack(uniform(20, 30, rng), {8, 4}, {}, 1);
  ASSERT_EQ(s.depth(), 2u);
  EXPECT_EQ(s.layers[0].z.rows(), 20);
  EXPECT_EQ(s.layers[0].z.cols(), 8);
  EXPECT_EQ(s.layers[0].h.rows(), 8);
  EXPECT_EQ(s.layers[1].z.rows(), 8);
  EXPECT_EQ(s.layers[1].z.cols(), 4);
  EXPECT_EQ(s.layers[1].h.rows(), 4);
  EXPECT_EQ(s.layers[1].h.cols(), 30);
  for (const Layer& l : s.layers) {
    EXPECT_GE(l.z.minCoeff(), 0.0);
    EXPECT_GE(l.h.minCoeff(), 0.0);
  }
}

TEST(PretrainStack, MoreIterationsReconstructBetter) {
  std::mt19937_64 rng(9);
  const Matrix x = uniform(20, 30, rng);
  auto reconstruction = [&](int iters) {
    PretrainOptions opts;
    opts.max_iters = iters;
    opts.tol = 0.0;
    const LayerStack s = pretrain_stack(x, {8, 4}, opts, 5);
    return (x - s.layers[0].z * s.layers[1].z * s.layers[1].h).norm();
  };
  EXPECT_LT(reconstruction(500), reconstruction(50));
}

TEST(PretrainStack, RejectsBadLayerSizes) {
  const Matrix x = Matrix::Ones(10, 12);
  EXPECT_THROW(pretrain_stack(x, {}, {}, 0), ParameterError);
  EXPECT_THROW(pretrain_stack(x, {10}, {}, 0), ParameterError);
  EXPECT_THROW(pretrain_stack(x, {4, 4}, {}, 0), ParameterError);
  EXPECT_THROW(pretrain_stack(x, {3, 5}, {}, 0), ParameterError);
}

TEST(ShiftNonnegative, ShiftsOnlyNegativeFeatures) {
  Matrix x(2, 3);
  x << -1, 2, 0, 1, 2, 3;
  const ShiftResult r = shift_nonnegative(x);
  EXPECT_TRUE(r.shifted);
  Matrix expect(2, 3);
  expect << 0, 3, 1, 1, 2, 3;
  EXPECT_EQ(r.x, expect);
  EXPECT_FALSE(shift_nonnegative(expect).shifted);
}
