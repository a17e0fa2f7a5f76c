#include <gtest/gtest.h>

#include "aenmf/multiplicative.hpp"
#include "support.hpp"

using namespace aenmf;
using aenmf::testing::numeric_gradient;
using aenmf::testing::uniform;

namespace {

struct Instance {
  Matrix x;
  Matrix phi;
  Matrix z;
  Matrix h;
};

// Layer 2 of a random two-layer stack: X (d x n) ~ Phi Z H with Phi = Z_1.
Instance random_instance(std::mt19937_64& rng, int d = 12, int p1 = 6, int p2 = 3, int n = 15) {
  return {uniform(d, n, rng), uniform(d, p1, rng), uniform(p1, p2, rng, 0.1, 1.0),
          uniform(p2, n, rng, 0.1, 1.0)};
}

double layer_j(const Instance& s, const Matrix& z, const Matrix& h, double c) {
  return ae_objective(s.x, s.phi * z, h, c);
}

Matrix step_z(const Instance& s, double c, double eps = 1e-10) {
  return multiplicative_z(s.phi.transpose() * s.x, s.phi.transpose() * s.phi, s.z, s.h, c, eps);
}

Matrix step_h(const Instance& s, double c, double eps = 1e-10) {
  const Matrix basis = s.phi * s.z;
  return multiplicative_h(basis.transpose() * s.x, basis.transpose() * basis, s.h, c, eps);
}

// Columns are unit indicators of a random partition of the d rows.
Matrix disjoint_support(int d, int p, std::mt19937_64& rng) {
  std::vector<int> owner(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) owner[static_cast<std::size_t>(i)] = i % p;
  std::shuffle(owner.begin(), owner.end(), rng);
  Matrix z = Matrix::Zero(d, p);
  for (int i = 0; i < d; ++i) z(i, owner[static_cast<std::size_t>(i)]) = 1.0;
  for (int j = 0; j < p; ++j) z.col(j).normalize();
  return z;
}

}  // namespace

TEST(MultiplicativeZ, PositiveFixedPointWithoutEncoder) {
  std::mt19937_64 rng(1);
  const Matrix z = uniform(8, 3, rng, 0.5, 1.5), h = uniform(3, 10, rng, 0.5, 1.5);
  const Matrix x = z * h;
  const Matrix next = multiplicative_z(x, Matrix::Identity(8, 8), z, h, 0.0, 0.0);
  EXPECT_LE((next - z).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MultiplicativeZ, OrthonormalFixedPointWithEncoder) {
  std::mt19937_64 rng(2);
  const Matrix z = disjoint_support(9, 3, rng), h = uniform(3, 10, rng, 0.5, 1.5);
  const Matrix x = z * h;
  const Matrix next = multiplicative_z(x, Matrix::Identity(9, 9), z, h, 1.0, 0.0);
  EXPECT_LE((next - z).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MultiplicativeZ, NonnegativeAndMonotone) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    const Instance s = random_instance(rng);
    const Matrix z = step_z(s, 1.0);
    EXPECT_GE(z.minCoeff(), 0.0);
    const double before = layer_j(s, s.z, s.h, 1.0), after = layer_j(s, z, s.h, 1.0);
    EXPECT_LE(after, before + 1e-9 * std::max(1.0, before)) << "seed " << seed;
  }
}

TEST(MultiplicativeZ, StepOpposesGradient) {
  std::mt19937_64 rng(3);
  const Instance s = random_instance(rng);
  const Matrix grad = numeric_gradient([&](const Matrix& z) { return layer_j(s, z, s.h, 1.0); }, s.z);
  const Matrix delta = step_z(s, 1.0, 0.0) - s.z;
  for (Eigen::Index i = 0; i < grad.size(); ++i) {
    if (std::abs(grad(i)) > 1e-4) EXPECT_LT(delta(i) * grad(i), 0.0) << "entry " << i;
  }
}

TEST(MultiplicativeZ, ZeroPowerIsIdentity) {
  std::mt19937_64 rng(4);
  const Instance s = random_instance(rng);
  const Matrix z = multiplicative_z(s.phi.transpose() * s.x, s.phi.transpose() * s.phi, s.z, s.h,
                                    1.0, 1e-10, 0.0);
  EXPECT_EQ(z, s.z);
}

TEST(MultiplicativeH, ZeroIsAbsorbing) {
  std::mt19937_64 rng(5);
  const Instance s = random_instance(rng);
  const Matrix basis = s.phi * s.z;
  const Matrix h = multiplicative_h(basis.transpose() * s.x, basis.transpose() * basis,
                                    Matrix::Zero(3, 15), 1.0, 1e-10);
  EXPECT_EQ(h.cwiseAbs().maxCoeff(), 0.0);
}

TEST(MultiplicativeH, InteriorStationaryPointIsFixed) {
  std::mt19937_64 rng(6);
  const double c = 1.0;
  const Matrix phi = uniform(10, 4, rng, 0.2, 1.0), h = uniform(4, 12, rng, 0.5, 1.5);
  const Matrix g = phi.transpose() * phi;
  // (1 + c) Phi^T X = (Phi^T Phi + c I) H with X in the range of Phi.
  const Matrix b = g.ldlt().solve((g + c * Matrix::Identity(4, 4)) * h) / (1.0 + c);
  const Matrix x = phi * b;
  const Matrix next = multiplicative_h(phi.transpose() * x, g, h, c, 0.0);
  EXPECT_LE((next - h).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(MultiplicativeH, NonnegativeAndMonotone) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(100 + seed);
    const Instance s = random_instance(rng);
    const Matrix h = step_h(s, 1.0);
    EXPECT_GE(h.minCoeff(), 0.0);
    const double before = layer_j(s, s.z, s.h, 1.0), after = layer_j(s, s.z, h, 1.0);
    EXPECT_LE(after, before + 1e-9 * std::max(1.0, before)) << "seed " << seed;
  }
}

TEST(MultiplicativeH, MonotoneWithoutEncoder) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(200 + seed);
    const Instance s = random_instance(rng);
    const double before = layer_j(s, s.z, s.h, 0.0);
    EXPECT_LE(layer_j(s, s.z, step_h(s, 0.0), 0.0), before + 1e-9 * std::max(1.0, before));
    EXPECT_LE(layer_j(s, step_z(s, 0.0), s.h, 0.0), before + 1e-9 * std::max(1.0, before));
  }
}

TEST(MultiplicativeH, StepOpposesGradient) {
  std::mt19937_64 rng(7);
  const Instance s = random_instance(rng);
  const Matrix grad = numeric_gradient([&](const Matrix& h) { return layer_j(s, s.z, h, 1.0); }, s.h);
  const Matrix delta = step_h(s, 1.0, 0.0) - s.h;
  for (Eigen::Index i = 0; i < grad.size(); ++i) {
    if (std::abs(grad(i)) > 1e-4) EXPECT_LT(delta(i) * grad(i), 0.0) << "entry " << i;
  }
}

TEST(AeObjective, MatchesDefinition) {
  std::mt19937_64 rng(8);
  const Instance s = random_instance(rng);
  const Matrix basis = s.phi * s.z;
  const double expect = (s.x - basis * s.h).squaredNorm() +
                        0.5 * (s.h - basis.transpose() * s.x).squaredNorm();
  EXPECT_NEAR(ae_objective(s.x, basis, s.h, 0.5), expect, 1e-9 * expect);
  EXPECT_NEAR(ae_objective(s.x, basis, s.h, 0.0), (s.x - basis * s.h).squaredNorm(), 1e-9 * expect);
}
