#pragma once

#include <cstdint>
#include <random>

#include "aenmf/dense.hpp"

namespace aenmf::testing {

inline Matrix uniform(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double lo = 0.0,
                      double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = u(rng);
  return m;
}

inline Matrix gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = g(rng);
  return m;
}

// M^T M / n + shift I.
inline Matrix spd(Eigen::Index n, std::mt19937_64& rng, double shift = 0.1) {
  const Matrix g = gaussian(n, n, rng);
  Matrix s = g.transpose() * g / static_cast<double>(n);
  s.diagonal().array() += shift;
  return s;
}

// Central-difference gradient of f at x.
template <typename F>
Matrix numeric_gradient(F&& f, const Matrix& x, double h = 1e-5) {
  Matrix g(x.rows(), x.cols());
  Matrix probe = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double orig = probe(i, j);
      probe(i, j) = orig + h;
      const double up = f(probe);
      probe(i, j) = orig - h;
      const double down = f(probe);
      probe(i, j) = orig;
      g(i, j) = (up - down) / (2.0 * h);
    }
  }
  return g;
}

}  // namespace aenmf::testing
