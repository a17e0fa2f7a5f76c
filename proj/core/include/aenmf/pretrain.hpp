#pragma once

#include <cstdint>
#include <vector>

#include "aenmf/dense.hpp"

namespace aenmf {

struct Layer {
  Matrix z;  // rows(input) x p_i
  Matrix h;  // p_i x n
};

// Z_1: d x p_1, Z_i: p_{i-1} x p_i, H_i: p_i x n, all nonnegative.
struct LayerStack {
  std::vector<int> layer_sizes;
  std::vector<Layer> layers;

  std::size_t depth() const { return layers.size(); }
};

struct PretrainOptions {
  int max_iters = 200;
  double tol = 1e-5;
  double eps = 1e-10;
  // Allowed per-step objective increase, relative to max(1, J).
  double monotone_slack = 1e-9;
  // 1 keeps the encoder term ||H - Z^T X||^2, 0 reduces to plain NMF.
  double encoder_weight = 1.0;
};

struct LayerFit {
  Matrix z;
  Matrix h;
  // Objective before the first step followed by one value per iteration.
  std::vector<double> objective;
  int damped_steps = 0;
};

// J(Z, H) = ||X - Z H||^2 + c ||H - Z^T X||^2 for a single layer.
double layer_objective(const Matrix& x, const Matrix& z, const Matrix& h,
                       double encoder_weight = 1.0);

// Hash of every column's bit pattern.
std::vector<std::uint64_t> column_keys(const Matrix& x);

// Fits one layer X ~ Z H by multiplicative updates. Requires 1 <= p <= min(d, n).
// Column j of the initial H is drawn from a generator keyed by keys[j]
// (default: column_keys(x)), so permuting the samples permutes the start.
LayerFit pretrain_layer(const Matrix& x, int p, const PretrainOptions& opts, std::uint64_t seed,
                        const std::vector<std::uint64_t>& keys = {});

// Greedy layer-wise stack: (Z_i, H_i) = pretrain_layer(H_{i-1}), H_0 = X.
// layer_sizes must be strictly decreasing with layer_sizes[0] < rows(X). Every
// layer keys its initial H by the columns of X. Layer i uses seed + i * 0x9e3779b97f4a7c15,
// so a one-layer stack equals pretrain_layer(x, p, opts, seed).
LayerStack pretrain_stack(const Matrix& x, const std::vector<int>& layer_sizes,
                          const PretrainOptions& opts, std::uint64_t seed);

struct ShiftResult {
  Matrix x;
  bool shifted = false;
};

// Shifts every feature (row) with a negative entry so that its minimum is 0.
ShiftResult shift_nonnegative(const Matrix& x);

}  // namespace aenmf
