#include "aenmf/pretrain.hpp"

#include <algorithm>
#include <cstring>
#include <cmath>
#include <random>
#include <sstream>

#include "aenmf/errors.hpp"
#include "aenmf/log.hpp"
#include "aenmf/multiplicative.hpp"

namespace aenmf {
namespace {

constexpr int kMaxDamping = 30;

Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = scale * unif(rng);
  return m;
}

// Applies `step(power)` and accepts the first power in 1, 1/2, 1/4, ... whose
// objective does not exceed the current one by more than the slack.
template <typename Step, typename Eval>
Matrix guarded_step(const Matrix& current, double& objective, double slack, int& damped,
                    Step&& step, Eval&& eval) {
  double power = 1.0;
  for (int attempt = 0; attempt <= kMaxDamping; ++attempt, power *= 0.5) {
    Matrix next = step(power);
    const double j = eval(next);
    if (std::isfinite(j) && j <= objective + slack * std::max(1.0, objective)) {
      if (attempt > 0) ++damped;
      objective = j;
      return next;
    }
  }
  ++damped;
  return current;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Column j is drawn from a generator keyed by keys[j], so the draw follows the
// sample rather than its position.
Matrix keyed_uniform(Eigen::Index rows, const std::vector<std::uint64_t>& keys, double scale,
                     std::uint64_t seed) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix m(rows, static_cast<Eigen::Index>(keys.size()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    std::mt19937_64 rng(splitmix(seed ^ splitmix(keys[static_cast<std::size_t>(j)])));
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = scale * unif(rng);
  }
  return m;
}

}  // namespace

std::vector<std::uint64_t> column_keys(const Matrix& x) {
  std::vector<std::uint64_t> keys(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double v = x(i, j) == 0.0 ? 0.0 : x(i, j);
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      h = splitmix(h ^ bits);
    }
    keys[static_cast<std::size_t>(j)] = h;
  }
  return keys;
}

double layer_objective(const Matrix& x, const Matrix& z, const Matrix& h, double encoder_weight) {
  return ae_objective(x, z, h, encoder_weight);
}

LayerFit pretrain_layer(const Matrix& x, int p, const PretrainOptions& opts, std::uint64_t seed,
                        const std::vector<std::uint64_t>& keys) {
  const Eigen::Index d = x.rows();
  const Eigen::Index n = x.cols();
  if (p < 1 || p > std::min(d, n)) {
    std::ostringstream os;
    os << "pretrain_layer: layer size " << p << " must be in [1, min(d, n)] = [1, "
       << std::min(d, n) << "]";
    throw ParameterError(os.str());
  }
  if (opts.max_iters < 0) throw ParameterError("pretrain_layer: max_iters must be >= 0");

  std::mt19937_64 rng(seed);
  const double mean = x.size() > 0 ? std::max(0.0, x.mean()) : 0.0;
  const double scale = std::sqrt(mean / static_cast<double>(p));

  LayerFit fit;
  fit.z = uniform_matrix(d, p, scale, rng);
  if (!keys.empty() && static_cast<Eigen::Index>(keys.size()) != n) {
    throw DimensionError("pretrain_layer: one key per sample is required");
  }
  fit.h = keyed_uniform(p, keys.empty() ? column_keys(x) : keys, scale, splitmix(seed));

  const double c = opts.encoder_weight;
  double j = layer_objective(x, fit.z, fit.h, c);
  fit.objective.push_back(j);

  for (int it = 0; it < opts.max_iters; ++it) {
    const double before = j;

    // H first, then Z, matching the fine-tuning order.
    const Matrix zt_x = fit.z.transpose() * x;
    const Matrix zt_z = fit.z.transpose() * fit.z;
    fit.h = guarded_step(
        fit.h, j, opts.monotone_slack, fit.damped_steps,
        [&](double power) { return multiplicative_h(zt_x, zt_z, fit.h, c, opts.eps, power); },
        [&](const Matrix& h) { return layer_objective(x, fit.z, h, c); });

    const Matrix eye = Matrix::Identity(d, d);
    fit.z = guarded_step(
        fit.z, j, opts.monotone_slack, fit.damped_steps,
        [&](double power) { return multiplicative_z(x, eye, fit.z, fit.h, c, opts.eps, power); },
        [&](const Matrix& z) { return layer_objective(x, z, fit.h, c); });

    fit.objective.push_back(j);
    const double rel = std::abs(before - j) / std::max(before, 1e-300);
    if (rel < opts.tol) break;
  }
  return fit;
}

LayerStack pretrain_stack(const Matrix& x, const std::vector<int>& layer_sizes,
                          const PretrainOptions& opts, std::uint64_t seed) {
  if (layer_sizes.empty()) throw ParameterError("pretrain_stack: at least one layer is required");
  if (layer_sizes.front() >= x.rows()) {
    std::ostringstream os;
    os << "pretrain_stack: first layer size " << layer_sizes.front()
       << " must be smaller than the feature dimension " << x.rows();
    throw ParameterError(os.str());
  }
  for (std::size_t i = 1; i < layer_sizes.size(); ++i) {
    if (layer_sizes[i] >= layer_sizes[i - 1]) {
      throw ParameterError("pretrain_stack: layer sizes must be strictly decreasing");
    }
  }

  LayerStack stack;
  stack.layer_sizes = layer_sizes;
  stack.layers.reserve(layer_sizes.size());
  const Matrix* input = &x;
  const std::vector<std::uint64_t> keys = column_keys(x);
  for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
    const std::uint64_t s = seed + i * 0x9e3779b97f4a7c15ULL;
    LayerFit f = pretrain_layer(*input, layer_sizes[i], opts, s, keys);
    stack.layers.push_back({std::move(f.z), std::move(f.h)});
    input = &stack.layers.back().h;
  }
  return stack;
}

ShiftResult shift_nonnegative(const Matrix& x) {
  ShiftResult out{x, false};
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double lo = x.row(i).minCoeff();
    if (lo < 0.0) {
      out.x.row(i).array() -= lo;
      out.shifted = true;
    }
  }
  if (out.shifted) log::warn("input has negative entries; features shifted to a minimum of 0");
  return out;
}

}  // namespace aenmf
