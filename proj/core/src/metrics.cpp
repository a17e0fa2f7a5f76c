#include "aenmf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "aenmf/errors.hpp"

namespace aenmf {
namespace {

void check_pair(const Labels& truth, const Labels& pred, std::size_t min_n, const char* who) {
  if (truth.size() != pred.size()) {
    std::ostringstream os;
    os << who << ": label vectors differ in length (" << truth.size() << " vs " << pred.size()
       << ")";
    throw InputError(os.str());
  }
  if (truth.size() < min_n) {
    std::ostringstream os;
    os << who << ": needs at least " << min_n << " samples, got " << truth.size();
    throw InputError(os.str());
  }
}

std::vector<int> compact(const Labels& l, int& k) {
  std::map<int, int> ids;
  for (int v : l) ids.emplace(v, 0);
  int next = 0;
  for (auto& [v, id] : ids) id = next++;
  k = next;
  std::vector<int> out(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) out[i] = ids[l[i]];
  return out;
}

double comb2(double x) { return 0.5 * x * (x - 1.0); }

struct PairCounts {
  double same_both = 0.0;
  double same_truth = 0.0;
  double same_pred = 0.0;
  double total = 0.0;
};

PairCounts pair_counts(const Labels& truth, const Labels& pred) {
  const Matrix c = contingency(truth, pred);
  PairCounts pc;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j) pc.same_both += comb2(c(i, j));
  const Vector a = c.rowwise().sum();
  const Vector b = c.colwise().sum().transpose();
  for (Eigen::Index i = 0; i < a.size(); ++i) pc.same_truth += comb2(a(i));
  for (Eigen::Index j = 0; j < b.size(); ++j) pc.same_pred += comb2(b(j));
  pc.total = comb2(static_cast<double>(truth.size()));
  return pc;
}

}  // namespace

Matrix contingency(const Labels& truth, const Labels& pred) {
  check_pair(truth, pred, 0, "contingency");
  int kt = 0, kp = 0;
  const auto t = compact(truth, kt);
  const auto p = compact(pred, kp);
  Matrix c = Matrix::Zero(kt, kp);
  for (std::size_t i = 0; i < t.size(); ++i) c(t[i], p[i]) += 1.0;
  return c;
}

// Shortest augmenting path Hungarian method with potentials, O(n^2 m).
std::vector<int> min_cost_assignment(const Matrix& cost) {
  const Eigen::Index rows = cost.rows();
  const Eigen::Index cols = cost.cols();
  const Eigen::Index dim = std::max(rows, cols);
  if (dim == 0) return {};
  const double big = (cost.size() > 0 ? cost.cwiseAbs().maxCoeff() : 0.0) + 1.0;

  // 1-based square problem padded with `big` for dummy cells.
  auto c = [&](Eigen::Index i, Eigen::Index j) {
    return (i < rows && j < cols) ? cost(i, j) : big;
  };
  const double inf = std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::size_t>(dim);
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) -
                           u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> out(static_cast<std::size_t>(rows), -1);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = p[j];
    if (i >= 1 && static_cast<Eigen::Index>(i) <= rows && static_cast<Eigen::Index>(j) <= cols) {
      out[i - 1] = static_cast<int>(j - 1);
    }
  }
  return out;
}

double accuracy(const Labels& truth, const Labels& pred) {
  check_pair(truth, pred, 1, "accuracy");
  const Matrix c = contingency(truth, pred);
  const Matrix cost = (c.maxCoeff() - c.array()).matrix();
  const std::vector<int> match = min_cost_assignment(cost);
  double hits = 0.0;
  for (std::size_t i = 0; i < match.size(); ++i) {
    if (match[i] >= 0) hits += c(static_cast<Eigen::Index>(i), match[i]);
  }
  return hits / static_cast<double>(truth.size());
}

double nmi(const Labels& truth, const Labels& pred) {
  check_pair(truth, pred, 1, "nmi");
  const Matrix c = contingency(truth, pred);
  const double n = static_cast<double>(truth.size());
  const Vector a = c.rowwise().sum();
  const Vector b = c.colwise().sum().transpose();
  auto entropy = [n](const Vector& counts) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < counts.size(); ++i) {
      if (counts(i) > 0.0) h -= (counts(i) / n) * std::log(counts(i) / n);
    }
    return h;
  };
  const double hu = entropy(a);
  const double hv = entropy(b);
  if (hu == 0.0 && hv == 0.0) return 1.0;  // both single-cluster: identical
  if (hu == 0.0 || hv == 0.0) return 0.0;
  double mi = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (c(i, j) > 0.0) mi += (c(i, j) / n) * std::log(n * c(i, j) / (a(i) * b(j)));
    }
  }
  return std::clamp(mi / std::sqrt(hu * hv), 0.0, 1.0);
}

double adjusted_rand(const Labels& truth, const Labels& pred) {
  check_pair(truth, pred, 2, "adjusted_rand");
  const PairCounts pc = pair_counts(truth, pred);
  const double expected = pc.same_truth * pc.same_pred / pc.total;
  const double max_index = 0.5 * (pc.same_truth + pc.same_pred);
  const double denom = max_index - expected;
  if (denom == 0.0) return pc.same_both == max_index ? 1.0 : 0.0;
  return (pc.same_both - expected) / denom;
}

PairwisePrf pairwise_prf(const Labels& truth, const Labels& pred) {
  check_pair(truth, pred, 2, "pairwise_prf");
  const PairCounts pc = pair_counts(truth, pred);
  PairwisePrf out;
  if (pc.same_pred > 0.0) {
    out.precision = pc.same_both / pc.same_pred;
  } else {
    out.precision_defined = false;
  }
  if (pc.same_truth > 0.0) {
    out.recall = pc.same_both / pc.same_truth;
  } else {
    out.recall_defined = false;
  }
  const double s = out.precision + out.recall;
  out.f_score = s > 0.0 ? 2.0 * out.precision * out.recall / s : 0.0;
  return out;
}

MetricReport evaluate(const Labels& truth, const Labels& pred) {
  MetricReport r;
  r.acc = accuracy(truth, pred);
  r.nmi = nmi(truth, pred);
  r.ari = adjusted_rand(truth, pred);
  const PairwisePrf prf = pairwise_prf(truth, pred);
  r.precision = prf.precision;
  r.recall = prf.recall;
  r.f_score = prf.f_score;
  r.precision_defined = prf.precision_defined;
  r.recall_defined = prf.recall_defined;
  return r;
}

}  // namespace aenmf
