#include "aenmf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "aenmf/errors.hpp"

namespace aenmf {
namespace {

double sq_dist(const Matrix& pts, Eigen::Index i, const Matrix& centers, Eigen::Index c) {
  return (pts.row(i) - centers.row(c)).squaredNorm();
}

// k-means++ seeding.
Matrix seed_centers(const Matrix& pts, int k, std::mt19937_64& rng) {
  const Eigen::Index n = pts.rows();
  Matrix centers(k, pts.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centers.row(0) = pts.row(pick(rng));
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& di = d2[static_cast<std::size_t>(i)];
      di = std::min(di, sq_dist(pts, i, centers, c - 1));
      total += di;
    }
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      double r = unif(rng) * total;
      chosen = -1;
      Eigen::Index last_positive = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double di = d2[static_cast<std::size_t>(i)];
        if (di > 0.0) last_positive = i;
        r -= di;
        if (r < 0.0) {
          chosen = i;
          break;
        }
      }
      // Rounding can leave r >= 0 after the scan.
      if (chosen < 0) chosen = last_positive;
    } else {
      chosen = pick(rng);
    }
    centers.row(c) = pts.row(chosen);
  }
  return centers;
}

double assign(const Matrix& pts, const Matrix& centers, std::vector<int>& labels) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
      const double d = sq_dist(pts, i, centers, c);
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = arg;
    inertia += best;
  }
  return inertia;
}

// Recomputes centers; an empty cluster takes the point farthest from its
// current center, which never increases the inertia.
void recenter(const Matrix& pts, Matrix& centers, std::vector<int>& labels) {
  const Eigen::Index k = centers.rows();
  Matrix sums = Matrix::Zero(k, pts.cols());
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    sums.row(l) += pts.row(i);
    ++counts[static_cast<std::size_t>(l)];
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) {
      centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
      continue;
    }
    Eigen::Index far = 0;
    double worst = -1.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      const int l = labels[static_cast<std::size_t>(i)];
      if (counts[static_cast<std::size_t>(l)] <= 1) continue;
      const double d = sq_dist(pts, i, centers, l);
      if (d > worst) {
        worst = d;
        far = i;
      }
    }
    if (worst < 0.0) continue;
    --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
    labels[static_cast<std::size_t>(far)] = static_cast<int>(c);
    counts[static_cast<std::size_t>(c)] = 1;
    centers.row(c) = pts.row(far);
  }
}

ClusterAssignment lloyd(const Matrix& pts, int k, int max_iters, std::mt19937_64& rng) {
  ClusterAssignment out;
  out.k = k;
  out.labels.assign(static_cast<std::size_t>(pts.rows()), 0);
  Matrix centers = seed_centers(pts, k, rng);
  double inertia = assign(pts, centers, out.labels);
  out.inertia_history.push_back(inertia);
  for (int it = 0; it < max_iters; ++it) {
    std::vector<int> prev = out.labels;
    recenter(pts, centers, out.labels);
    inertia = assign(pts, centers, out.labels);
    out.inertia_history.push_back(inertia);
    if (out.labels == prev) break;
  }
  out.inertia = inertia;
  return out;
}

// Per-column cosine distances 1 - cos(h_i, h_j); zero columns are at distance 1
// from everything except other zero columns.
Matrix cosine_distances(const Matrix& h) {
  const Vector norms = h.colwise().norm().transpose();
  Matrix unit = h;
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    if (norms(j) > 0.0) unit.col(j) /= norms(j);
  }
  Matrix d = (1.0 - (unit.transpose() * unit).array()).matrix();
  for (Eigen::Index i = 0; i < h.cols(); ++i) {
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      if (norms(i) == 0.0 || norms(j) == 0.0) d(i, j) = (norms(i) == norms(j)) ? 0.0 : 1.0;
    }
  }
  return d.cwiseMax(0.0);
}

Matrix euclidean_distances(const Matrix& h) {
  const Vector sq = h.colwise().squaredNorm().transpose();
  Matrix d = -2.0 * (h.transpose() * h);
  d.colwise() += sq;
  d.rowwise() += sq.transpose();
  return d.cwiseMax(0.0).cwiseSqrt();
}

std::vector<std::vector<int>> nearest(const Matrix& dist, int k_nn) {
  const Eigen::Index n = dist.rows();
  std::vector<std::vector<int>> nb(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    order.erase(order.begin() + i);
    std::partial_sort(order.begin(), order.begin() + k_nn, order.end(), [&](int a, int b) {
      if (dist(i, a) != dist(i, b)) return dist(i, a) < dist(i, b);
      return a < b;
    });
    nb[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + k_nn);
  }
  return nb;
}

}  // namespace

ClusterAssignment kmeans(const Matrix& points, int k, const KMeansOptions& opts,
                         std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (k < 1 || k > n) {
    std::ostringstream os;
    os << "kmeans: k must satisfy 1 <= k <= n (k=" << k << ", n=" << n << ")";
    throw ParameterError(os.str());
  }
  if (opts.restarts < 1) throw ParameterError("kmeans: restarts must be >= 1");

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::vector<std::uint32_t> seeds(static_cast<std::size_t>(opts.restarts));
  seq.generate(seeds.begin(), seeds.end());

  ClusterAssignment best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opts.restarts; ++r) {
    std::mt19937_64 rng(seeds[static_cast<std::size_t>(r)]);
    ClusterAssignment a = lloyd(points, k, opts.max_iters, rng);
    if (a.inertia < best.inertia) best = std::move(a);
  }
  return best;
}

Matrix spectral_affinity(const Matrix& h, const SpectralOptions& opts) {
  const Eigen::Index n = h.cols();
  const int k_nn = std::min<int>(opts.k_nn, static_cast<int>(n) - 1);
  if (k_nn < 1) throw ParameterError("spectral_affinity: need at least two samples");

  const bool cosine = opts.affinity == SpectralAffinity::kCosine;
  const Matrix dist = cosine ? cosine_distances(h) : euclidean_distances(h);
  const auto nb = nearest(dist, k_nn);

  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(n * k_nn));
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j : nb[static_cast<std::size_t>(i)]) edges.push_back(dist(i, j));

  double sigma;
  if (cosine) {
    sigma = std::accumulate(edges.begin(), edges.end(), 0.0) / static_cast<double>(edges.size());
  } else {
    auto mid = edges.begin() + static_cast<std::ptrdiff_t>(edges.size() / 2);
    std::nth_element(edges.begin(), mid, edges.end());
    sigma = *mid;
  }
  if (!(sigma > 1e-12)) sigma = 1.0;

  Matrix w0 = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j : nb[static_cast<std::size_t>(i)]) {
      const double d = dist(i, j);
      w0(i, j) = cosine ? std::exp(-d / sigma) : std::exp(-(d * d) / (sigma * sigma));
    }
  }
  return 0.5 * (w0 + w0.transpose());
}

SpectralEmbedding spectral_embedding(const Matrix& w, int k) {
  const Eigen::Index n = w.rows();
  if (w.cols() != n) throw DimensionError("spectral_embedding: affinity must be square");
  if (k < 1 || k > n) throw ParameterError("spectral_embedding: k must satisfy 1 <= k <= n");

  const Vector deg = w.rowwise().sum();
  Vector inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) inv_sqrt(i) = deg(i) > 0.0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
  Matrix lsym = -(inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal());
  lsym.diagonal().array() += 1.0;

  // sym_eig sorts descending; the smallest k sit at the end. Reverse them into
  // ascending order, keeping the solver's order among ties.
  const SymEig eig = sym_eig(lsym);
  SpectralEmbedding out;
  out.rows.resize(n, k);
  out.eigenvalues.resize(k);
  for (int c = 0; c < k; ++c) {
    const Eigen::Index src = n - 1 - c;
    out.rows.col(c) = eig.vectors.col(src);
    out.eigenvalues(c) = eig.values(src);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = out.rows.row(i).norm();
    if (norm > 1e-300) {
      out.rows.row(i) /= norm;
    } else {
      out.rows.row(i).setZero();
      ++out.zero_rows;
    }
  }
  return out;
}

ClusterAssignment spectral_cluster(const Matrix& h, int k, const SpectralOptions& opts,
                                   std::uint64_t seed) {
  const Eigen::Index n = h.cols();
  if (k < 1 || k > n) {
    std::ostringstream os;
    os << "spectral_cluster: k must satisfy 1 <= k <= n (k=" << k << ", n=" << n << ")";
    throw ParameterError(os.str());
  }
  if (h.size() == 0 || h.cwiseAbs().maxCoeff() == 0.0) {
    throw InputError("spectral_cluster: representation is identically zero");
  }
  require_finite(h, "spectral_cluster");
  if (n == 1) return ClusterAssignment{{0}, 1, 0.0, {0.0}};
  const Matrix w = spectral_affinity(h, opts);
  const SpectralEmbedding emb = spectral_embedding(w, k);
  return kmeans(emb.rows, k, opts.kmeans, seed);
}

}  // namespace aenmf
