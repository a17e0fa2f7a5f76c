#include "aenmf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "aenmf/errors.hpp"

namespace aenmf {
namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, double sigma, std::mt19937_64& rng) {
  Matrix m(rows, cols);
  if (sigma == 0.0) return Matrix::Zero(rows, cols);
  std::normal_distribution<double> nd(0.0, sigma);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(rng);
  return m;
}

}  // namespace

void SynthSpec::validate() const {
  auto fail = [](const std::string& msg) { throw InputError("synthetic spec: " + msg); };
  if (n_clusters < 1) fail("n_clusters must be >= 1");
  if (samples_per_cluster < 1) fail("samples_per_cluster must be >= 1");
  if (modality_dims.empty()) fail("at least one modality is required");
  for (int d : modality_dims)
    if (d < 1) fail("modality dimensions must be >= 1");
  if (merge_map.size() > modality_dims.size()) fail("merge_map has more entries than modalities");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be >= 0");
  if (!(outlier_fraction >= 0.0 && outlier_fraction < 1.0)) fail("outlier_fraction must be in [0, 1)");
  if (center_separation && !(*center_separation > 0.0)) fail("center_separation must be > 0");

  for (std::size_t v = 0; v < merge_map.size(); ++v) {
    std::set<int> seen;
    for (const auto& group : merge_map[v]) {
      for (int c : group) {
        if (c < 0 || c >= n_clusters) {
          std::ostringstream os;
          os << "merge_map[" << v << "] references unknown cluster " << c;
          fail(os.str());
        }
        if (!seen.insert(c).second) {
          std::ostringstream os;
          os << "merge_map[" << v << "] lists cluster " << c << " more than once";
          fail(os.str());
        }
      }
    }
  }
  for (std::size_t v = 0; v < modality_dims.size(); ++v) {
    const auto blobs = blob_map(*this, v);
    const int count = *std::max_element(blobs.begin(), blobs.end()) + 1;
    if (count > modality_dims[v]) {
      std::ostringstream os;
      os << "modality " << v << " needs " << count << " blob centers but has only "
         << modality_dims[v] << " dimensions";
      fail(os.str());
    }
  }
  if (separable_by_fusion) {
    for (int a = 0; a < n_clusters; ++a) {
      for (int b = a + 1; b < n_clusters; ++b) {
        bool split = false;
        for (std::size_t v = 0; v < modality_dims.size() && !split; ++v) {
          const auto blobs = blob_map(*this, v);
          split = blobs[static_cast<std::size_t>(a)] != blobs[static_cast<std::size_t>(b)];
        }
        if (!split) {
          std::ostringstream os;
          os << "clusters " << a << " and " << b << " are merged in every modality";
          fail(os.str());
        }
      }
    }
  }
}

std::vector<int> blob_map(const SynthSpec& spec, std::size_t v) {
  std::vector<int> owner(static_cast<std::size_t>(spec.n_clusters), -1);
  int next = 0;
  if (v < spec.merge_map.size()) {
    for (const auto& group : spec.merge_map[v]) {
      if (group.empty()) continue;
      for (int c : group) {
        if (c >= 0 && c < spec.n_clusters) owner[static_cast<std::size_t>(c)] = next;
      }
      ++next;
    }
  }
  for (auto& o : owner)
    if (o < 0) o = next++;
  // Renumber in order of first appearance so blob ids are dense and stable.
  std::vector<int> remap(static_cast<std::size_t>(next), -1);
  int id = 0;
  for (auto& o : owner) {
    auto& r = remap[static_cast<std::size_t>(o)];
    if (r < 0) r = id++;
    o = r;
  }
  return owner;
}

Dataset generate(const SynthSpec& spec) {
  spec.validate();
  const int k = spec.n_clusters;
  const Eigen::Index n = static_cast<Eigen::Index>(k) * spec.samples_per_cluster;

  Dataset ds;
  ds.truth.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    ds.truth[static_cast<std::size_t>(i)] = static_cast<int>(i / spec.samples_per_cluster);

  for (std::size_t v = 0; v < spec.modality_dims.size(); ++v) {
    std::mt19937_64 rng(mix(spec.seed, v));
    const Eigen::Index d = spec.modality_dims[v];
    const auto blobs = blob_map(spec, v);
    const int n_blobs = *std::max_element(blobs.begin(), blobs.end()) + 1;

    // Regular simplex: scaled orthonormal directions in a random frame, so
    // every pair of centers sits exactly `sep` apart.
    const double sep = spec.center_separation.value_or(
        10.0 * std::max(spec.noise_sigma, 0.1) * std::sqrt(static_cast<double>(d)));
    const Matrix frame = Eigen::HouseholderQR<Matrix>(gaussian(d, n_blobs, 1.0, rng))
                             .householderQ() *
                         Matrix::Identity(d, n_blobs);
    const Matrix centers = (sep / std::sqrt(2.0)) * frame;

    Matrix x = gaussian(d, n, spec.noise_sigma, rng);
    for (Eigen::Index i = 0; i < n; ++i)
      x.col(i) += centers.col(blobs[static_cast<std::size_t>(ds.truth[static_cast<std::size_t>(i)])]);

    for (Eigen::Index r = 0; r < d; ++r) {
      const double lo = x.row(r).minCoeff();
      if (lo < 0.0) x.row(r).array() -= lo;
    }

    const auto n_out = static_cast<Eigen::Index>(std::floor(spec.outlier_fraction * static_cast<double>(n)));
    if (n_out > 0) {
      std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
      std::iota(idx.begin(), idx.end(), Eigen::Index{0});
      std::shuffle(idx.begin(), idx.end(), rng);
      const double hi = x.maxCoeff();
      std::uniform_real_distribution<double> unif(0.0, hi);
      for (Eigen::Index o = 0; o < n_out; ++o) {
        auto col = x.col(idx[static_cast<std::size_t>(o)]);
        for (Eigen::Index r = 0; r < d; ++r) col(r) = unif(rng);
      }
    }

    std::ostringstream name;
    name << "modality" << v;
    ds.modalities.push_back({name.str(), std::move(x), std::nullopt});
  }
  return ds;
}

SynthSpec complementary_spec(const std::vector<int>& dims, int samples_per_cluster,
                             double noise_sigma, std::uint64_t seed) {
  static const MergeGroups kPairs[] = {{{0, 1}}, {{1, 2}}, {{0, 2}}};
  SynthSpec s;
  s.n_clusters = 3;
  s.samples_per_cluster = samples_per_cluster;
  s.modality_dims = dims;
  for (std::size_t v = 0; v < dims.size(); ++v) s.merge_map.push_back(kPairs[v % 3]);
  s.noise_sigma = noise_sigma;
  s.seed = seed;
  s.separable_by_fusion = dims.size() >= 2;
  return s;
}

}  // namespace aenmf
