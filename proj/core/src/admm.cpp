#include "aenmf/admm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aenmf/errors.hpp"
#include "aenmf/log.hpp"
#include "aenmf/multiplicative.hpp"

namespace aenmf {
namespace {

void check_index(const AdmmState& st, std::size_t v) {
  if (v >= st.modalities.size()) {
    std::ostringstream os;
    os << "modality index " << v << " out of range (" << st.modalities.size() << " modalities)";
    throw ContractError(os.str());
  }
}

// Diagonal IRLS weights 1 / max(||row_i||, eps) of the previous iterate.
Vector irls_weights(const Matrix& prev, double eps) {
  return row_norms(prev).cwiseMax(eps).cwiseInverse();
}

// (w S + mu I)^+ T for diagonal S = diag(weights); the diagonal is positive so
// the pseudo-inverse is the plain reciprocal.
Matrix reweighted_rows(const Matrix& target, const Vector& weights, double w, double mu) {
  const Vector scale = (w * weights.array() + mu).inverse().matrix();
  return scale.asDiagonal() * target;
}

double relative_change(const Matrix& next, const Matrix& prev) {
  return (next - prev).norm() / std::max(1.0, prev.norm());
}

}  // namespace

std::uint64_t modality_seed(std::uint64_t seed, std::size_t v) {
  return seed + v * 0x9e3779b97f4a7c15ULL;
}

void AdmmConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ParameterError("admm config: " + msg); };
  if (!(beta >= 0.0)) fail("beta must be >= 0");
  if (!(lambda >= 0.0)) fail("lambda must be >= 0");
  if (!(mu1 > 0.0) || !(mu2 > 0.0) || !(mu3 > 0.0)) fail("penalties mu1, mu2, mu3 must be > 0");
  if (max_iters < 1) fail("max_iters must be >= 1");
  if (!(tol >= 0.0)) fail("tol must be >= 0");
  if (!(eps_guard > 0.0)) fail("eps_guard must be > 0");
  if (!(encoder_weight >= 0.0)) fail("encoder_weight must be >= 0");
}

Basis layer_basis(const ModalityState& m, std::size_t count) {
  if (count > m.stack.depth()) throw ContractError("layer_basis: more factors than layers");
  Basis b;
  if (count == 0) {
    const Eigen::Index d = m.x.rows();
    b.phi = Matrix::Identity(d, d);
    b.phi_t_x = m.x;
    b.phi_t_phi = b.phi;
    return b;
  }
  b.phi = m.stack.layers[0].z;
  for (std::size_t i = 1; i < count; ++i) b.phi = b.phi * m.stack.layers[i].z;
  b.phi_t_x = b.phi.transpose() * m.x;
  b.phi_t_phi = b.phi.transpose() * b.phi;
  return b;
}

Matrix update_z(const AdmmState& st, const AdmmConfig& cfg, std::size_t v, std::size_t i) {
  check_index(st, v);
  const ModalityState& m = st.modalities[v];
  if (i >= m.stack.depth()) throw ContractError("update_z: layer index out of range");
  const Basis b = layer_basis(m, i);
  const Layer& layer = m.stack.layers[i];
  if (b.phi_t_x.rows() != layer.z.rows()) throw ContractError("update_z: shape mismatch");
  const bool last = i + 1 == m.stack.depth();
  const Matrix h = last ? pos_part(layer.h) : layer.h;
  return multiplicative_z(b.phi_t_x, b.phi_t_phi, layer.z, h, cfg.encoder_weight, cfg.eps_guard);
}

Matrix update_h_mid(const AdmmState& st, const AdmmConfig& cfg, std::size_t v, std::size_t i) {
  check_index(st, v);
  const ModalityState& m = st.modalities[v];
  if (i + 1 >= m.stack.depth()) {
    throw ContractError("update_h_mid: the last layer is updated through update_hm");
  }
  const Basis b = layer_basis(m, i + 1);
  return multiplicative_h(b.phi_t_x, b.phi_t_phi, m.stack.layers[i].h, cfg.encoder_weight,
                          cfg.eps_guard);
}

Matrix update_hm(const AdmmState& st, const AdmmConfig& cfg, std::size_t v) {
  check_index(st, v);
  const ModalityState& m = st.modalities[v];
  const Basis b = layer_basis(m, m.stack.depth());
  const double c = cfg.encoder_weight;
  const Matrix& a = m.prior.factor;

  Matrix lhs = 2.0 * b.phi_t_phi;
  lhs.diagonal().array() += 2.0 * c + cfg.mu2 + cfg.mu3;

  Matrix rhs = (2.0 * (1.0 + c)) * b.phi_t_x;
  rhs.noalias() += (m.lambda1 + cfg.mu1 * m.m1) * a.transpose();
  rhs += m.lambda2 + m.lambda3 + cfg.mu2 * (m.m2 + m.g * st.hstar) + cfg.mu3 * m.s;

  SymEig right{cfg.mu1 * m.prior.laplacian_eig.values, m.prior.laplacian_eig.vectors};
  return solve_sylvester(sym_eig(lhs), right, rhs, cfg.dense);
}

Matrix update_g(const AdmmState& st, const AdmmConfig& cfg, std::size_t v) {
  check_index(st, v);
  const ModalityState& m = st.modalities[v];
  const Matrix ht = st.hstar.transpose();
  const Matrix target = (m.hm() - m.m2 - m.lambda2 / cfg.mu2) * ht;
  return target * pinv(st.hstar * ht, cfg.dense);
}

Matrix update_hstar(const AdmmState& st, const AdmmConfig& cfg) {
  if (st.modalities.empty()) throw ContractError("update_hstar: no modalities");
  const Eigen::Index p = st.hstar.rows();
  Matrix gram = Matrix::Zero(p, p);
  Matrix rhs = Matrix::Zero(p, st.hstar.cols());
  for (const ModalityState& m : st.modalities) {
    gram.noalias() += cfg.mu2 * (m.g.transpose() * m.g);
    rhs.noalias() += m.g.transpose() * (cfg.mu2 * (m.hm() - m.m2) - m.lambda2);
  }
  return pinv(gram, cfg.dense) * rhs;
}

Matrix update_m1(const AdmmState& st, const AdmmConfig& cfg, std::size_t v) {
  check_index(st, v);
  const ModalityState& m = st.modalities[v];
  const Matrix target = cfg.mu1 * (m.hm() * m.prior.factor) - m.lambda1;
  return reweighted_rows(target, irls_weights(m.m1, cfg.eps_guard), cfg.beta, cfg.mu1);
}

Matrix update_m2(const AdmmState& st, const AdmmConfig& cfg, std::size_t v) {
  check_index(st, v);
  const ModalityState& m = st.modalities[v];
  const Matrix target = cfg.mu2 * (m.hm() - m.g * st.hstar) - m.lambda2;
  return reweighted_rows(target, irls_weights(m.m2, cfg.eps_guard), cfg.lambda, cfg.mu2);
}

DualUpdate update_duals(const AdmmState& st, const AdmmConfig& cfg, std::size_t v) {
  check_index(st, v);
  const ModalityState& m = st.modalities[v];
  const Matrix& h = m.hm();
  DualUpdate d;
  d.s = (h - m.lambda3 / cfg.mu3).cwiseMax(0.0);
  d.lambda1 = m.lambda1 + cfg.mu1 * (m.m1 - h * m.prior.factor);
  d.lambda2 = m.lambda2 + cfg.mu2 * (m.m2 + m.g * st.hstar - h);
  d.lambda3 = m.lambda3 + cfg.mu3 * (d.s - h);
  return d;
}

double objective_value(const AdmmState& st, const AdmmConfig& cfg) {
  double total = 0.0;
  for (const ModalityState& m : st.modalities) {
    const Basis b = layer_basis(m, m.stack.depth());
    const Matrix& h = m.hm();
    total += ae_objective(m.x, b.phi, h, cfg.encoder_weight);
    if (cfg.beta != 0.0) total += cfg.beta * l21_norm(h * m.prior.factor);
    if (cfg.lambda != 0.0) total += cfg.lambda * l21_norm(h - m.g * st.hstar);
  }
  return total;
}

Residuals constraint_residuals(const AdmmState& st) {
  double r1 = 0.0, r2 = 0.0, rs = 0.0;
  for (const ModalityState& m : st.modalities) {
    const Matrix& h = m.hm();
    r1 += (m.m1 - h * m.prior.factor).squaredNorm();
    r2 += (m.m2 + m.g * st.hstar - h).squaredNorm();
    rs += (m.s - h).squaredNorm();
  }
  return {std::sqrt(r1), std::sqrt(r2), std::sqrt(rs)};
}

AdmmState initial_state(std::vector<ModalityState> modalities) {
  if (modalities.empty()) throw InputError("initial_state: no modalities");
  AdmmState st;
  st.modalities = std::move(modalities);
  const Matrix& h0 = st.modalities.front().hm();
  st.hstar = Matrix::Zero(h0.rows(), h0.cols());
  for (const ModalityState& m : st.modalities) {
    if (m.hm().rows() != h0.rows() || m.hm().cols() != h0.cols()) {
      throw DimensionError("initial_state: every modality must share the last layer shape");
    }
    st.hstar += m.hm();
  }
  st.hstar /= static_cast<double>(st.modalities.size());

  const Eigen::Index p = h0.rows();
  for (ModalityState& m : st.modalities) {
    const Matrix& h = m.hm();
    m.g = Matrix::Identity(p, p);
    m.m1 = h * m.prior.factor;
    m.m2 = h - m.g * st.hstar;
    m.s = h.cwiseMax(0.0);
    m.lambda1 = Matrix::Zero(m.m1.rows(), m.m1.cols());
    m.lambda2 = Matrix::Zero(p, h.cols());
    m.lambda3 = Matrix::Zero(p, h.cols());
  }
  return st;
}

IterTrace admm_iteration(AdmmState& st, const AdmmConfig& cfg, int iter) {
  std::vector<Matrix> prev_hm;
  prev_hm.reserve(st.modalities.size());
  for (const ModalityState& m : st.modalities) prev_hm.push_back(m.hm());
  const Matrix prev_hstar = st.hstar;

  // Layers below the top, then H_m and G. Modalities are independent here.
  for (std::size_t v = 0; v < st.modalities.size(); ++v) {
    ModalityState& m = st.modalities[v];
    const std::size_t depth = m.stack.depth();
    for (std::size_t i = 0; i + 1 < depth; ++i) {
      m.stack.layers[i].h = update_h_mid(st, cfg, v, i);
      m.stack.layers[i].z = update_z(st, cfg, v, i);
    }
    m.hm() = update_hm(st, cfg, v);
    m.g = update_g(st, cfg, v);
  }

  // H* couples all modalities.
  st.hstar = update_hstar(st, cfg);

  for (std::size_t v = 0; v < st.modalities.size(); ++v) {
    ModalityState& m = st.modalities[v];
    m.m1 = update_m1(st, cfg, v);
    m.m2 = update_m2(st, cfg, v);
    DualUpdate d = update_duals(st, cfg, v);
    m.lambda1 = std::move(d.lambda1);
    m.lambda2 = std::move(d.lambda2);
    m.lambda3 = std::move(d.lambda3);
    m.s = std::move(d.s);
    m.stack.layers.back().z = update_z(st, cfg, v, m.stack.depth() - 1);
  }

  IterTrace t;
  t.iter = iter;
  t.objective = objective_value(st, cfg);
  const Residuals r = constraint_residuals(st);
  t.residual_m1 = r.m1;
  t.residual_m2 = r.m2;
  t.residual_s = r.s;
  t.max_update_delta = relative_change(st.hstar, prev_hstar);
  for (std::size_t v = 0; v < st.modalities.size(); ++v) {
    const Matrix& h = st.modalities[v].hm();
    t.max_update_delta = std::max(t.max_update_delta, relative_change(h, prev_hm[v]));
    t.hm_min = std::min(t.hm_min, h.minCoeff());
  }
  return t;
}

FitResult fit(const std::vector<ModalityData>& modalities, const std::vector<int>& layer_sizes,
              const AdmmConfig& cfg, const FitOptions& opts, std::uint64_t seed,
              const IterationCallback& on_iteration) {
  cfg.validate();
  if (modalities.empty()) throw InputError("fit: at least one modality is required");
  const Eigen::Index n = modalities.front().x.cols();
  for (const ModalityData& md : modalities) {
    if (md.x.cols() != n) {
      std::ostringstream os;
      os << "fit: modality '" << md.name << "' has " << md.x.cols() << " samples, expected " << n;
      throw InputError(os.str());
    }
    require_finite(md.x, "fit: modality '" + md.name + "'");
  }

  PretrainOptions pre = opts.pretrain;
  pre.encoder_weight = cfg.encoder_weight;

  std::vector<ModalityState> states;
  states.reserve(modalities.size());
  for (std::size_t v = 0; v < modalities.size(); ++v) {
    const ModalityData& md = modalities[v];
    ModalityState m;
    m.x = shift_nonnegative(md.x).x;
    m.stack = pretrain_stack(m.x, layer_sizes, pre, modality_seed(seed, v));
    m.prior = md.prior ? *md.prior : build_graph_prior(m.x, opts.graph);
    if (m.prior.factor.rows() != n) throw InputError("fit: graph prior does not match sample count");
    states.push_back(std::move(m));
  }

  FitResult out;
  out.state = initial_state(std::move(states));
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int it = 1; it <= cfg.max_iters; ++it) {
    IterTrace t = admm_iteration(out.state, cfg, it);
    out.traces.push_back(t);
    if (on_iteration) on_iteration(t, out.state);
    if (!std::isfinite(t.objective)) {
      std::ostringstream os;
      os << "fit: objective became non-finite at iteration " << it;
      throw SolverError(os.str());
    }
    if (std::isfinite(prev)) {
      const double rel = std::abs(prev - t.objective) / std::max(std::abs(prev), 1e-300);
      if (rel < cfg.tol) break;
    }
    prev = t.objective;
  }

  double worst = 0.0;
  for (ModalityState& m : out.state.modalities) {
    Matrix& h = m.hm();
    worst = std::min(worst, h.minCoeff());
    h = (h.array() > -cfg.clip_tol).select(h.cwiseMax(0.0), h);
  }
  if (worst <= -cfg.clip_tol) {
    std::ostringstream os;
    os << "fit: H_m keeps negative entries down to " << worst << " at exit";
    log::warn(os.str());
  }
  out.hstar = out.state.hstar;
  return out;
}

}  // namespace aenmf
