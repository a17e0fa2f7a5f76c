#pragma once

// Fine-tuning of the multi-modal auto-encoder-like deep NMF.
//
// Per modality v the model minimizes
//
//   ||X - Z_1..Z_m H_m||^2 + c ||H_m - Z_m^T..Z_1^T X||^2
//     + beta ||H_m A||_{2,1} + lambda ||H_m - G H*||_{2,1}
//
// summed over modalities, with H* shared. The two l2,1 terms are split off
// through auxiliary variables M1 = H_m A and M2 = H_m - G H*, and H_m >= 0 is
// carried by a slack s >= 0; all three constraints are enforced with scaled
// multipliers (augmented Lagrangian, fixed penalties mu1..mu3).
//
// The update functions are pure: each returns the new value of one block and
// leaves the state untouched, so callers (and tests) decide when to commit.

#include <cstdint>
#include <functional>
#include <vector>

#include "aenmf/dense.hpp"
#include "aenmf/graph.hpp"
#include "aenmf/modality.hpp"
#include "aenmf/pretrain.hpp"

namespace aenmf {

struct AdmmConfig {
  double beta = 0.01;
  double lambda = 0.01;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double mu3 = 1.0;
  int max_iters = 150;
  double tol = 1e-4;
  double eps_guard = 1e-10;
  // Weight of the encoder term; 0 switches the auto-encoder structure off.
  double encoder_weight = 1.0;
  // H_m entries in (-clip_tol, 0) are zeroed when the result is extracted.
  double clip_tol = 1e-6;
  DenseTolerances dense;

  void validate() const;
};

struct ModalityState {
  Matrix x;
  GraphPrior prior;
  LayerStack stack;
  Matrix g;
  Matrix m1;
  Matrix m2;
  Matrix lambda1;
  Matrix lambda2;
  Matrix lambda3;
  Matrix s;

  const Matrix& hm() const { return stack.layers.back().h; }
  Matrix& hm() { return stack.layers.back().h; }
};

struct AdmmState {
  std::vector<ModalityState> modalities;
  Matrix hstar;
};

struct IterTrace {
  int iter = 0;
  double objective = 0.0;
  double residual_m1 = 0.0;
  double residual_m2 = 0.0;
  double residual_s = 0.0;
  double max_update_delta = 0.0;
  // Most negative entry of any H_m after the iteration (0 when none).
  double hm_min = 0.0;
};

struct DualUpdate {
  Matrix lambda1;
  Matrix lambda2;
  Matrix lambda3;
  Matrix s;
};

// Products of the first `count` Z factors of modality v: phi_t_x = Phi^T X and
// phi_t_phi = Phi^T Phi, plus Phi itself. count = 0 yields the identity basis.
struct Basis {
  Matrix phi;
  Matrix phi_t_x;
  Matrix phi_t_phi;
};
Basis layer_basis(const ModalityState& m, std::size_t count);

// Layer i (0-based) basis update, Phi = Z_1..Z_{i}. For the last layer the
// current H_m is clipped at zero before use.
Matrix update_z(const AdmmState& st, const AdmmConfig& cfg, std::size_t v, std::size_t i);

// Intermediate representation H_i, i < m - 1 (0-based). Throws ContractError
// for the last layer.
Matrix update_h_mid(const AdmmState& st, const AdmmConfig& cfg, std::size_t v, std::size_t i);

// Solves the Sylvester stationarity condition of the augmented Lagrangian in H_m:
//   [2 Phi^T Phi + (2c + mu2 + mu3) I] H + mu1 H A A^T
//     = 2(1 + c) Phi^T X + L1 A^T + L2 + L3 + mu1 M1 A^T + mu2 (M2 + G H*) + mu3 s
Matrix update_hm(const AdmmState& st, const AdmmConfig& cfg, std::size_t v);

// G = ((H_m - M2) H*^T - L2 H*^T / mu2) (H* H*^T)^+
Matrix update_g(const AdmmState& st, const AdmmConfig& cfg, std::size_t v);

// H* = (sum_v mu2 G^T G)^+ sum_v G^T (mu2 (H_m - M2) - L2)
Matrix update_hstar(const AdmmState& st, const AdmmConfig& cfg);

// One reweighted step: M1 = (beta S1 + mu1 I)^+ (mu1 H_m A - L1), with
// (S1)_ii = 1 / max(||row_i(M1)||, eps_guard) taken from the current M1.
Matrix update_m1(const AdmmState& st, const AdmmConfig& cfg, std::size_t v);

// M2 = (lambda S2 + mu2 I)^+ (mu2 (H_m - G H*) - L2), S2 from the current M2.
Matrix update_m2(const AdmmState& st, const AdmmConfig& cfg, std::size_t v);

// s = max(0, H_m - L3 / mu3), then L1 += mu1 (M1 - H_m A),
// L2 += mu2 (M2 + G H* - H_m), L3 += mu3 (s - H_m).
DualUpdate update_duals(const AdmmState& st, const AdmmConfig& cfg, std::size_t v);

// Objective of the model (l2,1 form) at the current primal variables.
double objective_value(const AdmmState& st, const AdmmConfig& cfg);

struct Residuals {
  double m1 = 0.0;
  double m2 = 0.0;
  double s = 0.0;
};
Residuals constraint_residuals(const AdmmState& st);

// Feasible starting point: multipliers 0, G = I, H* = mean_v H_m, M1 = H_m A,
// M2 = H_m - G H*, s = max(0, H_m).
AdmmState initial_state(std::vector<ModalityState> modalities);

// Runs one outer iteration in place and returns its trace.
IterTrace admm_iteration(AdmmState& st, const AdmmConfig& cfg, int iter);

struct FitOptions {
  PretrainOptions pretrain;
  GraphOptions graph;
};

struct FitResult {
  Matrix hstar;
  std::vector<IterTrace> traces;
  AdmmState state;
};

// Pre-training seed of modality v in fit().
std::uint64_t modality_seed(std::uint64_t seed, std::size_t v);

using IterationCallback = std::function<void(const IterTrace&, const AdmmState&)>;

// Pre-trains every modality, builds its graph prior, then alternates the
// updates until the relative objective change drops below cfg.tol or
// cfg.max_iters is reached.
FitResult fit(const std::vector<ModalityData>& modalities, const std::vector<int>& layer_sizes,
              const AdmmConfig& cfg, const FitOptions& opts, std::uint64_t seed,
              const IterationCallback& on_iteration = {});

}  // namespace aenmf
