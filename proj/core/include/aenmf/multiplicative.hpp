#pragma once

// Multiplicative update kernels for the auto-encoder-like NMF layers.
//
// Both kernels work on a layer with input basis Phi (the product of the
// preceding Z factors, identity for the first layer) and are expressed in
// terms of phi_t_x = Phi^T X and phi_t_phi = Phi^T Phi. The encoder weight c
// scales the ||H - Z^T Phi^T X||^2 term; c = 1 is the full model and c = 0
// drops the encoder (plain deep NMF).

#include "aenmf/dense.hpp"

namespace aenmf {

// Z <- Z .* [(1 + c) Y H^T]_+ / (c Y Y^T Z + G Z H H^T + eps), Y = Phi^T X,
// G = Phi^T Phi.
Matrix multiplicative_z(const Matrix& phi_t_x, const Matrix& phi_t_phi, const Matrix& z,
                        const Matrix& h, double encoder_weight, double eps);

// Same step with its ratio raised to `power` (1 = full step).
Matrix multiplicative_z(const Matrix& phi_t_x, const Matrix& phi_t_phi, const Matrix& z,
                        const Matrix& h, double encoder_weight, double eps, double power);

// H <- H .* sqrt(([(1+c)Y]^p + [G H]^n + c[H]^n + eps) /
//                ([(1+c)Y]^n + [G H]^p + c[H]^p + eps)),
// with Y = Phi^T X and G = Phi^T Phi of the layer's full basis.
Matrix multiplicative_h(const Matrix& phi_t_x, const Matrix& phi_t_phi, const Matrix& h,
                        double encoder_weight, double eps, double power = 1.0);

// ||X - Phi H||^2 + c ||H - Phi^T X||^2 without materializing Phi X products
// larger than needed.
double ae_objective(const Matrix& x, const Matrix& phi, const Matrix& h, double encoder_weight);

}  // namespace aenmf
