#include "aenmf/multiplicative.hpp"

namespace aenmf {

Matrix multiplicative_z(const Matrix& phi_t_x, const Matrix& phi_t_phi, const Matrix& z,
                        const Matrix& h, double encoder_weight, double eps) {
  return multiplicative_z(phi_t_x, phi_t_phi, z, h, encoder_weight, eps, 1.0);
}

Matrix multiplicative_z(const Matrix& phi_t_x, const Matrix& phi_t_phi, const Matrix& z,
                        const Matrix& h, double encoder_weight, double eps, double power) {
  const Matrix numer = pos_part((1.0 + encoder_weight) * (phi_t_x * h.transpose()));
  Matrix denom = phi_t_phi * z * (h * h.transpose());
  if (encoder_weight != 0.0) {
    denom.noalias() += encoder_weight * (phi_t_x * (phi_t_x.transpose() * z));
  }
  denom = denom.cwiseMax(0.0).array() + eps;
  const Eigen::ArrayXXd ratio = numer.array() / denom.array();
  if (power == 1.0) return (z.array() * ratio).matrix();
  return (z.array() * ratio.pow(power)).matrix();
}

Matrix multiplicative_h(const Matrix& phi_t_x, const Matrix& phi_t_phi, const Matrix& h,
                        double encoder_weight, double eps, double power) {
  const auto [yp, yn] = pos_neg_split((1.0 + encoder_weight) * phi_t_x);
  const auto [gp, gn] = pos_neg_split(phi_t_phi * h);
  const auto [hp, hn] = pos_neg_split(h);
  const Eigen::ArrayXXd numer = yp.array() + gn.array() + encoder_weight * hn.array() + eps;
  const Eigen::ArrayXXd denom = yn.array() + gp.array() + encoder_weight * hp.array() + eps;
  return (h.array() * (numer / denom).pow(0.5 * power)).matrix();
}

double ae_objective(const Matrix& x, const Matrix& phi, const Matrix& h, double encoder_weight) {
  double j = (x - phi * h).squaredNorm();
  if (encoder_weight != 0.0) j += encoder_weight * (h - phi.transpose() * x).squaredNorm();
  return j;
}

}  // namespace aenmf
