#include "aenmf/dense.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "aenmf/errors.hpp"

namespace aenmf {

const char* to_string(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::kDimension: return "dimension";
    case ErrorCategory::kParameter: return "parameter";
    case ErrorCategory::kContract: return "contract";
    case ErrorCategory::kSolver: return "solver";
    case ErrorCategory::kInput: return "input";
    case ErrorCategory::kParse: return "parse";
    case ErrorCategory::kConfig: return "config";
    case ErrorCategory::kIo: return "io";
  }
  return "unknown";
}

void require_finite(const Matrix& m, std::string_view what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j))) {
        std::ostringstream os;
        os << what << ": non-finite entry at (" << i << ", " << j << ")";
        throw InputError(os.str());
      }
    }
  }
}

Matrix pos_part(const Matrix& m) { return m.cwiseMax(0.0); }

Matrix neg_part(const Matrix& m) { return (-m).cwiseMax(0.0); }

std::pair<Matrix, Matrix> pos_neg_split(const Matrix& m) {
  return {pos_part(m), neg_part(m)};
}

Vector row_norms(const Matrix& m) { return m.rowwise().norm(); }

double l21_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return row_norms(m).sum();
}

Matrix pinv(const Matrix& m, const DenseTolerances& tol) {
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff =
      static_cast<double>(std::max(m.rows(), m.cols())) * smax * tol.pinv_rcond;
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

SymEig sym_eig(const Matrix& s) {
  if (s.rows() != s.cols()) {
    std::ostringstream os;
    os << "sym_eig: expected a square matrix, got " << s.rows() << "x" << s.cols();
    throw DimensionError(os.str());
  }
  const Eigen::Index n = s.rows();
  if (n == 0) return {Vector(), Matrix()};
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw SolverError("sym_eig: eigensolver did not converge");
  // Eigen returns ascending order.
  SymEig out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

Matrix solve_sylvester(const SymEig& a, const SymEig& b, const Matrix& c,
                       const DenseTolerances& tol) {
  const Eigen::Index p = a.values.size();
  const Eigen::Index q = b.values.size();
  if (c.rows() != p || c.cols() != q) {
    std::ostringstream os;
    os << "solve_sylvester: right-hand side is " << c.rows() << "x" << c.cols()
       << ", expected " << p << "x" << q;
    throw DimensionError(os.str());
  }
  if (p == 0 || q == 0) return Matrix::Zero(p, q);

  const double scale = std::max({1.0, a.values.cwiseAbs().maxCoeff(),
                                 b.values.cwiseAbs().maxCoeff()});
  const double floor = tol.sylvester_pencil * scale;

  Matrix y = a.vectors.transpose() * c * b.vectors;
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      const double denom = a.values(i) + b.values(j);
      if (!(denom > floor)) {
        std::ostringstream os;
        os << "solve_sylvester: singular pencil, lambda_A[" << i << "] + lambda_B[" << j
           << "] = " << a.values(i) << " + " << b.values(j) << " = " << denom;
        throw SolverError(os.str());
      }
      y(i, j) /= denom;
    }
  }
  return a.vectors * y * b.vectors.transpose();
}

Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c,
                       const DenseTolerances& tol) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw DimensionError("solve_sylvester: coefficient matrices must be square");
  }
  return solve_sylvester(sym_eig(a), sym_eig(b), c, tol);
}

}  // namespace aenmf
