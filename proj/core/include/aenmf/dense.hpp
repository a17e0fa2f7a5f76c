#pragma once

// Dense kernels shared by every stage of the factorization pipeline.
//
// Matrices are plain Eigen::MatrixXd values. Samples are stored as columns
// throughout (a d x n feature matrix holds n samples of dimension d).

#include <Eigen/Dense>

#include <string_view>
#include <utility>

namespace aenmf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct DenseTolerances {
  // Relative singular-value cutoff factor for pinv: sigma_i is dropped when
  // sigma_i <= max(rows, cols) * sigma_max * pinv_rcond.
  double pinv_rcond = 1e-12;
  // Smallest admissible eigenvalue sum lambda_i(A) + nu_j(B) in the Sylvester
  // solver, relative to max(1, |spectrum|).
  double sylvester_pencil = 1e-12;
};

// Symmetric eigendecomposition S = Q diag(values) Q^T, values descending.
struct SymEig {
  Vector values;
  Matrix vectors;
};

// Throws InputError if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

// Elementwise split M = P - N with P, N >= 0 and P .* N == 0.
std::pair<Matrix, Matrix> pos_neg_split(const Matrix& m);
Matrix pos_part(const Matrix& m);
Matrix neg_part(const Matrix& m);

// Row-wise Euclidean norms.
Vector row_norms(const Matrix& m);

// Sum of row 2-norms.
double l21_norm(const Matrix& m);

// Moore-Penrose pseudo-inverse via SVD with a relative singular-value cutoff.
Matrix pinv(const Matrix& m, const DenseTolerances& tol = {});

// Eigendecomposition of (S + S^T) / 2. Throws DimensionError for non-square input.
SymEig sym_eig(const Matrix& s);

// Solves A X + X B = C for symmetric PSD A (p x p) and B (q x q) through the
// eigendecompositions of both coefficients: with A = U diag(l) U^T and
// B = V diag(n) V^T, X = U Y V^T where Y_ij = (U^T C V)_ij / (l_i + n_j).
// Throws SolverError when some l_i + n_j is not strictly positive.
Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c,
                       const DenseTolerances& tol = {});

// Same, reusing decompositions that the caller already holds.
Matrix solve_sylvester(const SymEig& a, const SymEig& b, const Matrix& c,
                       const DenseTolerances& tol = {});

}  // namespace aenmf
