#pragma once
// Dense double-precision matrix kernels sized for desk-scale problems
// (dimensions up to a few hundred). Row-major storage, no BLAS.
// Algorithms are deliberately simple and deterministic: power iteration for
// the spectral norm, cyclic Jacobi for symmetric eigenproblems, fixed-point
// iteration for the stationary (Lyapunov) covariance.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace povar {

// Thrown when an iterative kernel hits its iteration cap. Carries the last
// iterate value so callers can report diagnostics.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last)
      : std::runtime_error(what), last_value(last) {}
  double last_value;
};

// Thrown when a transition matrix is not stable (spectral norm >= 1).
class InstabilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix diag(const std::vector<double>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return a_.empty(); }

  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  // Re-checks the finiteness invariant; use after in-place fills.
  void check_finite(const char* what = "matrix") const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

bool same_shape(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double c, const Matrix& m);
Matrix matrix_power(const Matrix& m, unsigned k);  // m^k, k >= 0

// y = M x for a plain vector; used by the simulation recursion.
std::vector<double> matvec(const Matrix& m, const std::vector<double>& x);

// Operator norms. op_norm_inf = max row abs-sum, op_norm_1 = max column
// abs-sum (equivalently op_norm_inf of the transpose).
double op_norm_inf(const Matrix& m);
double op_norm_1(const Matrix& m);
double max_norm(const Matrix& m);
double frobenius_norm(const Matrix& m);

// ||M||_2 = sqrt(lambda_max(M'M)) by power iteration to relative accuracy
// tol. Two deterministic starts are used (normalized all-ones, then a fixed
// seeded pseudo-random vector) and the larger converged Rayleigh limit wins;
// the second start covers all-ones being orthogonal to the top eigenvector.
double spectral_norm(const Matrix& m, double tol = 1e-10);

// Symmetric eigendecomposition via cyclic Jacobi rotations. Eigenvalues are
// returned in descending order, vectors as the corresponding columns.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};
SymmetricEigen jacobi_eigen(const Matrix& s);

// Moore-Penrose pseudoinverse via the eigendecomposition of M'M. Singular
// directions with singular value < rank_tol * s_max are truncated; the zero
// matrix maps to the zero matrix.
Matrix pseudo_inverse(const Matrix& m, double rank_tol = 1e-10);

// Inverse of a symmetric positive-definite matrix; throws std::domain_error
// when the relative conditioning falls below rank_tol.
Matrix sym_inverse(const Matrix& s, double rank_tol = 1e-10);

// Eigenvalue power S^e of a symmetric PSD matrix. Eigenvalues are clamped
// from below at `floor` before applying the power (used for Q^(-1/2) where
// the model guarantees Q >= omega^2 I). Negative powers require a positive
// effective spectrum.
Matrix sym_power(const Matrix& s, double expnt, double floor = 0.0);

// PSD square root; tiny negative eigenvalues from roundoff are clamped to 0.
Matrix sym_sqrt(const Matrix& s);

// Solves G = theta G theta' + Sigma by fixed-point iteration from G = Sigma,
// stopping when successive iterates differ by < tol in max norm. Requires
// spectral_norm(theta) < 1 (InstabilityError otherwise) and symmetric PSD
// Sigma (domain error otherwise). The result is symmetrized exactly.
Matrix stationary_covariance(const Matrix& theta, const Matrix& Sigma,
                             double tol = 1e-12);

// Cholesky factorization (lower L with S = L L'); domain error if S is not
// positive definite. cholesky_solve solves S X = B given L.
Matrix cholesky_factor(const Matrix& s);
Matrix cholesky_solve(const Matrix& l, const Matrix& b);

}  // namespace povar
