#include "povar/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace povar {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_nonempty(const Matrix& m, const char* op) {
  if (m.empty()) throw std::domain_error(std::string(op) + ": empty matrix");
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  require(rows_ * cols_ == a_.size(), "Matrix: entry count does not match shape");
  check_finite("Matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diag(const std::vector<double>& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  m.check_finite("diag");
  return m;
}

void Matrix::check_finite(const char* what) const {
  for (double v : a_) {
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

bool same_shape(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  c.check_finite("matmul");
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require(same_shape(a, b), "operator+: shape mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  c.check_finite("operator+");
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require(same_shape(a, b), "operator-: shape mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  c.check_finite("operator-");
  return c;
}

Matrix operator*(double c, const Matrix& m) {
  Matrix r = m;
  for (double& v : r.data()) v *= c;
  r.check_finite("scale");
  return r;
}

Matrix matrix_power(const Matrix& m, unsigned k) {
  require(m.rows() == m.cols(), "matrix_power: square matrix required");
  Matrix r = Matrix::identity(m.rows());
  for (unsigned i = 0; i < k; ++i) r = matmul(r, m);
  return r;
}

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
  require(m.cols() == x.size(), "matvec: dimension mismatch");
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

double op_norm_inf(const Matrix& m) {
  require_nonempty(m, "op_norm_inf");
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::fabs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

double op_norm_1(const Matrix& m) {
  require_nonempty(m, "op_norm_1");
  return op_norm_inf(transpose(m));
}

double max_norm(const Matrix& m) {
  require_nonempty(m, "max_norm");
  double best = 0.0;
  for (double v : m.data()) best = std::max(best, std::fabs(v));
  return best;
}

double frobenius_norm(const Matrix& m) {
  require_nonempty(m, "frobenius_norm");
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

namespace {

constexpr int kIterationCap = 10000;

struct PowerRun {
  double lambda = 0.0;
  bool converged = false;
};

// One power-iteration run on the symmetric PSD matrix A from start vector v.
PowerRun power_iterate(const Matrix& a, std::vector<double> v, double tol) {
  const std::size_t n = a.rows();
  double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  for (auto& x : v) x /= norm;
  PowerRun run;
  double lambda_prev = -1.0;
  for (int it = 0; it < kIterationCap; ++it) {
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * v[j];
      w[i] = acc;
    }
    const double lambda = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
    const double wn = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    run.lambda = std::max(lambda, 0.0);
    if (wn <= 1e-300) {  // start vector lies in the kernel
      run.converged = true;
      return run;
    }
    if (lambda_prev >= 0.0 && std::fabs(lambda - lambda_prev) <= tol * std::max(lambda, 1e-300)) {
      run.converged = true;
      return run;
    }
    lambda_prev = lambda;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
  }
  return run;
}

}  // namespace

double spectral_norm(const Matrix& m, double tol) {
  require_nonempty(m, "spectral_norm");
  require(tol > 0.0, "spectral_norm: tol must be positive");
  // Work on the smaller Gram matrix of M'M / MM'.
  const Matrix& g = m.cols() <= m.rows() ? m : transpose(m);
  Matrix a(g.cols(), g.cols());
  for (std::size_t i = 0; i < g.cols(); ++i)
    for (std::size_t j = i; j < g.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < g.rows(); ++k) acc += g(k, i) * g(k, j);
      a(i, j) = acc;
      a(j, i) = acc;
    }
  const std::size_t n = a.rows();
  PowerRun ones = power_iterate(a, std::vector<double>(n, 1.0), tol);
  // Deterministic second start: a fixed linear-congruential scramble. Covers
  // the all-ones vector being (numerically) orthogonal to the top eigenvector.
  std::vector<double> rv(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ULL;
  for (auto& x : rv) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    x = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
  }
  PowerRun rnd = power_iterate(a, std::move(rv), tol);
  const PowerRun& best = ones.lambda >= rnd.lambda ? ones : rnd;
  if (!best.converged)
    throw ConvergenceError("spectral_norm: power iteration hit iteration cap",
                           std::sqrt(std::max(best.lambda, 0.0)));
  return std::sqrt(std::max(best.lambda, 0.0));
}

SymmetricEigen jacobi_eigen(const Matrix& s) {
  require_nonempty(s, "jacobi_eigen");
  require(s.rows() == s.cols(), "jacobi_eigen: square matrix required");
  const std::size_t n = s.rows();
  const double scale = max_norm(s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(s(i, j) - s(j, i)) > 1e-8 * (1.0 + scale))
        throw std::domain_error("jacobi_eigen: matrix not symmetric");

  Matrix a = s;
  // Enforce exact symmetry so rotations stay consistent.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  Matrix v = Matrix::identity(n);

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    off = std::sqrt(2.0 * off);
    if (off <= 1e-14 * (1.0 + scale) || off == 0.0) break;
    if (sweep == max_sweeps - 1)
      throw ConvergenceError("jacobi_eigen: sweep cap reached", off);

    for (std::size_t p = 0; p < n - 1; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {  // rotate rows/cols p,q of A
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {  // accumulate eigenvectors
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

Matrix pseudo_inverse(const Matrix& m, double rank_tol) {
  require(rank_tol > 0.0, "pseudo_inverse: rank_tol must be positive");
  if (m.empty()) return Matrix(m.cols(), m.rows());
  const Matrix mt = transpose(m);
  const Matrix gram = matmul(mt, m);  // cols x cols
  SymmetricEigen eig = jacobi_eigen(gram);
  const double smax = std::sqrt(std::max(eig.values.empty() ? 0.0 : eig.values[0], 0.0));
  if (smax == 0.0) return Matrix(m.cols(), m.rows());
  const double cut = rank_tol * smax;
  // M^+ = (sum over kept i of v_i v_i' / lambda_i) M'
  Matrix p(m.cols(), m.cols());
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    const double lam = std::max(eig.values[k], 0.0);
    const double sv = std::sqrt(lam);
    if (sv <= cut) continue;
    for (std::size_t i = 0; i < m.cols(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        p(i, j) += eig.vectors(i, k) * eig.vectors(j, k) / lam;
  }
  return matmul(p, mt);
}

Matrix sym_inverse(const Matrix& s, double rank_tol) {
  SymmetricEigen eig = jacobi_eigen(s);
  const double lmax = eig.values.empty() ? 0.0 : std::fabs(eig.values[0]);
  Matrix r(s.rows(), s.cols());
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    const double lam = eig.values[k];
    if (std::fabs(lam) <= rank_tol * std::max(lmax, 1e-300))
      throw std::domain_error("sym_inverse: matrix is singular");
    for (std::size_t i = 0; i < s.rows(); ++i)
      for (std::size_t j = 0; j < s.cols(); ++j)
        r(i, j) += eig.vectors(i, k) * eig.vectors(j, k) / lam;
  }
  return r;
}

Matrix sym_power(const Matrix& s, double expnt, double floor) {
  SymmetricEigen eig = jacobi_eigen(s);
  Matrix r(s.rows(), s.cols());
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    double lam = std::max(eig.values[k], floor);
    double f;
    if (lam == 0.0 && expnt > 0.0) {
      f = 0.0;
    } else {
      if (lam <= 0.0)
        throw std::domain_error("sym_power: nonpositive eigenvalue");
      f = std::pow(lam, expnt);
    }
    if (f == 0.0) continue;
    for (std::size_t i = 0; i < s.rows(); ++i)
      for (std::size_t j = 0; j < s.cols(); ++j)
        r(i, j) += f * eig.vectors(i, k) * eig.vectors(j, k);
  }
  return r;
}

Matrix sym_sqrt(const Matrix& s) {
  SymmetricEigen eig = jacobi_eigen(s);
  const double lmax = eig.values.empty() ? 0.0 : std::max(eig.values[0], 0.0);
  Matrix r(s.rows(), s.cols());
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    double lam = eig.values[k];
    if (lam < 0.0) {
      if (lam < -1e-8 * (1.0 + lmax))
        throw std::domain_error("sym_sqrt: matrix is not PSD");
      lam = 0.0;
    }
    const double f = std::sqrt(lam);
    if (f == 0.0) continue;
    for (std::size_t i = 0; i < s.rows(); ++i)
      for (std::size_t j = 0; j < s.cols(); ++j)
        r(i, j) += f * eig.vectors(i, k) * eig.vectors(j, k);
  }
  return r;
}

Matrix stationary_covariance(const Matrix& theta, const Matrix& Sigma, double tol) {
  require(theta.rows() == theta.cols(), "stationary_covariance: theta must be square");
  require(same_shape(theta, Sigma), "stationary_covariance: shape mismatch");
  require(tol > 0.0, "stationary_covariance: tol must be positive");
  const double scale = Sigma.empty() ? 0.0 : max_norm(Sigma);
  for (std::size_t i = 0; i < Sigma.rows(); ++i)
    for (std::size_t j = i + 1; j < Sigma.cols(); ++j)
      if (std::fabs(Sigma(i, j) - Sigma(j, i)) > 1e-8 * (1.0 + scale))
        throw std::domain_error("stationary_covariance: Sigma not symmetric");
  {
    SymmetricEigen eig = jacobi_eigen(Sigma);
    const double lmax = eig.values.empty() ? 0.0 : std::max(eig.values[0], 0.0);
    if (!eig.values.empty() && eig.values.back() < -1e-10 * (1.0 + lmax))
      throw std::domain_error("stationary_covariance: Sigma not PSD");
  }
  if (spectral_norm(theta, std::min(tol, 1e-10)) >= 1.0)
    throw InstabilityError("stationary_covariance: spectral norm of theta >= 1");

  const Matrix theta_t = transpose(theta);
  Matrix g = Sigma;
  double diff = 0.0;
  for (int it = 0; it < kIterationCap; ++it) {
    Matrix next = matmul(matmul(theta, g), theta_t) + Sigma;
    diff = max_norm(next - g);
    g = std::move(next);
    if (diff < tol) {
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = i + 1; j < g.cols(); ++j) {
          const double v = 0.5 * (g(i, j) + g(j, i));
          g(i, j) = v;
          g(j, i) = v;
        }
      return g;
    }
  }
  throw ConvergenceError("stationary_covariance: fixed point did not converge", diff);
}

Matrix cholesky_factor(const Matrix& s) {
  require(s.rows() == s.cols(), "cholesky_factor: square matrix required");
  const std::size_t n = s.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0) throw std::domain_error("cholesky_factor: matrix not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return l;
}

Matrix cholesky_solve(const Matrix& l, const Matrix& b) {
  require(l.rows() == l.cols(), "cholesky_solve: square factor required");
  require(l.rows() == b.rows(), "cholesky_solve: dimension mismatch");
  const std::size_t n = l.rows(), m = b.cols();
  Matrix x = b;
  for (std::size_t c = 0; c < m; ++c) {  // forward substitution L y = b
    for (std::size_t i = 0; i < n; ++i) {
      double v = x(i, c);
      for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * x(k, c);
      x(i, c) = v / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {  // back substitution L' x = y
      double v = x(ii, c);
      for (std::size_t k = ii + 1; k < n; ++k) v -= l(k, ii) * x(k, c);
      x(ii, c) = v / l(ii, ii);
    }
  }
  return x;
}

}  // namespace povar
