#include "povar/theory.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace povar {

namespace {

void require_valid_theta(const TransitionMatrix& theta) {
  auto problems = check_transition(theta.entries, theta.sparsity, theta.vartheta);
  if (!problems.empty()) throw std::domain_error("invalid transition matrix: " + problems.front());
}

void require_sigma_shape(const Matrix& Sigma, std::size_t d) {
  if (Sigma.rows() != d || Sigma.cols() != d)
    throw std::invalid_argument("Sigma shape does not match theta");
}

std::size_t checked_stack_dim(std::int64_t T, std::size_t d) {
  if (T < 1) throw std::domain_error("T must be positive");
  std::size_t td = static_cast<std::size_t>(T) * d;
  if (td > kVerifyMaxDim)
    throw std::length_error("stacked dimension T*D exceeds the verification cap");
  return td;
}

// Sampled (t,d) indices of a {0,1} mask in time-major order.
std::vector<std::size_t> mask_indices(const Matrix& pi_mask, std::size_t d) {
  if (pi_mask.cols() != d) throw std::invalid_argument("mask width does not match theta");
  std::vector<std::size_t> idx;
  for (std::size_t t = 0; t < pi_mask.rows(); ++t)
    for (std::size_t j = 0; j < d; ++j) {
      double e = pi_mask(t, j);
      if (e != 0.0 && e != 1.0)
        throw std::invalid_argument("mask entries must be 0 or 1");
      if (e == 1.0) idx.push_back(t * d + j);
    }
  if (idx.empty()) throw std::domain_error("empty projection: no sampled entries");
  return idx;
}

}  // namespace

BoundReport bound_quantities(const TransitionMatrix& theta, const Matrix& Sigma,
                             double omega2, double p, double a, double b,
                             std::int64_t T, std::size_t D, std::size_t s,
                             double delta) {
  require_valid_theta(theta);
  if (D != theta.dim()) throw std::invalid_argument("D does not match theta");
  require_sigma_shape(Sigma, D);
  if (s < 1 || s > D) throw std::domain_error("s out of range");
  if (T < 1) throw std::domain_error("T must be positive");
  if (!(omega2 >= 0.0)) throw std::domain_error("omega2 must be nonnegative");
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("p out of (0, 1]");
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
    throw std::domain_error("a, b out of [0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta out of (0, 1)");

  SymmetricEigen sig = jacobi_eigen(Sigma);
  double s2max = sig.values.front();
  double s2min = sig.values.back();
  if (!(s2min >= -1e-12 * std::max(1.0, s2max)) || !(s2max > 0.0))
    throw std::domain_error("Sigma must be positive semidefinite and nonzero");
  s2min = std::max(s2min, 0.0);

  BoundReport rep;
  rep.delta = delta;
  rep.sigma2_min = s2min;
  rep.sigma2_max = s2max;
  rep.theta_linf = op_norm_inf(theta.entries);
  rep.theta_l2 = spectral_norm(theta.entries);
  rep.vartheta = theta.vartheta;

  rep.q_u = std::min(p, 1.0 - b);
  rep.q_l = std::max(1.0 - b, 2.0 * p - (1.0 - b));
  if (!(rep.q_u > 0.0)) throw std::domain_error("degenerate sampling: q_u <= 0");

  Matrix gamma0 = stationary_covariance(theta.entries, Sigma);
  double g0inv_l1 = op_norm_1(sym_inverse(gamma0));  // throws if singular

  double vt = rep.vartheta;
  rep.gamma_u = (rep.theta_linf + 1.0) / ((1.0 - rep.theta_l2) * (1.0 - rep.theta_l2)) *
                (s2max + omega2) * g0inv_l1;
  rep.gamma_l = std::pow(1.0 - vt, 1.5) * (s2min + omega2) / s2max;

  double log_term = std::sqrt(std::log(static_cast<double>(D) / delta));
  double tpqu = std::sqrt(static_cast<double>(T) * p * rep.q_u);
  rep.err_delta = (s2max + omega2) / ((1.0 - vt) * (1.0 - vt)) * log_term / tpqu;
  rep.upper_bound = rep.gamma_u * static_cast<double>(s) * log_term / tpqu;
  rep.lower_bound_threshold =
      rep.gamma_l * static_cast<double>(s) / std::sqrt(static_cast<double>(T) * p * rep.q_l);

  // Feasibility of the "T large enough" assumptions, all with c = 1.
  double log1d = std::sqrt(std::log(1.0 / delta));
  rep.t_ok_convergence1 = log1d / tpqu <= 1.0;
  rep.t_ok_convergence2 =
      log1d * std::max(1.0, 1.0 / (s2max + omega2)) / ((1.0 - vt) * (1.0 - vt) * tpqu) <= 1.0;
  double minimax_lhs = rep.gamma_l * static_cast<double>(s) /
                       std::sqrt(static_cast<double>(T) * p * rep.q_l);
  rep.t_ok_minimax1 = rep.gamma_l * static_cast<double>(s) /
                          (std::sqrt(p) * rep.q_l * std::sqrt(static_cast<double>(T))) <=
                      1.0;
  rep.t_ok_minimax2 = minimax_lhs <= std::min(vt, rep.gamma_l * std::sqrt(1.0 - vt));

  rep.constants_note =
      "universal constants set to c = 1; bound values indicate rates, not calibrated magnitudes";
  return rep;
}

double theoretical_lambda(const BoundReport& report) {
  return (report.theta_linf + 1.0) * report.err_delta;
}

Matrix x_covariance(const TransitionMatrix& theta, const Matrix& Sigma, std::int64_t T) {
  require_valid_theta(theta);
  const std::size_t d = theta.dim();
  require_sigma_shape(Sigma, d);
  std::size_t td = checked_stack_dim(T, d);

  Matrix gamma0 = stationary_covariance(theta.entries, Sigma);
  std::vector<Matrix> lag(static_cast<std::size_t>(T));
  lag[0] = gamma0;
  for (std::size_t h = 1; h < lag.size(); ++h) lag[h] = matmul(theta.entries, lag[h - 1]);

  Matrix cov(td, td);
  for (std::int64_t t = 0; t < T; ++t)
    for (std::int64_t u = 0; u < T; ++u) {
      const Matrix& block = lag[static_cast<std::size_t>(std::llabs(t - u))];
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          cov(static_cast<std::size_t>(t) * d + i, static_cast<std::size_t>(u) * d + j) =
              t >= u ? block(i, j) : block(j, i);
    }
  return cov;
}

Matrix residual_R(const TransitionMatrix& theta, const Matrix& Sigma, std::int64_t T) {
  require_valid_theta(theta);
  const std::size_t d = theta.dim();
  require_sigma_shape(Sigma, d);
  std::size_t td = checked_stack_dim(T, d);

  Matrix gamma0 = stationary_covariance(theta.entries, Sigma);
  Matrix diag_block = matmul(matmul(theta.entries, gamma0), transpose(theta.entries));
  std::vector<Matrix> lag(static_cast<std::size_t>(T));
  lag[0] = diag_block;
  Matrix running = gamma0;
  for (std::size_t h = 1; h < lag.size(); ++h) {
    running = matmul(theta.entries, running);  // theta^h Gamma_0
    lag[h] = running;
  }

  Matrix r(td, td);
  for (std::int64_t t = 0; t < T; ++t)
    for (std::int64_t u = 0; u < T; ++u) {
      const Matrix& block = lag[static_cast<std::size_t>(std::llabs(t - u))];
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          r(static_cast<std::size_t>(t) * d + i, static_cast<std::size_t>(u) * d + j) =
              t >= u ? block(i, j) : block(j, i);
    }
  return r;
}

Matrix conditional_covariance(const TransitionMatrix& theta, const Matrix& Sigma,
                              double omega2, const Matrix& pi_mask) {
  if (!(omega2 >= 0.0)) throw std::domain_error("omega2 must be nonnegative");
  const std::size_t d = theta.dim();
  std::vector<std::size_t> idx = mask_indices(pi_mask, d);
  Matrix cov = x_covariance(theta, Sigma, static_cast<std::int64_t>(pi_mask.rows()));

  Matrix c(idx.size(), idx.size());
  for (std::size_t u = 0; u < idx.size(); ++u)
    for (std::size_t v = 0; v < idx.size(); ++v)
      c(u, v) = cov(idx[u], idx[v]) + (u == v ? omega2 : 0.0);
  return c;
}

double gaussian_kl(const Matrix& Sigma0, const Matrix& Sigma1) {
  if (Sigma0.rows() != Sigma0.cols() || Sigma1.rows() != Sigma1.cols() ||
      Sigma0.rows() != Sigma1.rows())
    throw std::invalid_argument("covariance shapes must match");
  const std::size_t n = Sigma0.rows();

  SymmetricEigen e0 = jacobi_eigen(Sigma0);
  SymmetricEigen e1 = jacobi_eigen(Sigma1);
  double logdet0 = 0.0, logdet1 = 0.0;
  for (double lam : e0.values) {
    if (!(lam > 0.0)) throw std::domain_error("Sigma0 not positive definite");
    logdet0 += std::log(lam);
  }
  for (double lam : e1.values) {
    if (!(lam > 0.0)) throw std::domain_error("Sigma1 not positive definite");
    logdet1 += std::log(lam);
  }

  Matrix s1_inv(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    double w = 1.0 / e1.values[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        s1_inv(i, j) += w * e1.vectors(i, k) * e1.vectors(j, k);
  }
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) trace += Sigma0(i, j) * s1_inv(j, i);

  return 0.5 * (trace - static_cast<double>(n) + logdet1 - logdet0);
}

KlCheck kl_bound_check(const TransitionMatrix& theta, const Matrix& Sigma,
                       double omega2, const Matrix& pi_mask) {
  if (!(omega2 >= 0.0)) throw std::domain_error("omega2 must be nonnegative");
  const std::size_t d = theta.dim();
  std::vector<std::size_t> idx = mask_indices(pi_mask, d);
  const std::int64_t T = static_cast<std::int64_t>(pi_mask.rows());

  Matrix r_full = residual_R(theta, Sigma, T);
  const std::size_t m = idx.size();
  Matrix r_sel(m, m), q(m, m);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = 0; v < m; ++v) {
      r_sel(u, v) = r_full(idx[u], idx[v]);
      std::size_t tu = idx[u] / d, tv = idx[v] / d;
      q(u, v) = (tu == tv ? Sigma(idx[u] % d, idx[v] % d) : 0.0) + (u == v ? omega2 : 0.0);
    }

  Matrix c_theta = q + r_sel;
  Matrix q_m12 = sym_power(q, -0.5, omega2);
  Matrix delta = matmul(matmul(q_m12, r_sel), q_m12);
  delta = 0.5 * (delta + transpose(delta));

  SymmetricEigen de = jacobi_eigen(delta);
  double lam_min = de.values.back();
  if (!(lam_min > -1.0))
    throw std::domain_error("whitened residual has an eigenvalue at or below -1");

  KlCheck out;
  double fro = frobenius_norm(delta);
  out.bound = fro * fro / (2.0 * (1.0 + lam_min));
  out.exact_kl = gaussian_kl(c_theta, q);
  out.delta_lambda_min = lam_min;
  return out;
}

double fisher_info_1d(double theta, double sigma2, double omega2, std::int64_t T) {
  if (!(std::fabs(theta) < 1.0))
    throw InstabilityError("theta outside the stationarity region");
  if (!(sigma2 > 0.0)) throw std::domain_error("sigma2 must be positive");
  if (!(omega2 >= 0.0)) throw std::domain_error("omega2 must be nonnegative");
  if (T < 1) throw std::domain_error("T must be positive");
  if (T > 500) throw std::length_error("T exceeds the verification cap");

  const std::size_t n = static_cast<std::size_t>(T);
  std::vector<double> powt(n + 1);
  powt[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) powt[k] = powt[k - 1] * theta;

  double one_m = 1.0 - theta * theta;
  Matrix c(n, n), cp(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t k = i >= j ? i - j : j - i;
      c(i, j) = sigma2 * powt[k] / one_m + (i == j ? omega2 : 0.0);
      double num = (k == 0 ? 0.0 : static_cast<double>(k) * powt[k - 1] * one_m) +
                   2.0 * powt[k + 1];
      cp(i, j) = sigma2 * num / (one_m * one_m);
    }

  Matrix l;
  try {
    l = cholesky_factor(c);
  } catch (const std::domain_error&) {
    throw InstabilityError("observation covariance is numerically singular");
  }
  Matrix x = cholesky_solve(l, cp);

  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) acc += x(i, j) * x(j, i);
  return 0.5 * acc;
}

}  // namespace povar
