#include "povar/covariance.hpp"

#include <cmath>
#include <stdexcept>

namespace povar {

Matrix true_covariance(const TransitionMatrix& theta, const Matrix& Sigma, int h) {
  if (h < 0) throw std::domain_error("true_covariance: h must be >= 0");
  const Matrix gamma0 = stationary_covariance(theta.entries, Sigma, 1e-12);
  return matmul(matrix_power(theta.entries, static_cast<unsigned>(h)), gamma0);
}

Matrix scaling_matrix(double p, double a, double b, int h, int D) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("scaling_matrix: p out of (0,1]");
  if (h < 0) throw std::domain_error("scaling_matrix: h must be >= 0");
  if (D < 1) throw std::domain_error("scaling_matrix: D must be positive");
  const double off = p * p;
  // Unified closed form: at h=0 the correction term is p(1-p), giving p.
  const double diag = p * p + p * (1.0 - p) * std::pow(1.0 - a - b, h);
  Matrix s(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) s(i, j) = i == j ? diag : off;
  for (double v : s.data())
    if (v <= 0.0) throw std::domain_error("scaling_matrix: degenerate sampling (entry <= 0)");
  return s;
}

double min_scaling(double p, double b) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("min_scaling: p out of (0,1]");
  return p * std::min(p, 1.0 - b);
}

CovarianceEstimate estimate_covariance(const std::vector<Trajectory>& trajectories,
                                       int h, double omega2, const Matrix& scaling) {
  if (h < 0 || h > 2) throw std::domain_error("estimate_covariance: h must be in {0,1,2}");
  if (omega2 < 0.0) throw std::domain_error("estimate_covariance: omega2 negative");
  if (trajectories.empty())
    throw std::domain_error("estimate_covariance: no trajectories");
  const std::size_t D = trajectories.front().Y.cols();
  if (scaling.rows() != D || scaling.cols() != D)
    throw std::invalid_argument("estimate_covariance: scaling shape mismatch");
  for (double v : scaling.data())
    if (v <= 0.0) throw std::domain_error("estimate_covariance: degenerate scaling");

  Matrix num(D, D);
  long long samples = 0;
  // Fixed realization order keeps the pooled sums bit-deterministic.
  for (const Trajectory& tr : trajectories) {
    if (tr.Y.cols() != D || !same_shape(tr.Y, tr.Pi))
      throw std::invalid_argument("estimate_covariance: trajectory shape mismatch");
    const std::size_t T = tr.Y.rows();
    if (static_cast<std::size_t>(h) >= T)
      throw std::domain_error("estimate_covariance: h >= T for some trajectory");
    for (std::size_t t = 0; t + h < T; ++t) {
      for (std::size_t d1 = 0; d1 < D; ++d1) {
        const double lead = tr.Pi(t + h, d1) * tr.Y(t + h, d1);
        if (lead == 0.0) continue;
        for (std::size_t d2 = 0; d2 < D; ++d2)
          num(d1, d2) += lead * tr.Pi(t, d2) * tr.Y(t, d2);
      }
    }
    samples += static_cast<long long>(T) - h;
  }

  CovarianceEstimate est;
  est.h = h;
  est.scaling = scaling;
  est.samples_used = samples;
  est.gamma_hat = Matrix(D, D);
  for (std::size_t d1 = 0; d1 < D; ++d1)
    for (std::size_t d2 = 0; d2 < D; ++d2) {
      double v = num(d1, d2) / (static_cast<double>(samples) * scaling(d1, d2));
      if (h == 0 && d1 == d2) v -= omega2;
      est.gamma_hat(d1, d2) = v;
    }
  est.gamma_hat.check_finite("estimate_covariance");
  return est;
}

}  // namespace povar
