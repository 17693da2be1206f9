#pragma once
// Finite-sample bound quantities for the masked-covariance estimator and the
// small-instance covariance/KL verification machinery. Bound outputs carry an
// explicit note that every unknowable universal constant is set to 1, so only
// parameter dependencies (rates, ratios) are meaningful — never magnitudes.

#include <cstdint>
#include <string>

#include "povar/matrix.hpp"
#include "povar/model.hpp"

namespace povar {

// Stacked-process verification helpers refuse instances above this size.
inline constexpr std::size_t kVerifyMaxDim = 200;

struct BoundReport {
  double q_u = 0.0;
  double q_l = 0.0;
  double gamma_u = 0.0;
  double gamma_l = 0.0;
  double err_delta = 0.0;
  double upper_bound = 0.0;
  double lower_bound_threshold = 0.0;
  double delta = 0.0;

  // Ingredients, echoed for reporting.
  double sigma2_min = 0.0;
  double sigma2_max = 0.0;
  double theta_linf = 0.0;
  double theta_l2 = 0.0;    // measured spectral norm
  double vartheta = 0.0;    // certified spectral-norm bound

  // "T large enough" feasibility checks, evaluated with c = 1.
  bool t_ok_convergence1 = false;
  bool t_ok_convergence2 = false;
  bool t_ok_minimax1 = false;
  bool t_ok_minimax2 = false;

  std::string constants_note;
};

// Upper/lower bound ingredients for a given model at confidence delta.
// gamma_u uses the measured spectral norm of theta; err_delta and gamma_l use
// the certified bound vartheta carried by the transition matrix.
BoundReport bound_quantities(const TransitionMatrix& theta, const Matrix& Sigma,
                             double omega2, double p, double a, double b,
                             std::int64_t T, std::size_t D, std::size_t s,
                             double delta);

// Oracle regularization level lambda = (||theta||_inf + 1) * err(delta).
double theoretical_lambda(const BoundReport& report);

// Covariance of the stacked state vector (X_1,...,X_T), a TD x TD matrix with
// blocks Gamma_{t-s} below the diagonal and their transposes above.
Matrix x_covariance(const TransitionMatrix& theta, const Matrix& Sigma,
                    std::int64_t T);

// Residual R = Cov[X] - blockdiag_T(Sigma); its diagonal blocks equal
// theta Gamma_0 theta'.
Matrix residual_R(const TransitionMatrix& theta, const Matrix& Sigma,
                  std::int64_t T);

// Conditional covariance of the observed entries given the sampling mask
// (T x D, entries in {0,1}), in time-major order: omega2 I + Pi Cov[X] Pi'.
Matrix conditional_covariance(const TransitionMatrix& theta, const Matrix& Sigma,
                              double omega2, const Matrix& pi_mask);

// KL divergence between centered Gaussians N(0, Sigma0) and N(0, Sigma1).
double gaussian_kl(const Matrix& Sigma0, const Matrix& Sigma1);

struct KlCheck {
  double exact_kl = 0.0;
  double bound = 0.0;
  double delta_lambda_min = 0.0;  // smallest eigenvalue of the whitened residual
};

// Exact KL between the observation law at theta and at 0 (same mask), next to
// the quadratic upper bound ||Delta||_F^2 / (2 (1 + lambda_min(Delta))) with
// Delta = Q^{-1/2} (Pi R Pi') Q^{-1/2}.
KlCheck kl_bound_check(const TransitionMatrix& theta, const Matrix& Sigma,
                       double omega2, const Matrix& pi_mask);

// Exact Fisher information of T consecutive noisy observations of a scalar
// AR(1) process with coefficient theta, from the full T x T covariance and
// its analytic theta-derivative: 0.5 Tr[(C^{-1} dC)^2].
double fisher_info_1d(double theta, double sigma2, double omega2, std::int64_t T);

}  // namespace povar
