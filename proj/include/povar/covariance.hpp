#pragma once
// Lagged covariances: the true Gamma_h = theta^h Gamma_0 recursion, the
// sampling-chain scaling matrix S(h), and the unbiased masked covariance
// estimator
//   Gamma_hat_h = (1/S(h)) .* (1/sum(T_r - h)) * sum_{r,t} (Pi Y)_{t+h} (Pi Y)_t'
//                 - 1{h=0} omega^2 I.

#include <cstdint>
#include <vector>

#include "povar/matrix.hpp"
#include "povar/model.hpp"
#include "povar/simulate.hpp"

namespace povar {

struct CovarianceEstimate {
  int h = 0;
  Matrix gamma_hat;
  Matrix scaling;           // the S(h) used
  long long samples_used = 0;  // sum over realizations of (T_r - h)
};

// theta^h * Gamma_0 with Gamma_0 from stationary_covariance.
Matrix true_covariance(const TransitionMatrix& theta, const Matrix& Sigma, int h);

// D x D matrix of E[pi_{t+h,d1} pi_{t,d2}] for the stationary chain:
// off-diagonal p^2; diagonal p^2 + p(1-p)(1-a-b)^h (which is p at h=0).
Matrix scaling_matrix(double p, double a, double b, int h, int D);

// Smallest S(h) entry over all lags and positions: p * min{p, 1-b}.
double min_scaling(double p, double b);

// Pooled estimator over the trajectory list. The omega^2 diagonal correction
// applies only at h = 0; lags are restricted to {0,1,2} at this API level.
CovarianceEstimate estimate_covariance(const std::vector<Trajectory>& trajectories,
                                       int h, double omega2, const Matrix& scaling);

}  // namespace povar
