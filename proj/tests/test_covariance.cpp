#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "povar/covariance.hpp"
#include "povar/simulate.hpp"

using namespace povar;

namespace {

Trajectory manual_traj(std::vector<double> y) {
  std::size_t T = y.size();
  Trajectory t;
  t.X = Matrix(T, 1, y);
  t.Pi = Matrix(T, 1, std::vector<double>(T, 1.0));
  t.Y = Matrix(T, 1, std::move(y));
  return t;
}

ModelConfig chain_cfg(int D, int T, TransitionMatrix theta, double p, double a,
                      double b, double omega2, std::uint64_t seed) {
  ModelConfig cfg;
  cfg.D = D;
  cfg.T = T;
  cfg.theta = std::move(theta);
  cfg.Sigma = Matrix::identity(D);
  cfg.omega2 = omega2;
  cfg.p = p;
  cfg.a = a;
  cfg.b = b;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE("covariance") {

TEST_CASE("true covariance: lag zero, scalar lag one, recursion") {
  Rng tr(3);
  TransitionMatrix theta = gen_sparse_theta(3, 2, 0.5, tr);
  Matrix sigma = Matrix::identity(3);
  Matrix g0 = stationary_covariance(theta.entries, sigma);
  CHECK(oracle::max_abs(true_covariance(theta, sigma, 0) - g0) == 0.0);

  TransitionMatrix half = make_transition(Matrix(1, 1, {0.5}), 1, 0.6);
  Matrix g1 = true_covariance(half, Matrix::identity(1), 1);
  CHECK(g1(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));

  Matrix h1 = true_covariance(theta, sigma, 1);
  Matrix h2 = true_covariance(theta, sigma, 2);
  CHECK(oracle::max_abs(h2 - matmul(theta.entries, h1)) < 1e-10);

  CHECK_THROWS_AS(true_covariance(theta, sigma, -1), std::domain_error);
}

TEST_CASE("scaling matrix closed form") {
  Matrix s0 = scaling_matrix(0.6, 0.3, 0.2, 0, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(s0(i, j) == doctest::Approx(i == j ? 0.6 : 0.36).epsilon(1e-14));

  // independent sampling collapses the lag correction
  Matrix s1 = scaling_matrix(0.5, 0.5, 0.5, 1, 2);
  for (double v : s1.data()) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));

  Matrix sticky = scaling_matrix(0.5, 0.25, 0.25, 1, 2);
  CHECK(sticky(0, 0) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(sticky(1, 1) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(sticky(0, 1) == doctest::Approx(0.25).epsilon(1e-14));

  Matrix lag2 = scaling_matrix(0.5, 0.25, 0.25, 2, 2);
  CHECK(lag2(0, 0) == doctest::Approx(0.25 + 0.25 * 0.25).epsilon(1e-14));

  CHECK_THROWS_AS(scaling_matrix(0.0, 0.5, 0.5, 0, 2), std::domain_error);
  CHECK_THROWS_AS(scaling_matrix(1.1, 0.5, 0.5, 0, 2), std::domain_error);
}

TEST_CASE("min_scaling and the entry-range invariant") {
  CHECK(min_scaling(0.5, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(min_scaling(0.5, 0.8) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(min_scaling(1.0, 0.3) == doctest::Approx(0.7).epsilon(1e-14));

  for (double p : {0.2, 0.4, 0.6, 0.8, 0.95}) {
    for (double b : {0.05, 0.2, 0.5, 0.8, 0.95}) {
      double a = p * b / (1.0 - p);  // stationary at p
      if (a > 1.0) continue;
      double qu = std::min(p, 1.0 - b);
      double lo = 1e300, hi = -1e300;
      for (int h : {0, 1}) {
        Matrix s = scaling_matrix(p, a, b, h, 3);
        for (double v : s.data()) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      CHECK(std::fabs(lo - min_scaling(p, b)) < 1e-12);
      CHECK(lo >= p * qu - 1e-12);
      CHECK(hi <= p + 1e-12);
      // lag 2 entries stay inside the same envelope
      Matrix s2 = scaling_matrix(p, a, b, 2, 3);
      for (double v : s2.data()) {
        CHECK(v >= p * qu - 1e-12);
        CHECK(v <= p + 1e-12);
      }
    }
  }
}

TEST_CASE("full-mask noiseless estimate is the plain empirical covariance") {
  Rng tr(7);
  ModelConfig cfg = chain_cfg(3, 800, gen_sparse_theta(3, 3, 0.5, tr), 1.0, 1.0,
                              0.0, 0.0, 11);
  std::vector<Trajectory> trajs = simulate(cfg);
  Matrix scaling = scaling_matrix(1.0, 1.0, 0.0, 0, 3);
  CovarianceEstimate est = estimate_covariance(trajs, 0, 0.0, scaling);
  CHECK(est.h == 0);
  CHECK(est.samples_used == 800);
  CHECK(oracle::max_abs(est.gamma_hat - oracle::emp_cov_lag(trajs[0].X, 0)) < 1e-12);
}

TEST_CASE("single-term sums and the omega correction") {
  std::vector<Trajectory> one = {manual_traj({2.0})};
  Matrix ones1 = scaling_matrix(1.0, 1.0, 0.0, 0, 1);
  CHECK(estimate_covariance(one, 0, 0.0, ones1).gamma_hat(0, 0) ==
        doctest::Approx(4.0).epsilon(1e-15));
  CHECK(estimate_covariance(one, 0, 0.5, ones1).gamma_hat(0, 0) ==
        doctest::Approx(3.5).epsilon(1e-15));

  // no omega correction at lag >= 1
  std::vector<Trajectory> two = {manual_traj({2.0, 3.0})};
  CHECK(estimate_covariance(two, 1, 0.0, ones1).gamma_hat(0, 0) ==
        doctest::Approx(6.0).epsilon(1e-15));
  CHECK(estimate_covariance(two, 1, 0.7, ones1).gamma_hat(0, 0) ==
        doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("pooling sums numerators and sample counts across realizations") {
  std::vector<Trajectory> pool = {manual_traj({1.0, 2.0}), manual_traj({1.0, 1.0, 3.0})};
  Matrix ones1 = scaling_matrix(1.0, 1.0, 0.0, 0, 1);
  CovarianceEstimate est = estimate_covariance(pool, 0, 0.0, ones1);
  CHECK(est.samples_used == 5);
  CHECK(est.gamma_hat(0, 0) == doctest::Approx(16.0 / 5.0).epsilon(1e-15));
}

TEST_CASE("estimate is invariant to permuting the trajectory pool") {
  Rng tr(13);
  ModelConfig cfg = chain_cfg(2, 300, gen_sparse_theta(2, 2, 0.5, tr), 0.7, 0.21,
                              0.09, 0.04, 29);
  cfg.N = 4;
  std::vector<Trajectory> trajs = simulate(cfg);
  Matrix scaling = scaling_matrix(cfg.p, cfg.a, cfg.b, 1, 2);
  Matrix base = estimate_covariance(trajs, 1, cfg.omega2, scaling).gamma_hat;
  std::vector<Trajectory> shuffled = {trajs[3], trajs[1], trajs[0], trajs[2]};
  Matrix perm = estimate_covariance(shuffled, 1, cfg.omega2, scaling).gamma_hat;
  CHECK(oracle::max_abs(base - perm) < 1e-12);
}

TEST_CASE("input validation") {
  std::vector<Trajectory> one = {manual_traj({1.0, 2.0})};
  Matrix ones1 = scaling_matrix(1.0, 1.0, 0.0, 0, 1);
  CHECK_THROWS_AS(estimate_covariance(one, 2, 0.0, ones1), std::domain_error);
  CHECK_THROWS_AS(estimate_covariance(one, 3, 0.0, ones1), std::domain_error);
  CHECK_THROWS_AS(estimate_covariance(one, 0, -1.0, ones1), std::domain_error);
  CHECK_THROWS_AS(estimate_covariance({}, 0, 0.0, ones1), std::domain_error);
  Matrix degenerate(1, 1);  // zero entry
  CHECK_THROWS_AS(estimate_covariance(one, 0, 0.0, degenerate), std::domain_error);
  Matrix wrong = Matrix::identity(2);
  CHECK_THROWS_AS(estimate_covariance(one, 0, 0.0, wrong), std::invalid_argument);
}

TEST_CASE("masked estimator is unbiased under Markov sampling") {
  Rng tr(17);
  TransitionMatrix theta = gen_sparse_theta(2, 2, 0.5, tr);
  Matrix sigma = Matrix::identity(2);
  Matrix g0 = stationary_covariance(theta.entries, sigma);
  Matrix g1 = matmul(theta.entries, g0);

  const int reps = 500, T = 300;
  Matrix s0 = scaling_matrix(0.7, 0.21, 0.09, 0, 2);
  Matrix s1 = scaling_matrix(0.7, 0.21, 0.09, 1, 2);
  std::vector<std::vector<double>> e0(4), e1(4);
  for (int r = 0; r < reps; ++r) {
    ModelConfig cfg = chain_cfg(2, T, theta, 0.7, 0.21, 0.09, 0.09, 1000 + r);
    std::vector<Trajectory> trajs = simulate(cfg);
    Matrix h0 = estimate_covariance(trajs, 0, cfg.omega2, s0).gamma_hat;
    Matrix h1 = estimate_covariance(trajs, 1, cfg.omega2, s1).gamma_hat;
    for (int k = 0; k < 4; ++k) {
      e0[k].push_back(h0.data()[k]);
      e1[k].push_back(h1.data()[k]);
    }
  }
  for (int k = 0; k < 4; ++k) {
    double se0 = std::sqrt(oracle::variance(e0[k]) / reps);
    double se1 = std::sqrt(oracle::variance(e1[k]) / reps);
    CHECK(std::fabs(oracle::mean(e0[k]) - g0.data()[k]) < 3 * se0);
    CHECK(std::fabs(oracle::mean(e1[k]) - g1.data()[k]) < 3 * se1);
  }
}

TEST_CASE("max-norm error shrinks like 1/sqrt(T)") {
  Rng tr(19);
  TransitionMatrix theta = gen_sparse_theta(2, 2, 0.5, tr);
  Matrix sigma = Matrix::identity(2);
  Matrix g0 = stationary_covariance(theta.entries, sigma);
  Matrix ones = scaling_matrix(1.0, 1.0, 0.0, 0, 2);

  std::vector<double> ratios;
  for (int r = 0; r < 120; ++r) {
    double err[2];
    int Ts[2] = {400, 1600};
    for (int k = 0; k < 2; ++k) {
      ModelConfig cfg = chain_cfg(2, Ts[k], theta, 1.0, 1.0, 0.0, 0.0, 5000 + 2 * r + k);
      std::vector<Trajectory> trajs = simulate(cfg);
      err[k] = oracle::max_abs(estimate_covariance(trajs, 0, 0.0, ones).gamma_hat - g0);
    }
    ratios.push_back(err[1] / err[0]);
  }
  double med = oracle::median(ratios);
  CHECK(med > 0.4);
  CHECK(med < 0.6);
}

}  // TEST_SUITE
