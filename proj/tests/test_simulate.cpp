#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "povar/covariance.hpp"
#include "povar/simulate.hpp"

using namespace povar;

namespace {

ModelConfig small_cfg(int D, int T, TransitionMatrix theta, std::uint64_t seed) {
  ModelConfig cfg;
  cfg.D = D;
  cfg.T = T;
  cfg.theta = std::move(theta);
  cfg.Sigma = Matrix::identity(D);
  cfg.omega2 = 0.01;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("identical config and seed give bit-identical trajectories") {
  Rng tr(5);
  ModelConfig cfg = small_cfg(3, 500, gen_sparse_theta(3, 2, 0.5, tr), 99);
  cfg.N = 3;
  cfg.p = 0.7;
  cfg.a = 0.35;
  cfg.b = 0.15;
  std::vector<Trajectory> first = simulate(cfg);
  std::vector<Trajectory> second = simulate(cfg);
  REQUIRE(first.size() == 3);
  for (int r = 0; r < 3; ++r) {
    CHECK(first[r].X.data() == second[r].X.data());
    CHECK(first[r].Pi.data() == second[r].Pi.data());
    CHECK(first[r].Y.data() == second[r].Y.data());
  }
  // realization seeds are derived, not consecutive master seeds
  for (int r = 0; r < 3; ++r) {
    Trajectory solo = simulate_one(cfg, derive_seed(cfg.seed, r));
    CHECK(solo.X.data() == first[r].X.data());
    CHECK(solo.Y.data() == first[r].Y.data());
  }
  CHECK(first[0].X.data() != first[1].X.data());
}

TEST_CASE("theta = 0 degenerates to i.i.d. standard normal rows") {
  ModelConfig cfg = small_cfg(3, 20000, make_transition(Matrix(3, 3), 3, 0.5), 31);
  Rng rng(derive_seed(cfg.seed, 0));
  Matrix x = simulate_states(cfg, rng);
  Matrix emp = oracle::emp_cov_lag(x, 0);
  CHECK(oracle::max_abs(emp - Matrix::identity(3)) < 0.05);
  Matrix lag1 = oracle::emp_cov_lag(x, 1);
  CHECK(oracle::max_abs(lag1) < 0.05);
}

TEST_CASE("scalar AR recursion reaches the stationary variance") {
  TransitionMatrix t = make_transition(Matrix(1, 1, {0.9}), 1, 0.95);
  ModelConfig cfg = small_cfg(1, 100000, t, 17);
  Rng rng(derive_seed(cfg.seed, 0));
  Matrix x = simulate_states(cfg, rng);
  std::vector<double> sq(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) sq[i] = x(i, 0) * x(i, 0);
  double want = 1.0 / (1.0 - 0.81);  // ~5.263
  double se = oracle::batch_se(sq, 100);
  CHECK(std::fabs(oracle::mean(sq) - want) < 3 * se);
}

TEST_CASE("lag-1 empirical covariance matches theta * Gamma_0") {
  Rng tr(8);
  TransitionMatrix theta = gen_sparse_theta(2, 2, 0.6, tr);
  ModelConfig cfg = small_cfg(2, 100000, theta, 23);
  Rng rng(derive_seed(cfg.seed, 0));
  Matrix x = simulate_states(cfg, rng);

  Matrix g0 = stationary_covariance(theta.entries, cfg.Sigma);
  CHECK(oracle::max_abs(oracle::emp_cov_lag(x, 0) - g0) < 0.06);
  CHECK(oracle::max_abs(oracle::emp_cov_lag(x, 1) - matmul(theta.entries, g0)) < 0.06);
}

TEST_CASE("sampling: p = 1 is the all-ones mask") {
  ModelConfig cfg = small_cfg(2, 200, make_transition(Matrix(2, 2), 2, 0.5), 3);
  Rng rng(derive_seed(cfg.seed, 1));
  Matrix pi = simulate_sampling(cfg, rng);
  for (double v : pi.data()) CHECK(v == 1.0);
}

TEST_CASE("sampling: a = 1-b = p is i.i.d. Bernoulli(p)") {
  ModelConfig cfg = small_cfg(2, 100000, make_transition(Matrix(2, 2), 2, 0.5), 41);
  cfg.p = 0.5;
  cfg.a = 0.5;
  cfg.b = 0.5;
  Rng rng(derive_seed(cfg.seed, 1));
  Matrix pi = simulate_sampling(cfg, rng);
  for (double v : pi.data()) REQUIRE((v == 0.0 || v == 1.0));

  std::size_t T = pi.rows();
  for (std::size_t d = 0; d < 2; ++d) {
    double m = 0.0, prod = 0.0;
    for (std::size_t t = 0; t < T; ++t) m += pi(t, d);
    for (std::size_t t = 0; t + 1 < T; ++t) prod += pi(t + 1, d) * pi(t, d);
    m /= double(T);
    prod /= double(T - 1);
    CHECK(std::fabs(m - 0.5) < 3 * std::sqrt(0.25 / T));
    double p2 = 0.25;  // independent product moment
    CHECK(std::fabs(prod - p2) < 3 * std::sqrt(p2 * (1 - p2) / T));
  }
}

TEST_CASE("sampling: sticky chain lag-1 product moment") {
  // a = b = 0.25 at p = 0.5: E[pi_{t+1} pi_t] = p^2 + p(1-p)(1-a-b) = 0.375
  ModelConfig cfg = small_cfg(1, 100000, make_transition(Matrix(1, 1), 1, 0.5), 53);
  cfg.p = 0.5;
  cfg.a = 0.25;
  cfg.b = 0.25;
  Rng rng(derive_seed(cfg.seed, 1));
  Matrix pi = simulate_sampling(cfg, rng);
  std::vector<double> prods(pi.rows() - 1);
  for (std::size_t t = 0; t + 1 < pi.rows(); ++t) prods[t] = pi(t + 1, 0) * pi(t, 0);
  CHECK(std::fabs(oracle::mean(prods) - 0.375) < 3 * oracle::batch_se(prods, 100));

  // marginal rate under correlation, batch-means error bar
  std::vector<double> marg(pi.rows());
  for (std::size_t t = 0; t < pi.rows(); ++t) marg[t] = pi(t, 0);
  CHECK(std::fabs(oracle::mean(marg) - 0.5) < 3 * oracle::batch_se(marg, 100));
}

TEST_CASE("observe: exactness at omega = 0 and full/empty masks") {
  Rng tr(9);
  ModelConfig cfg = small_cfg(2, 300, gen_sparse_theta(2, 1, 0.5, tr), 61);
  Rng rng(derive_seed(cfg.seed, 0));
  Matrix x = simulate_states(cfg, rng);

  Matrix ones(300, 2);
  for (double& v : ones.data()) v = 1.0;
  Rng nrng(7);
  Matrix y = observe(x, ones, 0.0, nrng);
  CHECK(y.data() == x.data());

  Matrix zeros(300, 2);
  Matrix y0 = observe(x, zeros, 0.25, nrng);
  for (double v : y0.data()) CHECK(v == 0.0);

  CHECK_THROWS_AS(observe(x, ones, -0.01, nrng), std::domain_error);
}

TEST_CASE("observe adds variance omega^2 on observed entries") {
  Matrix x(50000, 2);  // zero states isolate the noise
  Matrix ones(50000, 2);
  for (double& v : ones.data()) v = 1.0;
  Rng rng(71);
  Matrix y = observe(x, ones, 0.01, rng);
  std::vector<double> sq;
  sq.reserve(100000);
  for (double v : y.data()) sq.push_back(v * v);
  double se = std::sqrt(2.0) * 0.01 / std::sqrt(double(sq.size()));
  CHECK(std::fabs(oracle::mean(sq) - 0.01) < 3 * se);
}

TEST_CASE("trajectories keep Y zero wherever the mask is zero") {
  Rng tr(12);
  ModelConfig cfg = small_cfg(2, 5000, gen_sparse_theta(2, 2, 0.5, tr), 83);
  cfg.p = 0.6;
  cfg.a = 0.3;
  cfg.b = 0.2;
  Trajectory traj = simulate_one(cfg, derive_seed(cfg.seed, 0));
  std::size_t masked = 0, seen = 0;
  for (std::size_t t = 0; t < traj.Pi.rows(); ++t)
    for (std::size_t d = 0; d < traj.Pi.cols(); ++d) {
      REQUIRE((traj.Pi(t, d) == 0.0 || traj.Pi(t, d) == 1.0));
      if (traj.Pi(t, d) == 0.0) {
        CHECK(traj.Y(t, d) == 0.0);
        ++masked;
      } else {
        ++seen;
      }
    }
  CHECK(masked > 0);
  CHECK(seen > 0);
}

TEST_CASE("simulate validates its config") {
  ModelConfig cfg = small_cfg(2, 100, make_transition(Matrix(2, 2), 2, 0.5), 1);
  cfg.p = 0.6;  // a = 1, b = 0 contradicts p
  CHECK_THROWS_AS(simulate(cfg), std::domain_error);
}

}  // TEST_SUITE
