#include "povar/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace povar {

namespace {

void require_valid(const ModelConfig& cfg) {
  auto bad = validate_config(cfg);
  if (!bad.empty()) {
    std::string msg = "invalid config:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw std::domain_error(msg);
  }
}

}  // namespace

Matrix simulate_states(const ModelConfig& cfg, Rng& rng) {
  require_valid(cfg);
  const std::size_t T = static_cast<std::size_t>(cfg.T);
  const std::size_t D = static_cast<std::size_t>(cfg.D);
  const Matrix gamma0 = stationary_covariance(cfg.theta.entries, cfg.Sigma, 1e-12);
  const Matrix root_gamma0 = sym_sqrt(gamma0);
  const Matrix root_sigma = sym_sqrt(cfg.Sigma);

  Matrix x(T, D);
  std::vector<double> g(D), prev(D), cur(D);
  for (std::size_t d = 0; d < D; ++d) g[d] = rng.normal();
  prev = matvec(root_gamma0, g);
  for (std::size_t d = 0; d < D; ++d) x(0, d) = prev[d];

  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t d = 0; d < D; ++d) g[d] = rng.normal();
    const std::vector<double> eps = matvec(root_sigma, g);
    cur = matvec(cfg.theta.entries, prev);
    for (std::size_t d = 0; d < D; ++d) {
      cur[d] += eps[d];
      x(t, d) = cur[d];
    }
    prev.swap(cur);
  }
  x.check_finite("simulate_states");
  return x;
}

Matrix simulate_sampling(const ModelConfig& cfg, Rng& rng) {
  require_valid(cfg);
  const std::size_t T = static_cast<std::size_t>(cfg.T);
  const std::size_t D = static_cast<std::size_t>(cfg.D);
  Matrix pi(T, D);
  // Row-major sweep; chains are independent across dimensions, so consuming
  // one uniform per (t,d) keeps the stream layout simple and pinned.
  for (std::size_t d = 0; d < D; ++d) pi(0, d) = rng.bernoulli(cfg.p) ? 1.0 : 0.0;
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t d = 0; d < D; ++d) {
      const bool on = pi(t - 1, d) == 1.0;
      const double u = rng.uniform();
      const bool next = on ? !(u < cfg.b) : (u < cfg.a);
      pi(t, d) = next ? 1.0 : 0.0;
    }
  }
  return pi;
}

Matrix observe(const Matrix& x, const Matrix& pi, double omega2, Rng& rng) {
  if (!same_shape(x, pi)) throw std::invalid_argument("observe: shape mismatch");
  if (omega2 < 0.0) throw std::domain_error("observe: omega2 negative");
  const double omega = std::sqrt(omega2);
  Matrix y(x.rows(), x.cols());
  for (std::size_t t = 0; t < x.rows(); ++t) {
    for (std::size_t d = 0; d < x.cols(); ++d) {
      const double ind = pi(t, d);
      if (ind != 0.0 && ind != 1.0)
        throw std::domain_error("observe: Pi entries must be 0 or 1");
      if (ind == 1.0)
        y(t, d) = x(t, d) + (omega2 > 0.0 ? omega * rng.normal() : 0.0);
    }
  }
  return y;
}

Trajectory simulate_one(const ModelConfig& cfg, std::uint64_t realization_seed) {
  Rng rng_states(derive_seed(realization_seed, 0));
  Rng rng_sampling(derive_seed(realization_seed, 1));
  Rng rng_noise(derive_seed(realization_seed, 2));
  Trajectory tr;
  tr.X = simulate_states(cfg, rng_states);
  tr.Pi = simulate_sampling(cfg, rng_sampling);
  tr.Y = observe(tr.X, tr.Pi, cfg.omega2, rng_noise);
  return tr;
}

std::vector<Trajectory> simulate(const ModelConfig& cfg) {
  require_valid(cfg);
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(cfg.N));
  for (int r = 0; r < cfg.N; ++r)
    out.push_back(simulate_one(cfg, derive_seed(cfg.seed, static_cast<std::uint64_t>(r))));
  return out;
}

}  // namespace povar
