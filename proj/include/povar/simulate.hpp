#pragma once
// Trajectory generation: stationary VAR(1) states, per-dimension two-state
// Markov sampling indicators, and noisy partial observations.
//
// Draw-order contract (pinned for reproducibility): states consume D normals
// per time step in dimension order; the sampling chains consume one uniform
// per (t,d) in row-major order; observation noise consumes one normal per
// *observed* (t,d) in row-major order, and none when omega2 == 0.
// Realization r is seeded with derive_seed(cfg.seed, r), fanned out into
// three stream seeds derive_seed(seed_r, {0,1,2}) for states/sampling/noise.

#include <cstdint>
#include <vector>

#include "povar/matrix.hpp"
#include "povar/model.hpp"
#include "povar/rng.hpp"

namespace povar {

// One realization. X: hidden states; Pi: 0/1 sampling indicators; Y: masked
// noisy observations. Entries of Y where Pi is 0 are stored as 0 and must
// only be read through Pi-masked products.
struct Trajectory {
  Matrix X;
  Matrix Pi;
  Matrix Y;
};

// X_0 ~ N(0, Gamma_0), then X_t = theta X_{t-1} + eps_t with eps ~ N(0,Sigma).
// Square roots of Gamma_0 and Sigma come from symmetric eigendecompositions.
Matrix simulate_states(const ModelConfig& cfg, Rng& rng);

// D independent chains: pi_0 ~ Bernoulli(p); from state 0 switch to 1 with
// probability a, from state 1 switch to 0 with probability b.
Matrix simulate_sampling(const ModelConfig& cfg, Rng& rng);

// Y = Pi .* X + noise on the observed entries only (unobserved entries 0).
Matrix observe(const Matrix& x, const Matrix& pi, double omega2, Rng& rng);

// One full realization from an explicit realization seed.
Trajectory simulate_one(const ModelConfig& cfg, std::uint64_t realization_seed);

// cfg.N realizations with per-realization seeds derive_seed(cfg.seed, r).
std::vector<Trajectory> simulate(const ModelConfig& cfg);

}  // namespace povar
