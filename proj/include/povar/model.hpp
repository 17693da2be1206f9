#pragma once
// Problem instances: sparse transition matrices with row-sparsity and
// spectral-norm certificates, innovation covariances, and the full generative
// configuration (process + sampling chain + observation noise).

#include <cstdint>
#include <string>
#include <vector>

#include "povar/matrix.hpp"
#include "povar/rng.hpp"

namespace povar {

// D x D transition matrix theta with certificates: every row has at most
// `sparsity` nonzero entries and spectral_norm(entries) <= vartheta < 1.
struct TransitionMatrix {
  Matrix entries;
  int sparsity = 0;
  double vartheta = 0.0;

  std::size_t dim() const { return entries.rows(); }
};

// Violations of the TransitionMatrix certificates (empty when valid).
std::vector<std::string> check_transition(const Matrix& entries, int sparsity,
                                          double vartheta);

// Validating constructor; throws std::domain_error listing the violations.
TransitionMatrix make_transition(Matrix entries, int sparsity, double vartheta);

struct ModelConfig {
  int D = 0;
  int T = 0;
  int N = 1;  // independent realizations
  TransitionMatrix theta;
  Matrix Sigma;                 // D x D innovation covariance (PSD)
  double omega2 = 0.0;          // observation-noise variance
  double p = 1.0;               // stationary sampling rate
  double a = 1.0;               // chain transition 0 -> 1
  double b = 0.0;               // chain transition 1 -> 0
  int h0 = 0;                   // base lag for estimation, 0 or 1
  std::uint64_t seed = 0;
};

// Returns the list of violated invariants; empty means valid. Checks the
// theta certificates, chain stationarity a/(a+b) = p (within 1e-12), Sigma
// symmetry/PSD-ness via eigensolve, and scalar ranges.
std::vector<std::string> validate_config(const ModelConfig& cfg);

// Deterministic core of gen_sparse_theta: given per-row support index lists
// (each of size s, ascending) and the raw values filling them row-major,
// builds the matrix and rescales it so spectral_norm = vartheta. Exposed so
// tests can force a specific draw pattern.
TransitionMatrix theta_from_draws(int D, int s, double vartheta,
                                  const std::vector<std::vector<int>>& support,
                                  const std::vector<double>& values);

// Picks s support positions per row uniformly without replacement, fills them
// with standard normal draws, then rescales the whole matrix so that its
// spectral norm equals vartheta (within power-iteration accuracy). The zero
// pattern is unaffected by the rescale.
TransitionMatrix gen_sparse_theta(int D, int s, double vartheta, Rng& rng);

// Convenience instance used by tests and as documented config defaults:
// T=10000, D=5, Sigma=I, omega=0.1, p=1, dense theta at spectral norm 0.5.
ModelConfig make_default_config(std::uint64_t seed);

}  // namespace povar
