#include "povar/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace povar {

std::vector<std::string> check_transition(const Matrix& entries, int sparsity,
                                          double vartheta) {
  std::vector<std::string> bad;
  if (entries.empty() || entries.rows() != entries.cols())
    bad.push_back("theta entries must form a nonempty square matrix");
  if (!(vartheta > 0.0 && vartheta < 1.0))
    bad.push_back("vartheta out of (0,1)");
  if (sparsity < 1 || static_cast<std::size_t>(sparsity) > entries.rows())
    bad.push_back("sparsity s out of [1,D]");
  if (!bad.empty()) return bad;

  for (std::size_t i = 0; i < entries.rows(); ++i) {
    int nnz = 0;
    for (std::size_t j = 0; j < entries.cols(); ++j)
      if (entries(i, j) != 0.0) ++nnz;
    if (nnz > sparsity) {
      std::ostringstream os;
      os << "theta row " << i << " support exceeds s (" << nnz << " > " << sparsity << ")";
      bad.push_back(os.str());
    }
  }
  const double sn = spectral_norm(entries, 1e-12);
  // Small slack: generated instances are normalized to vartheta up to the
  // power-iteration accuracy.
  if (sn > vartheta + 1e-8) bad.push_back("theta spectral norm exceeds bound vartheta");
  return bad;
}

TransitionMatrix make_transition(Matrix entries, int sparsity, double vartheta) {
  auto bad = check_transition(entries, sparsity, vartheta);
  if (!bad.empty()) {
    std::string msg = "make_transition:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw std::domain_error(msg);
  }
  return TransitionMatrix{std::move(entries), sparsity, vartheta};
}

std::vector<std::string> validate_config(const ModelConfig& cfg) {
  std::vector<std::string> bad;
  if (cfg.D < 1) bad.push_back("D must be positive");
  if (cfg.T < 1) bad.push_back("T must be positive");
  if (cfg.N < 1) bad.push_back("N must be positive");
  if (cfg.h0 != 0 && cfg.h0 != 1) bad.push_back("h0 must be 0 or 1");
  if (!(cfg.omega2 >= 0.0)) bad.push_back("omega2 negative");
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) bad.push_back("p out of (0,1]");
  if (!(cfg.a > 0.0 && cfg.a <= 1.0)) bad.push_back("a out of (0,1]");
  if (!(cfg.b >= 0.0 && cfg.b < 1.0)) bad.push_back("b out of [0,1)");

  if (cfg.theta.entries.rows() != static_cast<std::size_t>(std::max(cfg.D, 0)))
    bad.push_back("theta dimension does not match D");
  else {
    auto tbad = check_transition(cfg.theta.entries, cfg.theta.sparsity, cfg.theta.vartheta);
    bad.insert(bad.end(), tbad.begin(), tbad.end());
  }

  if (cfg.a > 0.0 && cfg.b >= 0.0 && cfg.a + cfg.b > 0.0) {
    if (std::fabs(cfg.a / (cfg.a + cfg.b) - cfg.p) > 1e-12)
      bad.push_back("chain not stationary at p (a/(a+b) != p)");
  }

  if (cfg.Sigma.rows() != static_cast<std::size_t>(std::max(cfg.D, 0)) ||
      cfg.Sigma.rows() != cfg.Sigma.cols()) {
    bad.push_back("Sigma dimension does not match D");
  } else if (!cfg.Sigma.empty()) {
    const double scale = max_norm(cfg.Sigma);
    bool sym = true;
    for (std::size_t i = 0; i < cfg.Sigma.rows() && sym; ++i)
      for (std::size_t j = i + 1; j < cfg.Sigma.cols() && sym; ++j)
        if (std::fabs(cfg.Sigma(i, j) - cfg.Sigma(j, i)) > 1e-8 * (1.0 + scale))
          sym = false;
    if (!sym) {
      bad.push_back("Sigma not symmetric");
    } else {
      SymmetricEigen eig = jacobi_eigen(cfg.Sigma);
      const double lmax = eig.values.empty() ? 0.0 : std::max(eig.values[0], 0.0);
      if (!eig.values.empty() && eig.values.back() < -1e-10 * (1.0 + lmax))
        bad.push_back("Sigma not PSD");
    }
  }
  return bad;
}

TransitionMatrix theta_from_draws(int D, int s, double vartheta,
                                  const std::vector<std::vector<int>>& support,
                                  const std::vector<double>& values) {
  if (D < 1 || s < 1 || s > D) throw std::domain_error("theta_from_draws: s out of [1,D]");
  if (!(vartheta > 0.0 && vartheta < 1.0))
    throw std::domain_error("theta_from_draws: vartheta out of (0,1)");
  if (support.size() != static_cast<std::size_t>(D) ||
      values.size() != static_cast<std::size_t>(D) * static_cast<std::size_t>(s))
    throw std::invalid_argument("theta_from_draws: draw sizes do not match (D,s)");

  Matrix raw(D, D);
  for (int i = 0; i < D; ++i) {
    if (support[i].size() != static_cast<std::size_t>(s))
      throw std::invalid_argument("theta_from_draws: support row size != s");
    for (int k = 0; k < s; ++k) {
      const int j = support[i][k];
      if (j < 0 || j >= D) throw std::invalid_argument("theta_from_draws: support index out of range");
      raw(i, j) = values[static_cast<std::size_t>(i) * s + k];
    }
  }
  const double sn = spectral_norm(raw, 1e-12);
  if (sn == 0.0) throw std::domain_error("theta_from_draws: zero draw cannot be normalized");
  Matrix scaled = (vartheta / sn) * raw;
  return TransitionMatrix{std::move(scaled), s, vartheta};
}

TransitionMatrix gen_sparse_theta(int D, int s, double vartheta, Rng& rng) {
  if (D < 1 || s < 1 || s > D) throw std::domain_error("gen_sparse_theta: s out of [1,D]");
  std::vector<std::vector<int>> support(D);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(D) * s);
  std::vector<int> idx(D);
  for (int i = 0; i < D; ++i) {
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = 0; k < s; ++k) {  // partial Fisher-Yates
      const int j = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(D - k)));
      std::swap(idx[k], idx[j]);
    }
    support[i].assign(idx.begin(), idx.begin() + s);
    std::sort(support[i].begin(), support[i].end());
    for (int k = 0; k < s; ++k) values.push_back(rng.normal());
  }
  return theta_from_draws(D, s, vartheta, support, values);
}

ModelConfig make_default_config(std::uint64_t seed) {
  ModelConfig cfg;
  cfg.D = 5;
  cfg.T = 10000;
  cfg.N = 1;
  cfg.Sigma = Matrix::identity(5);
  cfg.omega2 = 0.1 * 0.1;
  cfg.p = 1.0;
  cfg.a = 1.0;
  cfg.b = 0.0;
  cfg.h0 = 0;
  cfg.seed = seed;
  Rng rng(derive_seed(seed, 0xC0FFEE));
  cfg.theta = gen_sparse_theta(5, 5, 0.5, rng);
  return cfg;
}

}  // namespace povar
