#pragma once
// Deterministic randomness: splitmix64 for seed derivation, xoshiro256++ 1.0
// as the stream generator, Box-Muller for normals. The algorithms are pinned
// here (no std::*_distribution, no OS entropy) so that every draw is
// bit-reproducible across platforms and standard-library versions.

#include <array>
#include <cstdint>

namespace povar {

// One splitmix64 step (Steele/Lea/Flood mixer); advances `state`.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Deterministic fan-out of a master seed into child seeds, e.g. per
// realization, per sweep cell, per stream. Chained splitmix64 mixing of the
// indices; stable across versions of this library.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();      // xoshiro256++
  double uniform();              // [0, 1), 53-bit resolution
  double uniform_open();         // (0, 1], safe to pass to log()
  double normal();               // standard normal, Box-Muller (pair cached)
  std::uint64_t below(std::uint64_t n);  // uniform on {0,...,n-1}, unbiased
  bool bernoulli(double q) { return uniform() < q; }

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace povar
