#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "povar/rng.hpp"

using namespace povar;

TEST_SUITE("rng") {

TEST_CASE("splitmix64 matches the published reference vector") {
  std::uint64_t state = 0;
  CHECK(splitmix64_next(state) == 0xE220A8397B1DCDAFull);
  CHECK(splitmix64_next(state) == 0x6E789E6AA1B965F4ull);
  CHECK(splitmix64_next(state) == 0x06C45D188009454Full);
}

TEST_CASE("derived seeds and streams are version-pinned") {
  // Regression anchors: changing any of these breaks every recorded run.
  CHECK(derive_seed(1, 2, 3, 4) == 0x0C555B12CD62797Eull);
  CHECK(derive_seed(42, 0) == 0x1AC442B9E10BBCF3ull);
  CHECK(derive_seed(42, 1) == 0x0B8FE047B3BFF4E2ull);
  Rng r(2024);
  CHECK(r.next_u64() == 0x8641253F8FED82D1ull);
  CHECK(r.next_u64() == 0x4B7EEEC62AF66AF9ull);
  CHECK(r.next_u64() == 0x3E595FE9CF746B2Aull);
}

TEST_CASE("derive_seed separates indices and argument positions") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 20; ++a)
    for (std::uint64_t b = 0; b < 20; ++b) seen.insert(derive_seed(7, a, b));
  CHECK(seen.size() == 400);  // no collisions on a small grid
  CHECK(derive_seed(7, 1, 2) != derive_seed(7, 2, 1));
  CHECK(derive_seed(7, 1) != derive_seed(8, 1));
}

TEST_CASE("same seed same stream, different seed different stream") {
  Rng a(99), b(99), c(100);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t va = a.next_u64();
    all_equal = all_equal && va == b.next_u64();
    any_diff = any_diff || va != c.next_u64();
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform lands in [0,1) with the right mean") {
  Rng rng(11);
  const int n = 100000;
  std::vector<double> u(n);
  for (double& v : u) {
    v = rng.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
  // sd of the mean = 1/sqrt(12 n)
  CHECK(std::fabs(oracle::mean(u) - 0.5) < 3.0 / std::sqrt(12.0 * n));
}

TEST_CASE("uniform_open stays clear of zero") {
  Rng rng(12);
  for (int i = 0; i < 100000; ++i) {
    double v = rng.uniform_open();
    REQUIRE(v > 0.0);
    REQUIRE(v <= 1.0);
  }
}

TEST_CASE("normal moments") {
  Rng rng(13);
  const int n = 200000;
  std::vector<double> z(n);
  for (double& v : z) v = rng.normal();
  CHECK(std::fabs(oracle::mean(z)) < 3.0 / std::sqrt(double(n)));
  // var of the sample variance of a normal is 2/(n-1)
  CHECK(std::fabs(oracle::variance(z) - 1.0) < 3.0 * std::sqrt(2.0 / (n - 1)));
  double kurt = 0.0;
  for (double v : z) kurt += v * v * v * v;
  kurt /= n;
  CHECK(std::fabs(kurt - 3.0) < 0.1);
}

TEST_CASE("below(n) is in range and roughly uniform") {
  Rng rng(14);
  const std::uint64_t buckets = 7;
  const int n = 140000;
  std::vector<int> count(buckets, 0);
  for (int i = 0; i < n; ++i) {
    std::uint64_t v = rng.below(buckets);
    REQUIRE(v < buckets);
    ++count[v];
  }
  double expect = double(n) / buckets;
  double se = std::sqrt(expect * (1.0 - 1.0 / buckets));
  for (std::uint64_t k = 0; k < buckets; ++k)
    CHECK(std::fabs(count[k] - expect) < 5 * se);
}

TEST_CASE("bernoulli rate") {
  Rng rng(15);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
  CHECK(std::fabs(hits / double(n) - 0.3) < 3 * std::sqrt(0.3 * 0.7 / n));
}

}  // TEST_SUITE
