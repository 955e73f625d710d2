#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fck/cumulants.hpp"
#include "fck/io.hpp"
#include "fck/report.hpp"
#include "fck/scalar.hpp"

namespace fck {

struct RunConfig {
  int order = 12;
  Backend backend = Backend::exact;
  unsigned precision = 100;
  std::optional<Real> tolerance;  // default 10^-40 on the float backend
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::json;
  // Regression constants for the lukacs battery; absent ones are drawn from the seed.
  std::optional<Rational> alpha, b, c, d;
};

Real effective_tolerance(const RunConfig& cfg);

// Parameter draws: the k-th 64-bit output r_k of std::mt19937_64(seed) gives
// positive(P, Q) = (1 + r_k mod P) / (1 + r_{k+1} mod Q) and
// signed_value(S, Q) = ((r_k mod (2S+1)) - S) / (1 + r_{k+1} mod Q).
class SeededRationals {
 public:
  explicit SeededRationals(std::uint64_t seed) : rng_(seed) {}
  Rational positive(std::uint64_t P, std::uint64_t Q);
  Rational signed_value(std::uint64_t S, std::uint64_t Q);
  std::uint64_t raw() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

// Moment functional on words: phi(w) = (h mod 19 - 9) / (1 + (h >> 20) mod 5) with h a splitmix64 chain
// over (seed, letters, length); phi(empty) = 1.
MomentOracle<Rational> seeded_oracle(std::uint64_t seed);

// Module batteries in dependency order.
const std::vector<std::string>& suite_modules();

// scope is "all" or a module name. Checks that throw become failing rows.
Report run_verification_suite(const RunConfig& cfg, const std::string& scope);

}  // namespace fck
