#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "fck/cumulants.hpp"
#include "fck/distributions.hpp"
#include "fck/functions.hpp"

namespace fck {

enum class Tag : std::uint8_t { left = 0, right = 1 };

std::string tag_name(Tag t);

template <class F>
struct Letter {
  Tag tag;
  FunctionDescriptor<F> fn;
};

template <class F>
using Word = std::vector<Letter<F>>;

// Whitespace-separated tokens: U, V^3, V^-1, inv1m(U), psi(U), inv(V).
template <class F>
Word<F> parse_word(std::string_view text);
template <class F>
std::string word_string(const Word<F>& w);

template <class F>
Letter<F> power_letter(Tag t, int k) {
  if (k >= 0) return {t, k == 1 ? FunctionDescriptor<F>::identity() : FunctionDescriptor<F>::monomial(k)};
  auto f = FunctionDescriptor<F>::inverse();
  for (int i = 1; i < -k; ++i) f = f * FunctionDescriptor<F>::inverse();
  return {t, f};
}

// Generator raised to a multiple of one half.
struct HalfPower {
  int gen;
  int halves;
  friend bool operator==(const HalfPower&, const HalfPower&) = default;
};

struct GenPower {
  int gen;
  int power;
  friend bool operator==(const GenPower&, const GenPower&) = default;
};

// Trace-preserving normal form: fuses equal neighbours cyclically and drops zero powers.
// Throws CapabilityError when a half-power survives.
std::vector<GenPower> reduce_trace_word(std::vector<HalfPower> w);

struct EngineOptions {
  int max_length = 24;
  // Truncation target for rational letters in float mode; zero selects 10^-(precision/2).
  Real letter_tolerance{0};
};

template <class F>
struct BoundedValue {
  F value;
  Real error_bound{0};
};

// Joint moments of two free elements with given marginals. Thread-safe.
template <class F>
class FreeProductEngine {
 public:
  FreeProductEngine(SpectralDistribution<F> left, SpectralDistribution<F> right, EngineOptions options = {});
  ~FreeProductEngine();
  FreeProductEngine(const FreeProductEngine&) = delete;
  FreeProductEngine& operator=(const FreeProductEngine&) = delete;

  F joint_moment(const Word<F>& w) const;
  BoundedValue<F> joint_moment_bounded(const Word<F>& w) const;

  // Oracle over the alphabet: argument i is letter alphabet[i].
  MomentOracle<F> oracle(std::vector<Letter<F>> alphabet) const;
  F mixed_free_cumulant(const Word<F>& args) const;

  const SpectralDistribution<F>& law(Tag t) const;
  const EngineOptions& options() const { return options_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  EngineOptions options_;
};

template <class F>
struct FreenessRow {
  std::string word;
  F value;
  bool vanishes;
};

template <class F>
struct FreenessReport {
  std::vector<FreenessRow<F>> rows;
  bool free_verdict = true;
};

// All mixed free cumulants up to max_order over two argument families.
template <class F>
FreenessReport<F> freeness_report(const MomentOracle<F>& oracle, const std::vector<ArgId>& family_a,
                                  const std::vector<ArgId>& family_b, int max_order, const Real& tolerance,
                                  const ArgNamer& namer = {});

}  // namespace fck
