#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "fck/partitions.hpp"
#include "fck/scalar.hpp"

namespace fck {

using ArgId = std::uint32_t;
using ArgWord = std::vector<ArgId>;

// Evaluates phi on a word of abstract arguments; the empty word must give 1.
template <class F>
using MomentOracle = std::function<F(std::span<const ArgId>)>;

enum class CumulantKind { free_kind, boolean_kind };

CumulantKind parse_cumulant_kind(const std::string& s);
std::string cumulant_kind_name(CumulantKind k);

using ArgNamer = std::function<std::string(ArgId)>;
std::string word_to_string(std::span<const ArgId> w, const ArgNamer& namer = {});

// Smallest cyclic rotation; used only for moment cache keys of tracial oracles.
ArgWord min_rotation(std::span<const ArgId> w);

struct CumulantOptions {
  int max_length = kDefaultPartitionCap;
  bool tracial = false;
  ArgNamer namer;
};

// Memoized moment/cumulant conversions over one oracle. Thread-safe.
template <class F>
class CumulantEngine {
 public:
  explicit CumulantEngine(MomentOracle<F> oracle, CumulantOptions options = {});

  F moment(std::span<const ArgId> w) const;
  F cumulant(std::span<const ArgId> w, CumulantKind kind) const;
  F free_cumulant(std::span<const ArgId> w) const { return cumulant(w, CumulantKind::free_kind); }
  F boolean_cumulant(std::span<const ArgId> w) const { return cumulant(w, CumulantKind::boolean_kind); }

  // Product over blocks of the cumulants of the sub-words.
  F cumulant_of_partition(std::span<const ArgId> w, const Partition& p, CumulantKind kind) const;

  const CumulantOptions& options() const { return options_; }
  std::string describe(std::span<const ArgId> w) const { return word_to_string(w, options_.namer); }

 private:
  F compute_free(const ArgWord& w) const;
  F compute_boolean(const ArgWord& w) const;
  void check_length(std::span<const ArgId> w) const;

  MomentOracle<F> oracle_;
  CumulantOptions options_;
  mutable std::mutex mutex_;
  mutable std::map<ArgWord, F> moments_;
  mutable std::map<ArgWord, F> free_;
  mutable std::map<ArgWord, F> boolean_;
};

template <class F>
F cumulants_from_moments(const MomentOracle<F>& oracle, std::span<const ArgId> word, CumulantKind kind,
                         int max_length = kDefaultPartitionCap) {
  CumulantEngine<F> e(oracle, CumulantOptions{max_length, false, {}});
  return e.cumulant(word, kind);
}

template <class F>
struct CumulantTable {
  CumulantKind kind = CumulantKind::free_kind;
  std::map<ArgWord, F> entries;
};

// Lattice sum over NC(n) or Int(n) of products of table entries.
template <class F>
F moments_from_cumulants(const CumulantTable<F>& table, std::span<const ArgId> word,
                         int max_length = kDefaultPartitionCap);

// Sum over pi in Int(n) with pi v sigma = 1_n of beta_pi(args).
template <class F>
F boolean_cumulant_of_products(const CumulantEngine<F>& engine, std::span<const ArgId> args,
                               const Partition& grouping);

// Boolean cumulant of the product letters themselves, through a derived oracle.
template <class F>
F grouped_boolean_cumulant(const MomentOracle<F>& oracle, std::span<const ArgId> args, const Partition& grouping);

// Argument numbering for the two free families: X_i -> 2(i-1), Y_j -> 2j-1,
// so the word X_1 Y_1 ... X_n Y_n is 0,1,...,2n-1.
inline ArgId x_arg(int i) { return static_cast<ArgId>(2 * (i - 1)); }
inline ArgId y_arg(int j) { return static_cast<ArgId>(2 * j - 1); }

enum class MixedMomentPath { boolean_sum, reformulated, direct };

template <class F>
F mixed_moment_boolean(const CumulantEngine<F>& joint, int n, MixedMomentPath path);

template <class F>
struct OddBooleanIdentity {
  F left;
  F right;
};

template <class F>
OddBooleanIdentity<F> odd_boolean_identity(const CumulantEngine<F>& joint, int n);

}  // namespace fck
