#pragma once

// Independent reference computations shared by the unit tests.

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "fck/cumulants.hpp"
#include "fck/partitions.hpp"
#include "fck/scalar.hpp"

namespace oracle {

using fck::ArgId;
using fck::ArgWord;
using fck::Rational;

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic pseudo-random rational moment functional on words.
inline fck::MomentOracle<Rational> random_oracle(std::uint64_t seed) {
  return [seed](std::span<const ArgId> w) -> Rational {
    if (w.empty()) return Rational(1);
    std::uint64_t h = splitmix(seed);
    for (ArgId a : w) h = splitmix(h ^ (a + 0x100));
    h = splitmix(h ^ w.size());
    long p = static_cast<long>(h % 19) - 9;
    long q = static_cast<long>((h >> 20) % 5) + 1;
    return Rational(p, q);
  };
}

// Cumulants by the defining lattice sum over explicitly enumerated partitions.
inline std::map<ArgWord, Rational> cumulants_by_lattice(const fck::MomentOracle<Rational>& phi,
                                                        std::span<const ArgId> word, fck::PartitionFamily fam) {
  std::map<ArgWord, Rational> table;
  // all subsequences in increasing length
  int n = static_cast<int>(word.size());
  std::vector<std::vector<int>> subsets;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) s.push_back(i);
    subsets.push_back(s);
  }
  std::sort(subsets.begin(), subsets.end(), [](auto& a, auto& b) { return a.size() < b.size(); });
  for (const auto& s : subsets) {
    ArgWord w;
    for (int i : s) w.push_back(word[i]);
    if (table.count(w)) continue;
    Rational acc = phi(w);
    for (const auto& p : fck::enumerate_partitions(static_cast<int>(w.size()), fam)) {
      if (p.block_count() == 1) continue;
      Rational term(1);
      for (const auto& b : p.blocks()) {
        ArgWord sub;
        for (int x : b) sub.push_back(w[x - 1]);
        term *= table.at(sub);
      }
      acc -= term;
    }
    table[w] = acc;
  }
  return table;
}

}  // namespace oracle
