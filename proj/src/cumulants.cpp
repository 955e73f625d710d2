#include "fck/cumulants.hpp"

#include <algorithm>

#include "fck/errors.hpp"

namespace fck {

CumulantKind parse_cumulant_kind(const std::string& s) {
  if (s == "free") return CumulantKind::free_kind;
  if (s == "boolean") return CumulantKind::boolean_kind;
  throw ParseError("unknown cumulant kind '" + s + "' (expected free|boolean)");
}

std::string cumulant_kind_name(CumulantKind k) { return k == CumulantKind::free_kind ? "free" : "boolean"; }

std::string word_to_string(std::span<const ArgId> w, const ArgNamer& namer) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += namer ? namer(w[i]) : "a" + std::to_string(w[i]);
  }
  return out.empty() ? "1" : out;
}

ArgWord min_rotation(std::span<const ArgId> w) {
  ArgWord best(w.begin(), w.end());
  ArgWord cur = best;
  for (std::size_t r = 1; r < w.size(); ++r) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

template <class F>
CumulantEngine<F>::CumulantEngine(MomentOracle<F> oracle, CumulantOptions options)
    : oracle_(std::move(oracle)), options_(std::move(options)) {}

template <class F>
void CumulantEngine<F>::check_length(std::span<const ArgId> w) const {
  if (static_cast<int>(w.size()) > options_.max_length)
    throw SizeLimitError("word length " + std::to_string(w.size()) + " exceeds the size limit " +
                         std::to_string(options_.max_length));
}

template <class F>
F CumulantEngine<F>::moment(std::span<const ArgId> w) const {
  if (w.empty()) return F(1);
  ArgWord key = options_.tracial ? min_rotation(w) : ArgWord(w.begin(), w.end());
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = moments_.find(key);
    if (it != moments_.end()) return it->second;
  }
  F value;
  try {
    value = oracle_(w);
  } catch (const OracleError&) {
    throw;
  } catch (const std::exception& e) {
    throw OracleError(e.what(), describe(w));
  }
  std::lock_guard<std::mutex> lock(mutex_);
  moments_.emplace(std::move(key), value);
  return value;
}

template <class F>
F CumulantEngine<F>::cumulant(std::span<const ArgId> w, CumulantKind kind) const {
  if (w.empty()) throw DomainError("cumulant of the empty word");
  check_length(w);
  ArgWord key(w.begin(), w.end());
  auto& memo = kind == CumulantKind::free_kind ? free_ : boolean_;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  F value = kind == CumulantKind::free_kind ? compute_free(key) : compute_boolean(key);
  std::lock_guard<std::mutex> lock(mutex_);
  memo.emplace(std::move(key), value);
  return value;
}

template <class F>
F CumulantEngine<F>::compute_boolean(const ArgWord& w) const {
  F value = moment(w);
  std::span<const ArgId> s(w);
  for (std::size_t k = 1; k < w.size(); ++k)
    value -= boolean_cumulant(s.first(k)) * moment(s.subspan(k));
  return value;
}

template <class F>
F CumulantEngine<F>::compute_free(const ArgWord& w) const {
  // phi(w) = sum over blocks B containing the first letter of kappa(w_B) * prod phi(gaps).
  const std::size_t n = w.size();
  F value = moment(w);
  if (n == 1) return value;
  const std::size_t rest = n - 1;
  const std::uint64_t full = (std::uint64_t{1} << rest) - 1;
  ArgWord block, gap;
  for (std::uint64_t mask = 0; mask < full; ++mask) {
    block.assign(1, w[0]);
    F term(1);
    std::size_t i = 1;
    while (i < n && term != 0) {
      if (mask >> (i - 1) & 1) {
        block.push_back(w[i]);
        ++i;
        continue;
      }
      gap.clear();
      while (i < n && !(mask >> (i - 1) & 1)) gap.push_back(w[i++]);
      term *= moment(gap);
    }
    if (term == 0) continue;
    value -= free_cumulant(block) * term;
  }
  return value;
}

template <class F>
F CumulantEngine<F>::cumulant_of_partition(std::span<const ArgId> w, const Partition& p, CumulantKind kind) const {
  if (p.size() != static_cast<int>(w.size())) throw DimensionError("partition size does not match word length");
  F value(1);
  ArgWord sub;
  for (const auto& b : p.blocks()) {
    sub.clear();
    for (int x : b) sub.push_back(w[x - 1]);
    value *= cumulant(sub, kind);
  }
  return value;
}

template <class F>
F moments_from_cumulants(const CumulantTable<F>& table, std::span<const ArgId> word, int max_length) {
  if (word.empty()) return F(1);
  auto family = table.kind == CumulantKind::free_kind ? PartitionFamily::noncrossing : PartitionFamily::interval;
  F total(0);
  ArgWord sub;
  for_each_partition(static_cast<int>(word.size()), family, [&](std::span<const int> labels) {
    F term(1);
    int blocks = *std::max_element(labels.begin(), labels.end()) + 1;
    for (int b = 0; b < blocks; ++b) {
      sub.clear();
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == b) sub.push_back(word[i]);
      auto it = table.entries.find(sub);
      if (it == table.entries.end())
        throw IncompleteTableError("cumulant table has no entry for block (" + word_to_string(sub) + ")");
      term *= it->second;
    }
    total += term;
  }, max_length);
  return total;
}

template <class F>
F boolean_cumulant_of_products(const CumulantEngine<F>& engine, std::span<const ArgId> args,
                               const Partition& grouping) {
  int n = static_cast<int>(args.size());
  if (grouping.size() != n) throw DimensionError("grouping does not match the number of arguments");
  if (!grouping.is_interval()) throw DomainError("grouping " + grouping.to_string() + " is not an interval partition");
  auto one = Partition::one(n);
  F total(0);
  for_each_partition(n, PartitionFamily::interval, [&](std::span<const int> labels) {
    auto pi = Partition::from_labels(labels);
    if (!(join_partitions(pi, grouping) == one)) return;
    total += engine.cumulant_of_partition(args, pi, CumulantKind::boolean_kind);
  }, engine.options().max_length);
  return total;
}

template <class F>
F grouped_boolean_cumulant(const MomentOracle<F>& oracle, std::span<const ArgId> args, const Partition& grouping) {
  if (grouping.size() != static_cast<int>(args.size()))
    throw DimensionError("grouping does not match the number of arguments");
  if (!grouping.is_interval()) throw DomainError("grouping " + grouping.to_string() + " is not an interval partition");
  std::vector<ArgWord> groups;
  for (const auto& b : grouping.blocks()) {
    ArgWord g;
    for (int x : b) g.push_back(args[x - 1]);
    groups.push_back(std::move(g));
  }
  MomentOracle<F> derived = [&oracle, groups](std::span<const ArgId> w) {
    ArgWord flat;
    for (ArgId g : w) flat.insert(flat.end(), groups[g].begin(), groups[g].end());
    return oracle(flat);
  };
  ArgWord ids(groups.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<ArgId>(i);
  CumulantEngine<F> e(derived);
  return e.boolean_cumulant(ids);
}

namespace {

ArgWord arg_range(ArgId lo, ArgId hi) {
  ArgWord w;
  for (ArgId a = lo; a <= hi; ++a) w.push_back(a);
  return w;
}

void check_families(int n, int max_length) {
  if (n < 1) throw DomainError("family size must be positive");
  if (2 * n + 1 > max_length)
    throw SizeLimitError("n = " + std::to_string(n) + " needs words of length " + std::to_string(2 * n + 1) +
                         " beyond the size limit " + std::to_string(max_length));
}

// Calls visit with each composition of total into k nonnegative parts.
void compositions(int total, int k, std::vector<int>& parts, const std::function<void()>& visit) {
  if (static_cast<int>(parts.size()) == k - 1) {
    parts.push_back(total);
    visit();
    parts.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    parts.push_back(v);
    compositions(total - v, k, parts, visit);
    parts.pop_back();
  }
}

}  // namespace

template <class F>
F mixed_moment_boolean(const CumulantEngine<F>& joint, int n, MixedMomentPath path) {
  check_families(n, joint.options().max_length);
  if (path == MixedMomentPath::direct) return joint.moment(arg_range(0, static_cast<ArgId>(2 * n - 1)));

  F total(0);
  if (path == MixedMomentPath::boolean_sum) {
    // subsets {j_1 < ... < j_k} of {1..n-1}, then j_{k+1} = n
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
      std::vector<int> js{0};
      for (int j = 1; j < n; ++j)
        if (mask >> (j - 1) & 1) js.push_back(j);
      js.push_back(n);
      ArgWord ys;
      for (std::size_t l = 1; l < js.size(); ++l) ys.push_back(y_arg(js[l]));
      F term = joint.moment(ys);
      for (std::size_t l = 0; l + 1 < js.size() && term != 0; ++l)
        term *= joint.boolean_cumulant(arg_range(x_arg(js[l] + 1), x_arg(js[l + 1])));
      total += term;
    }
    return total;
  }

  for (int k = 1; k <= n; ++k) {
    std::vector<int> parts;
    compositions(n - k, k, parts, [&] {
      // s[t] = i_0 + ... + i_t with i_0 = 0
      std::vector<int> s(k + 1, 0);
      for (int t = 1; t <= k; ++t) s[t] = s[t - 1] + parts[t - 1];
      ArgWord ys;
      for (int t = k - 1; t >= 0; --t) ys.push_back(y_arg(n - s[t] - t));
      F term = joint.moment(ys);
      for (int j = 1; j <= k && term != 0; ++j) {
        int lo = n - s[j] - (j - 1);
        int hi = n - s[j - 1] - (j - 1);
        term *= joint.boolean_cumulant(arg_range(x_arg(lo), x_arg(hi)));
      }
      total += term;
    });
  }
  return total;
}

template <class F>
OddBooleanIdentity<F> odd_boolean_identity(const CumulantEngine<F>& joint, int n) {
  check_families(n, joint.options().max_length);
  OddBooleanIdentity<F> out{joint.boolean_cumulant(arg_range(0, static_cast<ArgId>(2 * n))), F(0)};
  // 1 = j_1 < ... < j_k = n+1: subsets of {2..n}
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    std::vector<int> js{1};
    for (int j = 2; j <= n; ++j)
      if (mask >> (j - 2) & 1) js.push_back(j);
    js.push_back(n + 1);
    ArgWord xs;
    for (int j : js) xs.push_back(x_arg(j));
    F term = joint.boolean_cumulant(xs);
    for (std::size_t l = 0; l + 1 < js.size() && term != 0; ++l)
      term *= joint.boolean_cumulant(arg_range(y_arg(js[l]), y_arg(js[l + 1] - 1)));
    out.right += term;
  }
  return out;
}

#define FCK_INSTANTIATE(F)                                                                                   \
  template class CumulantEngine<F>;                                                                          \
  template F moments_from_cumulants<F>(const CumulantTable<F>&, std::span<const ArgId>, int);               \
  template F boolean_cumulant_of_products<F>(const CumulantEngine<F>&, std::span<const ArgId>,              \
                                             const Partition&);                                              \
  template F grouped_boolean_cumulant<F>(const MomentOracle<F>&, std::span<const ArgId>, const Partition&); \
  template F mixed_moment_boolean<F>(const CumulantEngine<F>&, int, MixedMomentPath);                       \
  template OddBooleanIdentity<F> odd_boolean_identity<F>(const CumulantEngine<F>&, int);

FCK_INSTANTIATE(Rational)
FCK_INSTANTIATE(Real)

}  // namespace fck
