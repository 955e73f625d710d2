#include "fck/freeprod.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fck {

std::string tag_name(Tag t) { return t == Tag::left ? "U" : "V"; }

namespace {

Tag parse_tag(const std::string& s, std::string_view whole) {
  if (s == "U") return Tag::left;
  if (s == "V") return Tag::right;
  throw ParseError("unknown generator '" + s + "' in word '" + std::string(whole) + "' (expected U or V)");
}

}  // namespace

template <class F>
Word<F> parse_word(std::string_view text) {
  Word<F> w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    auto open = tok.find('(');
    if (open != std::string::npos) {
      if (tok.back() != ')') throw ParseError("unbalanced parenthesis in '" + tok + "'");
      std::string name = tok.substr(0, open);
      Tag t = parse_tag(tok.substr(open + 1, tok.size() - open - 2), text);
      if (name == "inv1m") w.push_back({t, FunctionDescriptor<F>::inv1m()});
      else if (name == "psi") w.push_back({t, FunctionDescriptor<F>::psi()});
      else if (name == "inv") w.push_back({t, FunctionDescriptor<F>::inverse()});
      else throw ParseError("unknown function '" + name + "' (expected inv1m, psi, inv)");
      continue;
    }
    auto caret = tok.find('^');
    Tag t = parse_tag(tok.substr(0, caret), text);
    int k = 1;
    if (caret != std::string::npos) {
      try {
        std::size_t used = 0;
        k = std::stoi(tok.substr(caret + 1), &used);
        if (used != tok.size() - caret - 1) throw ParseError("bad power in '" + tok + "'");
      } catch (const std::logic_error&) {
        throw ParseError("bad power in '" + tok + "'");
      }
    }
    w.push_back(power_letter<F>(t, k));
  }
  return w;
}

template <class F>
std::string word_string(const Word<F>& w) {
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    out += l.fn.to_string() + "(" + tag_name(l.tag) + ")";
  }
  return out.empty() ? "1" : out;
}

std::vector<GenPower> reduce_trace_word(std::vector<HalfPower> w) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<HalfPower> out;
    for (const auto& l : w) {
      if (l.halves == 0) {
        changed = true;
        continue;
      }
      if (!out.empty() && out.back().gen == l.gen) {
        out.back().halves += l.halves;
        changed = true;
      } else {
        out.push_back(l);
      }
    }
    if (out.size() >= 2 && out.front().gen == out.back().gen) {
      out.front().halves += out.back().halves;
      out.pop_back();
      changed = true;
    }
    w = std::move(out);
  }
  std::vector<GenPower> r;
  for (const auto& l : w) {
    if (l.halves % 2 != 0)
      throw CapabilityError("half-powers cannot be eliminated from this trace by cyclic rotation");
    r.push_back({l.gen, l.halves / 2});
  }
  return r;
}

template <class F>
struct FreeProductEngine<F>::Impl {
  struct Side {
    SpectralDistribution<F> law;
    F centre{0};
    Real radius{0};
    bool has_disc = false;
    std::vector<std::vector<F>> polys;
    std::map<std::vector<F>, std::uint32_t> ids;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> fused;
    std::map<std::vector<std::uint32_t>, F> comm;
    std::vector<F> mu;
    std::unique_ptr<CumulantEngine<F>> kappa;
  };

  Side side[2];
  std::map<std::vector<std::uint64_t>, F> memo;
  mutable std::recursive_mutex mutex;
  Real letter_tol;
  int max_length;

  static std::uint64_t key(Tag t, std::uint32_t id) { return (std::uint64_t(t) << 32) | id; }
  static Tag tag_of(std::uint64_t k) { return static_cast<Tag>(k >> 32); }
  static std::uint32_t id_of(std::uint64_t k) { return static_cast<std::uint32_t>(k & 0xffffffffu); }

  std::uint32_t intern(Tag t, std::vector<F> p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
    std::lock_guard<std::recursive_mutex> lock(mutex);
    auto& s = side[int(t)];
    auto it = s.ids.find(p);
    if (it != s.ids.end()) return it->second;
    auto id = static_cast<std::uint32_t>(s.polys.size());
    s.polys.push_back(p);
    s.ids.emplace(std::move(p), id);
    return id;
  }

  std::uint32_t fuse(Tag t, std::uint32_t a, std::uint32_t b) {
    auto k = std::minmax(a, b);
    std::vector<F> pa, pb;
    {
      std::lock_guard<std::recursive_mutex> lock(mutex);
      auto& s = side[int(t)];
      auto it = s.fused.find(k);
      if (it != s.fused.end()) return it->second;
      pa = s.polys[a];
      pb = s.polys[b];
    }
    std::vector<F> r(pa.size() + pb.size() - 1, F(0));
    for (std::size_t i = 0; i < pa.size(); ++i)
      if (pa[i] != 0)
        for (std::size_t j = 0; j < pb.size(); ++j) r[i + j] += pa[i] * pb[j];
    auto id = intern(t, std::move(r));
    std::lock_guard<std::recursive_mutex> lock(mutex);
    side[int(t)].fused.emplace(k, id);
    return id;
  }

  void ensure_mu(Side& s, std::size_t K) {
    if (s.mu.size() > K) return;
    std::size_t want = K;
    if (s.law.equation()) want = std::max(K, 2 * s.mu.size());
    s.mu = s.law.centered_moments(s.centre, static_cast<int>(want));
  }

  // phi of the product of the given letters of one generator.
  F commutative_moment(Tag t, std::vector<std::uint32_t> ids) {
    if (ids.empty()) return F(1);
    std::sort(ids.begin(), ids.end());
    auto& s = side[int(t)];
    std::vector<F> p;
    {
      std::lock_guard<std::recursive_mutex> lock(mutex);
      auto it = s.comm.find(ids);
      if (it != s.comm.end()) return it->second;
      p = s.polys[ids[0]];
    }
    for (std::size_t i = 1; i < ids.size(); ++i) {
      std::vector<F> q;
      {
        std::lock_guard<std::recursive_mutex> lock(mutex);
        q = s.polys[ids[i]];
      }
      std::vector<F> r(p.size() + q.size() - 1, F(0));
      for (std::size_t a = 0; a < p.size(); ++a)
        if (p[a] != 0)
          for (std::size_t b = 0; b < q.size(); ++b) r[a + b] += p[a] * q[b];
      p = std::move(r);
    }
    std::lock_guard<std::recursive_mutex> lock(mutex);
    ensure_mu(s, p.size() - 1);
    F v(0);
    for (std::size_t k = 0; k < p.size(); ++k) v += p[k] * s.mu[k];
    s.comm.emplace(std::move(ids), v);
    return v;
  }

  std::vector<std::uint64_t> canonical(const std::vector<std::uint64_t>& w) {
    std::vector<std::uint64_t> out;
    for (auto k : w) {
      if (!out.empty() && tag_of(out.back()) == tag_of(k))
        out.back() = key(tag_of(k), fuse(tag_of(k), id_of(out.back()), id_of(k)));
      else
        out.push_back(k);
    }
    while (out.size() >= 2 && tag_of(out.front()) == tag_of(out.back())) {
      out.front() = key(tag_of(out.front()), fuse(tag_of(out.front()), id_of(out.front()), id_of(out.back())));
      out.pop_back();
    }
    return out;
  }

  F phi(const std::vector<std::uint64_t>& raw) {
    auto w = canonical(raw);
    if (w.empty()) return F(1);
    if (w.size() == 1) return commutative_moment(tag_of(w[0]), {id_of(w[0])});
    if (static_cast<int>(w.size()) > max_length)
      throw SizeLimitError("word of " + std::to_string(w.size()) + " letters after fusion exceeds the size limit " +
                           std::to_string(max_length));
    // rotate to the minimal representative
    auto best = w;
    auto cur = w;
    for (std::size_t r = 1; r < w.size(); ++r) {
      std::rotate(cur.begin(), cur.begin() + 1, cur.end());
      if (cur < best) best = cur;
    }
    w = best;
    {
      std::lock_guard<std::recursive_mutex> lock(mutex);
      auto it = memo.find(w);
      if (it != memo.end()) return it->second;
    }
    const std::size_t L = w.size();
    const Tag t = tag_of(w[0]);
    const std::size_t m = L / 2 - 1;  // candidate positions 2, 4, ..., L-2
    F total(0);
    ArgWord block;
    std::vector<std::uint64_t> gap;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      block.assign(1, id_of(w[0]));
      std::vector<std::size_t> pos{0};
      for (std::size_t i = 0; i < m; ++i)
        if (mask >> i & 1) {
          pos.push_back(2 * (i + 1));
          block.push_back(id_of(w[2 * (i + 1)]));
        }
      F term = side[int(t)].kappa->free_cumulant(block);
      if (term == 0) continue;
      for (std::size_t b = 0; b < pos.size() && term != 0; ++b) {
        std::size_t from = pos[b] + 1, to = b + 1 < pos.size() ? pos[b + 1] : L;
        gap.assign(w.begin() + from, w.begin() + to);
        term *= phi(gap);
      }
      total += term;
    }
    std::lock_guard<std::recursive_mutex> lock(mutex);
    memo.emplace(std::move(w), total);
    return total;
  }

  struct Converted {
    std::vector<std::uint64_t> keys;
    F scalar{1};
    std::vector<Real> eps;
    std::vector<Real> norms;
  };

  Converted convert(const Word<F>& w, bool want_bounds) {
    Converted c;
    for (const auto& l : w) {
      auto& s = side[int(l.tag)];
      std::vector<F> p;
      Real eps(0);
      if (l.fn.is_polynomial()) {
        p = l.fn.taylor(std::max(l.fn.degree(), 0), s.centre);
      } else {
        if constexpr (std::is_same_v<F, Rational>) {
          throw CapabilityError("letter " + l.fn.to_string() + "(" + tag_name(l.tag) +
                                ") is not polynomial; rational letters need the float backend");
        }
        if (!s.has_disc)
          throw CapabilityError("letter " + l.fn.to_string() + "(" + tag_name(l.tag) +
                                ") needs a support hint on the marginal law");
        int K = neumann_degree(l.fn, s.centre, s.radius, letter_tol);
        p = l.fn.taylor(K, s.centre);
        eps = l.fn.tail_bound(K, s.centre, s.radius);
      }
      if (want_bounds) {
        c.eps.push_back(eps);
        c.norms.push_back(s.has_disc ? l.fn.sup_bound(s.centre, s.radius) : Real(0));
      }
      bool constant = true;
      for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] != 0) constant = false;
      if (constant) {
        c.scalar *= p[0];
        continue;
      }
      c.keys.push_back(key(l.tag, intern(l.tag, std::move(p))));
    }
    return c;
  }
};

template <class F>
FreeProductEngine<F>::FreeProductEngine(SpectralDistribution<F> left, SpectralDistribution<F> right,
                                        EngineOptions options)
    : impl_(std::make_unique<Impl>()), options_(options) {
  impl_->side[0].law = std::move(left);
  impl_->side[1].law = std::move(right);
  impl_->max_length = options_.max_length;
  impl_->letter_tol = options_.letter_tolerance > 0
                          ? options_.letter_tolerance
                          : Real(mp::pow(Real(10), -static_cast<int>(float_precision() / 2)));
  for (int t = 0; t < 2; ++t) {
    auto& s = impl_->side[t];
    if (s.law.support()) {
      auto [c, r] = expansion_disc(s.law);
      s.has_disc = true;
      s.radius = r;
      if constexpr (std::is_same_v<F, Real>) s.centre = c;
      else s.radius = FieldTraits<F>::magnitude(std::max(mp::abs(s.law.support()->hull().first),
                                                         mp::abs(s.law.support()->hull().second)));
    }
    Impl* impl = impl_.get();
    Tag tag = static_cast<Tag>(t);
    s.kappa = std::make_unique<CumulantEngine<F>>(
        [impl, tag](std::span<const ArgId> ids) {
          return impl->commutative_moment(tag, std::vector<std::uint32_t>(ids.begin(), ids.end()));
        },
        CumulantOptions{64, false, {}});
  }
}

template <class F>
FreeProductEngine<F>::~FreeProductEngine() = default;

template <class F>
const SpectralDistribution<F>& FreeProductEngine<F>::law(Tag t) const {
  return impl_->side[int(t)].law;
}

template <class F>
F FreeProductEngine<F>::joint_moment(const Word<F>& w) const {
  auto c = impl_->convert(w, false);
  if (c.scalar == 0) return F(0);
  return c.scalar * impl_->phi(c.keys);
}

template <class F>
BoundedValue<F> FreeProductEngine<F>::joint_moment_bounded(const Word<F>& w) const {
  auto c = impl_->convert(w, true);
  BoundedValue<F> out{c.scalar == 0 ? F(0) : c.scalar * impl_->phi(c.keys), Real(0)};
  for (std::size_t i = 0; i < c.eps.size(); ++i) {
    if (c.eps[i] == 0) continue;
    Real term = c.eps[i];
    for (std::size_t j = 0; j < c.eps.size(); ++j)
      if (j != i) term *= c.norms[j] + c.eps[j];
    out.error_bound += term;
  }
  return out;
}

template <class F>
MomentOracle<F> FreeProductEngine<F>::oracle(std::vector<Letter<F>> alphabet) const {
  return [this, alphabet = std::move(alphabet)](std::span<const ArgId> ids) {
    Word<F> w;
    for (ArgId a : ids) {
      if (a >= alphabet.size()) throw DomainError("argument outside the alphabet");
      w.push_back(alphabet[a]);
    }
    return joint_moment(w);
  };
}

template <class F>
F FreeProductEngine<F>::mixed_free_cumulant(const Word<F>& args) const {
  CumulantEngine<F> e(oracle(args), CumulantOptions{options_.max_length, true, {}});
  ArgWord ids(args.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<ArgId>(i);
  return e.free_cumulant(ids);
}

template <class F>
FreenessReport<F> freeness_report(const MomentOracle<F>& oracle, const std::vector<ArgId>& family_a,
                                  const std::vector<ArgId>& family_b, int max_order, const Real& tolerance,
                                  const ArgNamer& namer) {
  std::vector<ArgId> all = family_a;
  all.insert(all.end(), family_b.begin(), family_b.end());
  auto in_a = [&](ArgId x) { return std::find(family_a.begin(), family_a.end(), x) != family_a.end(); };
  CumulantEngine<F> e(oracle, CumulantOptions{std::max(max_order, 1), true, namer});
  FreenessReport<F> rep;
  for (int n = 2; n <= max_order; ++n) {
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      ArgWord w(n);
      bool has_a = false, has_b = false;
      for (int i = 0; i < n; ++i) {
        w[i] = all[idx[i]];
        (in_a(w[i]) ? has_a : has_b) = true;
      }
      if (has_a && has_b) {
        F v = e.free_cumulant(w);
        bool zero = FieldTraits<F>::near(v, F(0), tolerance);
        rep.rows.push_back({word_to_string(w, namer), v, zero});
        if (!zero) rep.free_verdict = false;
      }
      int i = n - 1;
      while (i >= 0 && ++idx[i] == all.size()) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  return rep;
}

#define FCK_INSTANTIATE(F)                                                                              \
  template Word<F> parse_word<F>(std::string_view);                                                     \
  template std::string word_string<F>(const Word<F>&);                                                  \
  template class FreeProductEngine<F>;                                                                  \
  template FreenessReport<F> freeness_report<F>(const MomentOracle<F>&, const std::vector<ArgId>&,      \
                                                const std::vector<ArgId>&, int, const Real&, const ArgNamer&);

FCK_INSTANTIATE(Rational)
FCK_INSTANTIATE(Real)

}  // namespace fck
