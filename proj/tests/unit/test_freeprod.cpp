#include "doctest.h"

#include <random>

#include "fck/freeprod.hpp"
#include "oracles.hpp"

using namespace fck;
using FD = FunctionDescriptor<Rational>;
using W = Word<Rational>;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

Letter<Rational> U(int k = 1) { return power_letter<Rational>(Tag::left, k); }
Letter<Rational> V(int k = 1) { return power_letter<Rational>(Tag::right, k); }

struct Laws {
  SpectralDistribution<Rational> u, v;
};

Laws random_laws(std::mt19937_64& rng) {
  Rational s(1 + static_cast<long>(rng() % 4), 2);
  Rational t(3 + static_cast<long>(rng() % 5), 2);
  Rational a(1 + static_cast<long>(rng() % 3), 1 + static_cast<long>(rng() % 2));
  Rational l(1 + static_cast<long>(rng() % 5), 2);
  if (rng() % 2) return {make_free_binomial(s, t, 12), make_free_poisson(a, l, 12)};
  return {make_bernoulli(q(1, 3), q(-1), q(2), 12), make_free_poisson(a, l, 12)};
}

// Brute force: sum over tag-monochromatic NC partitions of single-letter U/V words.
Rational colored_nc_sum(const std::vector<int>& tags, const SpectralDistribution<Rational>& u,
                        const SpectralDistribution<Rational>& v) {
  int n = static_cast<int>(tags.size());
  if (n == 0) return 1;
  Rational total(0);
  for_each_partition(n, PartitionFamily::noncrossing, [&](std::span<const int> labels) {
    int blocks = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<int> size(blocks, 0), tag(blocks, -1);
    for (int i = 0; i < n; ++i) {
      int b = labels[i];
      if (tag[b] >= 0 && tag[b] != tags[i]) return;
      tag[b] = tags[i];
      ++size[b];
    }
    Rational term(1);
    for (int b = 0; b < blocks; ++b) term *= (tag[b] == 0 ? u : v).free_cumulant(size[b]);
    total += term;
  });
  return total;
}

// Definition of freeness: peel off expectations of non-centred letters.
struct PL {
  int tag;
  std::vector<Rational> p;
};

Rational marginal(const PL& l, const Laws& laws) {
  Rational s(0);
  for (std::size_t k = 0; k < l.p.size(); ++k) s += l.p[k] * (l.tag == 0 ? laws.u : laws.v).moment(int(k));
  return s;
}

std::vector<PL> fuse(const std::vector<PL>& w) {
  std::vector<PL> out;
  for (const auto& l : w) {
    if (!out.empty() && out.back().tag == l.tag) {
      std::vector<Rational> r(out.back().p.size() + l.p.size() - 1, Rational(0));
      for (std::size_t i = 0; i < out.back().p.size(); ++i)
        for (std::size_t j = 0; j < l.p.size(); ++j) r[i + j] += out.back().p[i] * l.p[j];
      out.back().p = r;
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Rational centering_recursion(std::vector<PL> w, const Laws& laws) {
  w = fuse(w);
  if (w.empty()) return 1;
  if (w.size() == 1) return marginal(w[0], laws);
  for (std::size_t i = 0; i < w.size(); ++i) {
    Rational c = marginal(w[i], laws);
    if (c == 0) continue;
    auto without = w;
    without.erase(without.begin() + i);
    auto centred = w;
    centred[i].p[0] -= c;
    return c * centering_recursion(without, laws) + centering_recursion(centred, laws);
  }
  return 0;
}

W to_word(const std::vector<PL>& w) {
  W out;
  for (const auto& l : w) out.push_back({l.tag == 0 ? Tag::left : Tag::right, FD::poly(l.p)});
  return out;
}

}  // namespace

TEST_CASE("word parsing") {
  auto w = parse_word<Rational>("U^2 V inv1m(U) psi(U) V^-1 inv(V)");
  REQUIRE(w.size() == 6);
  CHECK(w[0].fn == FD::monomial(2));
  CHECK(w[2].fn == FD::inv1m());
  CHECK(w[3].fn == FD::psi());
  CHECK(w[4].fn == FD::inverse());
  CHECK(w[4].tag == Tag::right);
  CHECK_THROWS_AS(parse_word<Rational>("W^2"), ParseError);
  CHECK_THROWS_AS(parse_word<Rational>("U^x"), ParseError);
}

TEST_CASE("half-power elimination") {
  auto r = reduce_trace_word({{1, 1}, {0, 2}, {1, 1}});
  CHECK(r == std::vector<GenPower>{{1, 1}, {0, 1}});
  auto r2 = reduce_trace_word({{1, -1}, {1, 1}, {0, 2}});
  CHECK(r2 == std::vector<GenPower>{{0, 1}});
  CHECK_THROWS_AS(reduce_trace_word({{1, 1}, {0, 2}}), CapabilityError);
}

TEST_CASE("small examples") {
  auto u = make_free_binomial(q(1), q(2), 10), v = make_free_poisson(q(1), q(3), 10);
  FreeProductEngine<Rational> e(u, v);
  CHECK(e.joint_moment({U(), V()}) == u.moment(1) * v.moment(1));
  auto expected = u.moment(2) * v.moment(1) * v.moment(1) + u.moment(1) * u.moment(1) * v.moment(2) -
                  u.moment(1) * u.moment(1) * v.moment(1) * v.moment(1);
  CHECK(e.joint_moment({U(), V(), U(), V()}) == expected);
  W centred{{Tag::left, FD::poly({-u.moment(1), q(1)})}, {Tag::right, FD::poly({-v.moment(1), q(1)})}};
  CHECK(e.joint_moment(centred) == 0);
  CHECK(e.mixed_free_cumulant({U(), V()}) == 0);
  CHECK(e.mixed_free_cumulant({U(), V(), U()}) == 0);
  CHECK(e.mixed_free_cumulant({U(), U()}) == u.moment(2) - u.moment(1) * u.moment(1));
  CHECK(e.joint_moment({}) == 1);
  CHECK(e.joint_moment({V(0), U(3)}) == u.moment(3));
}

TEST_CASE("single-tag words reproduce the marginals") {
  auto u = make_free_binomial(q(3, 2), q(5, 2), 12), v = make_free_poisson(q(2), q(1, 2), 12);
  FreeProductEngine<Rational> e(u, v);
  for (int k = 1; k <= 12; ++k) {
    CHECK(e.joint_moment(W(k, U())) == u.moment(k));
    CHECK(e.joint_moment({V(k)}) == v.moment(k));
  }
}

TEST_CASE("agreement with brute-force colored NC sums") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 40; ++t) {
    auto laws = random_laws(rng);
    FreeProductEngine<Rational> e(laws.u, laws.v);
    int n = 1 + static_cast<int>(rng() % 10);
    std::vector<int> tags(n);
    W w;
    for (int i = 0; i < n; ++i) {
      tags[i] = static_cast<int>(rng() % 2);
      w.push_back(tags[i] == 0 ? U() : V());
    }
    CHECK(e.joint_moment(w) == colored_nc_sum(tags, laws.u, laws.v));
  }
}

TEST_CASE("agreement with the centering recursion") {
  std::mt19937_64 rng(202);
  for (int t = 0; t < 100; ++t) {
    auto laws = random_laws(rng);
    FreeProductEngine<Rational> e(laws.u, laws.v);
    int n = 1 + static_cast<int>(rng() % 8);
    std::vector<PL> w;
    for (int i = 0; i < n; ++i) {
      int deg = static_cast<int>(rng() % 3);
      std::vector<Rational> p(deg + 1);
      for (auto& c : p) c = Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3));
      p[deg] = p[deg] == 0 ? Rational(1) : p[deg];
      w.push_back({static_cast<int>(rng() % 2), p});
    }
    CHECK(e.joint_moment(to_word(w)) == centering_recursion(w, laws));
  }
}

TEST_CASE("alternating centred products vanish") {
  std::mt19937_64 rng(303);
  for (int t = 0; t < 20; ++t) {
    auto laws = random_laws(rng);
    FreeProductEngine<Rational> e(laws.u, laws.v);
    int n = 2 + static_cast<int>(rng() % 5);
    W w;
    for (int i = 0; i < n; ++i) {
      Tag tag = i % 2 ? Tag::right : Tag::left;
      int k = 1 + static_cast<int>(rng() % 3);
      const auto& law = tag == Tag::left ? laws.u : laws.v;
      std::vector<Rational> p(k + 1, Rational(0));
      p[k] = 1;
      p[0] = -law.moment(k);
      w.push_back({tag, FD::poly(p)});
    }
    CHECK(e.joint_moment(w) == 0);
  }
}

TEST_CASE("traciality") {
  std::mt19937_64 rng(404);
  for (int t = 0; t < 30; ++t) {
    auto laws = random_laws(rng);
    FreeProductEngine<Rational> e(laws.u, laws.v);
    int n = 2 + static_cast<int>(rng() % 9);
    W w;
    for (int i = 0; i < n; ++i) w.push_back(rng() % 2 ? U(1 + int(rng() % 2)) : V(1 + int(rng() % 2)));
    auto base = e.joint_moment(w);
    for (int r = 1; r < n; ++r) {
      std::rotate(w.begin(), w.begin() + 1, w.end());
      CHECK(e.joint_moment(w) == base);
    }
  }
}

TEST_CASE("mixed free cumulants vanish for all tag words up to length 6") {
  auto u = make_free_binomial(q(1), q(2), 12), v = make_free_poisson(q(1), q(3), 12);
  FreeProductEngine<Rational> e(u, v);
  auto oracle = e.oracle({U(), V(), U(2)});
  auto rep = freeness_report(oracle, {0, 2}, {1}, 6, Real(0));
  CHECK(rep.free_verdict);
  CHECK(rep.rows.size() > 100);
  for (const auto& r : rep.rows) CHECK(r.value == 0);
}

TEST_CASE("perturbed oracle is detected") {
  auto u = make_free_binomial(q(1), q(2), 12), v = make_free_poisson(q(1), q(3), 12);
  FreeProductEngine<Rational> e(u, v);
  auto good = e.oracle({U(), V()});
  MomentOracle<Rational> bad = [good](std::span<const ArgId> w) {
    Rational x = good(w);
    if (w.size() == 4 && w[0] == 0 && w[1] == 1 && w[2] == 0 && w[3] == 1) x += q(1, 100);
    return x;
  };
  auto rep = freeness_report(bad, {0}, {1}, 4, Real(0));
  CHECK(!rep.free_verdict);
}

TEST_CASE("rational letters") {
  auto u = make_free_binomial(q(1), q(2), 8), v = make_free_poisson(q(1), q(3), 8);
  FreeProductEngine<Rational> exact(u, v);
  CHECK_THROWS_AS(exact.joint_moment({{Tag::left, FD::psi()}, V()}), CapabilityError);

  auto fu = make_free_binomial(Real(1), Real(2), 8), fv = make_free_poisson(Real(1), Real(3), 8);
  FreeProductEngine<Real> e(fu, fv);
  using FR = FunctionDescriptor<Real>;
  // alpha = sigma/(theta-1) = 1 for nu(1,2)
  auto r = e.joint_moment_bounded({{Tag::left, FR::psi()}, {Tag::right, FR::identity()}});
  CHECK(mp::abs(r.value - fv.moment(1)) <= r.error_bound + Real("1e-40"));
  CHECK(r.error_bound < Real("1e-40"));
  // phi(V^-1) = 1/(alpha_V (lambda_V - 1)) for free Poisson
  auto inv = e.joint_moment_bounded({{Tag::right, FR::inverse()}});
  CHECK(mp::abs(inv.value - Real(1) / 2) <= inv.error_bound + Real("1e-40"));
  // polynomial words agree with the exact engine
  W w{U(2), V(), U(), V(3)};
  Word<Real> wr{{Tag::left, FR::monomial(2)}, {Tag::right, FR::identity()}, {Tag::left, FR::identity()},
                {Tag::right, FR::monomial(3)}};
  CHECK(mp::abs(e.joint_moment(wr) - to_real(exact.joint_moment(w))) < Real("1e-80"));
}

namespace {

std::vector<Letter<Rational>> random_alphabet(std::mt19937_64& rng, int n) {
  // X_i -> even slots (U side), Y_j -> odd slots (V side)
  std::vector<Letter<Rational>> a;
  for (int s = 0; s <= 2 * n; ++s) {
    int deg = 1 + static_cast<int>(rng() % 2);
    std::vector<Rational> p(deg + 1);
    for (auto& c : p) c = Rational(static_cast<long>(rng() % 5) - 2, 1 + static_cast<long>(rng() % 2));
    if (p[deg] == 0) p[deg] = 1;
    a.push_back({s % 2 ? Tag::right : Tag::left, FD::poly(p)});
  }
  return a;
}

}  // namespace

TEST_CASE("alternating mixed moments: three paths agree over free pairs") {
  std::mt19937_64 rng(505);
  for (int t = 0; t < 10; ++t) {
    auto laws = random_laws(rng);
    FreeProductEngine<Rational> e(laws.u, laws.v);
    auto alphabet = random_alphabet(rng, 5);
    CumulantEngine<Rational> joint(e.oracle(alphabet), {.max_length = 14});
    for (int n = 1; n <= 5; ++n) {
      auto direct = mixed_moment_boolean(joint, n, MixedMomentPath::direct);
      CHECK(mixed_moment_boolean(joint, n, MixedMomentPath::boolean_sum) == direct);
      CHECK(mixed_moment_boolean(joint, n, MixedMomentPath::reformulated) == direct);
      auto odd = odd_boolean_identity(joint, n);
      CHECK(odd.left == odd.right);
    }
  }
}

TEST_CASE("three-path identity fails without freeness") {
  auto u = make_free_binomial(q(1), q(2), 12), v = make_free_poisson(q(1), q(3), 12);
  FreeProductEngine<Rational> e(u, v);
  auto good = e.oracle({U(), V(), U(), V(), U()});
  MomentOracle<Rational> bad = [good](std::span<const ArgId> w) {
    Rational x = good(w);
    if (w.size() == 2 && w[0] == 0 && w[1] == 1) x += q(1, 7);
    return x;
  };
  CumulantEngine<Rational> joint(bad, {.max_length = 14});
  CHECK(mixed_moment_boolean(joint, 2, MixedMomentPath::boolean_sum) !=
        mixed_moment_boolean(joint, 2, MixedMomentPath::direct));
}
