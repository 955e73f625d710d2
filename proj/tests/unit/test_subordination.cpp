#include "doctest.h"

#include <random>

#include "fck/subordination.hpp"

using namespace fck;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

TruncatedSeries<Rational> moments_of(const SpectralDistribution<Rational>& d, int N) {
  TruncatedSeries<Rational> m(N);
  for (int k = 1; k <= N; ++k) m[k] = d.moment(k);
  return m;
}

}  // namespace

TEST_CASE("point mass on the right: omega2 is the identity") {
  auto u = make_free_binomial(q(1), q(2), 10);
  Subordinator<Rational> s(u, make_point(q(1), 10));
  auto p = s.omega(OmegaRoute::boolean_series, 8);
  CHECK(p.omega2 == TruncatedSeries<Rational>::variable(8));
  CHECK(s.product_moments(8) == moments_of(u, 8));
}

TEST_CASE("leading coefficients") {
  auto u = make_free_binomial(q(1), q(2), 12), v = make_free_poisson(q(1), q(3), 12);
  Subordinator<Rational> s(u, v);
  auto p = s.omega(OmegaRoute::boolean_series, 6);
  CHECK(p.omega1[0] == 0);
  CHECK(p.omega2[0] == 0);
  CHECK(p.omega1[1] == u.moment(1));
  CHECK(p.omega2[1] == v.moment(1));
}

TEST_CASE("two routes agree and satisfy the subordination identities") {
  auto u = make_free_binomial(q(1), q(2), 12), v = make_free_poisson(q(1), q(3), 12);
  Subordinator<Rational> s(u, v);
  const int N = 10;
  auto b = s.omega(OmegaRoute::boolean_series, N);
  auto r = s.omega(OmegaRoute::reversion, N);
  CHECK(b.omega1 == r.omega1);
  CHECK(b.omega2 == r.omega2);
  auto muv = s.product_moments(N);
  CHECK(compose(moments_of(v, N), b.omega1) == muv);
  CHECK(compose(moments_of(u, N), b.omega2) == muv);
}

TEST_CASE("random admissible pairs") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    Rational sigma(1 + long(rng() % 4), 2), theta(3 + long(rng() % 4), 2);
    Rational alpha(1 + long(rng() % 3), 2), lambda(1 + long(rng() % 6), 2);
    Subordinator<Rational> s(make_free_binomial(sigma, theta, 8), make_free_poisson(alpha, lambda, 8));
    const int N = 6;
    auto b = s.omega(OmegaRoute::boolean_series, N);
    auto muv = s.product_moments(N);
    CHECK(compose(moments_of(s.right(), N), b.omega1) == muv);
    CHECK(compose(moments_of(s.left(), N), b.omega2) == muv);
    CHECK(s.omega(OmegaRoute::reversion, N).omega1 == b.omega1);
  }
}

TEST_CASE("square roots on either factor give the same moments") {
  auto u = make_free_binomial(q(3, 2), q(2), 10), v = make_free_poisson(q(1, 2), q(3), 10);
  FreeProductEngine<Rational> e(u, v);
  for (int n = 1; n <= 6; ++n) {
    std::vector<HalfPower> a, b;
    for (int i = 0; i < n; ++i) {
      a.insert(a.end(), {{0, 1}, {1, 2}, {0, 1}});
      b.insert(b.end(), {{1, 1}, {0, 2}, {1, 1}});
    }
    auto to_word = [](const std::vector<GenPower>& g) {
      Word<Rational> w;
      for (auto x : g) w.push_back(power_letter<Rational>(x.gen == 0 ? Tag::left : Tag::right, x.power));
      return w;
    };
    Word<Rational> uv;
    for (int i = 0; i < n; ++i) {
      uv.push_back(power_letter<Rational>(Tag::left, 1));
      uv.push_back(power_letter<Rational>(Tag::right, 1));
    }
    auto m = e.joint_moment(uv);
    CHECK(e.joint_moment(to_word(reduce_trace_word(a))) == m);
    CHECK(e.joint_moment(to_word(reduce_trace_word(b))) == m);
  }
}

TEST_CASE("reversion needs nonzero means") {
  auto u = make_bernoulli(q(1, 2), q(-1), q(1), 8);
  Subordinator<Rational> s(u, make_free_poisson(q(1), q(2), 8));
  CHECK_THROWS_AS(s.omega(OmegaRoute::reversion, 4), ReversionDomainError);
  auto b = s.omega(OmegaRoute::boolean_series, 4);
  CHECK(b.omega1[1] == 0);
}

TEST_CASE("float backend matches exact") {
  auto u = make_free_binomial(q(1), q(2), 10), v = make_free_poisson(q(1), q(3), 10);
  auto ur = make_free_binomial(Real(1), Real(2), 10), vr = make_free_poisson(Real(1), Real(3), 10);
  auto e = omega_series(u, v, OmegaRoute::boolean_series, 6);
  auto f = omega_series(ur, vr, OmegaRoute::reversion, 6);
  for (int k = 0; k <= 6; ++k) CHECK(mp::abs(to_real(e.omega1[k]) - f.omega1[k]) < Real("1e-80"));
}
