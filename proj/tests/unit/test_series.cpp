#include "doctest.h"

#include <random>

#include "fck/series.hpp"

using namespace fck;
using S = TruncatedSeries<Rational>;
using R = TruncatedSeries<Real>;

namespace {

Rational q(long p, long d = 1) { return ratio<Rational>(p, d); }

S make(std::vector<Rational> c) { return S(std::move(c)); }

S random_series(std::mt19937_64& rng, int order, bool zero_constant = false) {
  S s(order);
  for (int k = 0; k <= order; ++k) {
    long p = static_cast<long>(rng() % 21) - 10;
    long d = static_cast<long>(rng() % 7) + 1;
    s[k] = q(p, d);
  }
  if (zero_constant) s[0] = 0;
  return s;
}

}  // namespace

TEST_CASE("arithmetic examples") {
  CHECK(make({0, 1, 0}) + make({0, 0, 1}) == make({0, 1, 1}));
  CHECK(make({1, 1, 0}) * make({1, -1, 0}) == make({1, 0, -1}));
  CHECK(make({0, 1, 0, 0}) / make({1, -1, 0, 0}) == make({0, 1, 1, 1}));
  CHECK_THROWS_AS(make({1, 1}) / make({0, 1}), DivisionError);
  CHECK_THROWS_AS(make({1, 1}) + make({1, 1, 1}), DimensionError);
  auto r = series_arith(make({2, 3, 5}), make({1, 4, 0}), SeriesOp::div);
  CHECK(r * make({1, 4, 0}) == make({2, 3, 5}));
}

TEST_CASE("composition examples") {
  CHECK(compose(make({0, 1, 1}), make({0, 2, 0})) == make({0, 2, 4}));
  auto f = make({3, -1, q(2, 3), 7});
  CHECK(compose(f, S::variable(3)) == f);
  CHECK_THROWS_AS(compose(f, make({1, 1, 0, 0})), CompositionDomainError);

  // sum z^k composed with z/(1-z): oracle by repeated multiplication.
  const int n = 8;
  S g(n);
  for (int k = 1; k <= n; ++k) g[k] = 1;
  S acc(n), power = S::constant(1, n);
  for (int k = 1; k <= n; ++k) {
    power = power * g;
    acc += power;
  }
  S geo(n);
  for (int k = 1; k <= n; ++k) geo[k] = 1;
  auto c = compose(geo, g);
  CHECK(c == acc);
  for (int k = 1; k <= n; ++k) CHECK(c[k] == Rational(Integer(1) << (k - 1)));
}

TEST_CASE("reversion examples") {
  CHECK(revert(S::variable(5)) == S::variable(5));
  S f(6);
  for (int k = 1; k <= 6; ++k) f[k] = 1;
  auto g = revert(f);
  for (int k = 1; k <= 6; ++k) CHECK(g[k] == ((k % 2) ? 1 : -1));
  CHECK(compose(f, g) == S::variable(6));
  auto h = revert(make({0, 2, 1, 0, 0, 0}));
  CHECK(h[1] == q(1, 2));
  CHECK(h[2] == q(-1, 8));
  CHECK(compose(make({0, 2, 1, 0, 0, 0}), h) == S::variable(5));
  CHECK_THROWS_AS(revert(make({1, 1, 0})), ReversionDomainError);
  CHECK_THROWS_AS(revert(make({0, 0, 1})), ReversionDomainError);
}

TEST_CASE("zero derivative examples") {
  auto d = zero_derivative(make({0, 0, 1}), 1);
  CHECK(d.order() == 1);
  CHECK(d == make({0, 1}));
  CHECK(zero_derivative(make({1, 0, 0}), 1) == make({0, 0}));
  CHECK(zero_derivative(make({3, 1, 5}), 2) == make({5}));
}

TEST_CASE("psi of D examples") {
  CHECK(psi_of_D(make({0, 1, 0, 0}), Rational(1)) == make({1, 0, 0, 0}));
  CHECK(psi_of_D(make({0, 0, 1, 0}), Rational(1)) == make({1, 1, 0, 0}));
  const int n = 10;
  S h(n);
  for (int k = 1; k <= n; ++k) h[k] = q(1, 1L << k);
  auto g = psi_of_D(h, Rational(1));
  for (int j = 0; j <= n; ++j) CHECK(g[j] == q(1, 1L << j));
}

TEST_CASE("ring laws on random series") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    int n = 1 + static_cast<int>(rng() % 12);
    auto a = random_series(rng, n), b = random_series(rng, n), c = random_series(rng, n);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("reversion round trips") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    int n = 1 + static_cast<int>(rng() % 10);
    auto f = random_series(rng, n, true);
    if (f[1] == 0) f[1] = 1;
    auto g = revert(f);
    CHECK(compose(f, g) == S::variable(n));
    CHECK(compose(g, f) == S::variable(n));
  }
}

TEST_CASE("psi of D times (z-1) recovers h - h(1)") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    int n = 2 + static_cast<int>(rng() % 9);
    auto h = random_series(rng, n);
    Rational h1 = h.sum_of_coeffs() + q(3, 7);  // tail beyond the truncation
    auto g = psi_of_D(h, h1);
    auto back = g * S::from_coeffs(std::vector<Rational>{-1, 1}, n);
    auto expect = h - h1;
    for (int k = 0; k < n; ++k) CHECK(back[k] == expect[k]);
  }
}

TEST_CASE("z D h = h - h(0)") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    int n = 1 + static_cast<int>(rng() % 10);
    auto h = random_series(rng, n);
    auto d = zero_derivative(h, 1);
    S zd(n);
    for (int k = 1; k <= n; ++k) zd[k] = d[k - 1];
    CHECK(zd == h - h[0]);
  }
}

TEST_CASE("float backend") {
  R f(std::vector<Real>{0, 1, 1, 1, 1, 1});
  auto g = revert(f);
  CHECK(series_near(compose(f, g), R::variable(5), default_tolerance()));
  CHECK(format(Real(1) / 3).substr(0, 10) == "3.33333333");
}
