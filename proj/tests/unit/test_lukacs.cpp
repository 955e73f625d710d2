#include "doctest.h"

#include <chrono>
#include <random>

#include "fck/lukacs.hpp"
#include "fck/sumletters.hpp"

using namespace fck;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

using Terms = std::vector<std::pair<Rational, Word<Rational>>>;

// Expands polynomial letters into words in X = left, Y = right.
Terms expand(const std::vector<SumLetter<Rational>>& letters, const Rational& shift) {
  Terms acc{{Rational(1), {}}};
  for (const auto& l : letters) {
    Terms factor;
    for (std::size_t j = 0; j < l.coeffs.size(); ++j) {
      if (l.coeffs[j] == 0) continue;
      if (!l.on_sum) {
        Word<Rational> w;
        if (j) w.push_back(power_letter<Rational>(Tag::left, static_cast<int>(j)));
        factor.push_back({l.coeffs[j], w});
        continue;
      }
      Terms pw{{l.coeffs[j], {}}};
      for (std::size_t i = 0; i < j; ++i) {
        Terms next;
        for (const auto& [c, w] : pw) {
          for (Tag t : {Tag::left, Tag::right}) {
            auto w2 = w;
            w2.push_back(power_letter<Rational>(t, 1));
            next.push_back({c, w2});
          }
          if (shift != 0) next.push_back({-c * shift, w});
        }
        pw = std::move(next);
      }
      factor.insert(factor.end(), pw.begin(), pw.end());
    }
    Terms next;
    for (const auto& [c, w] : acc)
      for (const auto& [d, v] : factor) {
        auto w2 = w;
        w2.insert(w2.end(), v.begin(), v.end());
        next.push_back({c * d, w2});
      }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

TEST_CASE("sum-letter evaluator against the free product engine") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> small(-3, 3), deg(0, 2), len(1, 4), coin(0, 1);
  for (Rational shift : {q(0), q(3, 2)}) {
    Rational ax = q(2, 3), lx = q(3, 2), ay = q(2, 3), ly = q(5, 4);
    PoissonSumEngine<Rational> pe(ax, lx, ay, ly, shift);
    FreeProductEngine<Rational> fe(make_free_poisson(ax, lx, 12), make_free_poisson(ay, ly, 12));
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<SumLetter<Rational>> letters;
      int L = len(rng);
      for (int i = 0; i < L; ++i) {
        SumLetter<Rational> l;
        l.on_sum = coin(rng);
        int d = deg(rng) + 1;
        for (int j = 0; j <= d; ++j) l.coeffs.push_back(q(small(rng), 2));
        letters.push_back(l);
      }
      Rational brute(0);
      for (const auto& [c, w] : expand(letters, shift)) brute += c * fe.joint_moment(w);
      CHECK(pe.moment(letters) == brute);
    }
  }
  PoissonSumEngine<Rational> pe(q(1), q(2), q(1), q(3));
  CHECK(pe.moment({}) == 1);
  CHECK(pe.moment({{true, {q(0), q(1)}}}) == 5);
  CHECK(pe.moment({{false, {q(0), q(0), q(1)}}}) == make_free_poisson(q(1), q(2), 4).moment(2));
}

TEST_CASE("Chebyshev approximation of the inverse") {
  Real a("0.25"), b("4");
  for (int n : {10, 40, 80}) {
    auto inv = chebyshev_inverse(a, b, n);
    CHECK(inv.centre == (a + b) / 2);
    Real worst(0);
    for (int i = 0; i <= 400; ++i) {
      Real x = a + (b - a) * i / 400;
      Real p(0);
      for (auto it = inv.coeffs.rbegin(); it != inv.coeffs.rend(); ++it) p = p * (x - inv.centre) + *it;
      worst = std::max(worst, Real(mp::abs(1 / x - p)));
    }
    CHECK(worst <= inv.error_bound);
    CHECK(inv.error_bound < Real(10) * worst + Real("1e-90"));
  }
  CHECK_THROWS_AS(chebyshev_inverse(Real(0), Real(1), 10), DomainError);
}

TEST_CASE("regression system reproduces the closed forms") {
  const std::vector<std::array<Rational, 3>> cases{
      {q(1), q(2), q(1)}, {q(1, 2), q(3), q(1, 2)}, {q(2), q(1), q(3)}, {q(3, 4), q(5, 2), q(2, 3)}, {q(5), q(7), q(1, 3)}};
  for (const auto& [a, b, c] : cases) {
    RegressionConstants<Rational> rc{a, b, c, {}};
    auto rep = regression_check(rc, RegressionMode::th1, 11);
    CHECK(rep.rows.size() >= 10);
    for (const auto& r : rep.failed_rows()) FAIL_CHECK(r.id << " " << r.params << " " << r.lhs << " vs " << r.rhs);
    auto res = solve_regression_system(rc, RegressionMode::th1, 12);
    auto closed = closed_s_transforms(a, b, c, 11);
    CHECK(res.S_U == closed.S_U);
    CHECK(res.S_UV == closed.S_UV);
    CHECK(res.S_V == closed.S_V);
    RegressionConstants<Rational> rc2{a, {}, c, b * c * c * c};
    auto two = solve_regression_system(rc2, RegressionMode::th2, 12);
    CHECK(two.S_U == res.S_U);
    CHECK(two.S_V == res.S_V);
    auto p1 = params_from_constants(rc, RegressionMode::th1), p2 = params_from_constants(rc2, RegressionMode::th2);
    CHECK(p1.sigma == p2.sigma);
    CHECK(p1.theta == p2.theta);
    CHECK(p1.alpha_v == p2.alpha_v);
    CHECK(p1.lambda_v == p2.lambda_v);
    CHECK(regression_check(rc2, RegressionMode::th2, 11).all_pass());
  }
}

TEST_CASE("parameter maps") {
  RegressionConstants<Rational> rc{q(1), q(2), q(1), {}};
  auto p = params_from_constants(rc, RegressionMode::th1);
  CHECK(p.sigma == 1);
  CHECK(p.theta == 2);
  CHECK(p.alpha_v == 1);
  CHECK(p.lambda_v == 3);
  auto back = constants_from_params(p.sigma, p.theta, p.alpha_v);
  CHECK(back.alpha == 1);
  CHECK(*back.b == 2);
  CHECK(*back.c == 1);
  CHECK(*back.d == 2);
  CHECK_THROWS_AS(check_constants(RegressionConstants<Rational>{q(1), q(1), q(1), {}}, RegressionMode::th1), DomainError);
  CHECK_THROWS_AS(check_constants(RegressionConstants<Rational>{q(1), q(1, 2), q(1), {}}, RegressionMode::th1),
                  DomainError);
  CHECK_THROWS_AS(check_constants(RegressionConstants<Rational>{q(-1), q(2), q(1), {}}, RegressionMode::th1),
                  DomainError);
  CHECK_THROWS_AS(check_constants(RegressionConstants<Rational>{q(1), {}, q(2), q(4)}, RegressionMode::th2),
                  DomainError);
  CHECK_THROWS_AS(check_constants(RegressionConstants<Rational>{q(1), {}, q(2), {}}, RegressionMode::th2),
                  PreconditionError);
  auto bad = regression_check(RegressionConstants<Rational>{q(1), q(1), q(1), {}}, RegressionMode::th1, 6);
  REQUIRE(bad.rows.size() == 1);
  CHECK_FALSE(bad.rows[0].pass);
  CHECK(bad.rows[0].note.find("bc > 1") != std::string::npos);
  CHECK_THROWS_AS(constants_from_params(q(1), q(1), q(1)), DomainError);
  RegressionConstants<Real> rr{Real(1), Real(2), Real(1), {}};
  CHECK(regression_check(rr, RegressionMode::th1, 11).all_pass());
}

TEST_CASE("regression conditions hold forward from the laws") {
  auto rep = verify_regression_forward(q(1), q(2), q(1), 6);
  CHECK(rep.rows.size() == 7 * 3 + 1);
  for (const auto& r : rep.failed_rows()) FAIL_CHECK(r.id << " " << r.lhs << " vs " << r.rhs << " delta " << r.delta);
  auto other = verify_regression_forward(q(3, 2), q(5, 2), q(1, 2), 3);
  CHECK(other.all_pass());
}

TEST_CASE("algebraic identities") {
  auto u = make_free_binomial(q(1), q(2), 24);
  auto v = make_free_poisson(q(1), q(3), 24);
  auto rep = algebraic_identity_checks(u, v, 4);
  CHECK(rep.rows.size() >= 30);
  for (const auto& r : rep.failed_rows()) FAIL_CHECK(r.id << " " << r.lhs << " vs " << r.rhs);
}

TEST_CASE("dual construction gives free Poisson pieces") {
  const std::vector<std::array<Rational, 3>> cases{{q(1), q(1), q(1)}, {q(1, 2), q(3, 2), q(2)}, {q(2), q(1, 3), q(1, 2)}};
  for (const auto& [l, k, a] : cases) {
    auto rep = dual_lukacs_check(l, k, a, 6, 8);
    CHECK(rep.rows.size() >= 16 + 60);
    for (const auto& r : rep.failed_rows()) FAIL_CHECK(r.id << " " << r.params << " " << r.lhs << " vs " << r.rhs);
  }
}

TEST_CASE("dual check detects a mismatched law") {
  auto good = dual_pair_oracle(make_free_binomial(q(1), q(1), 10), make_free_poisson(q(1), q(2), 10));
  auto bad = dual_pair_oracle(make_free_binomial(q(1), q(1), 10), make_free_poisson(q(1), q(3), 10));
  CHECK(freeness_report(good, {0}, {1}, 4, Real(0)).free_verdict);
  auto rep = freeness_report(bad, {0}, {1}, 4, Real(0));
  CHECK_FALSE(rep.free_verdict);
  CHECK_THROWS_AS(dual_lukacs_check(q(0), q(1), q(1), 3), DomainError);
}

TEST_CASE("direct construction gives free U and V") {
  auto t0 = std::chrono::steady_clock::now();
  auto rep = direct_lukacs_check(q(2), q(2), q(1), 4, 40, Real("1e-6"));
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("direct check " << secs << " s, " << rep.rows.size() << " rows");
  CHECK(rep.rows.size() >= 8 + 20);
  for (const auto& r : rep.failed_rows()) FAIL_CHECK(r.id << " " << r.lhs << " vs " << r.rhs << " delta " << r.delta);
  CHECK_THROWS_AS(direct_lukacs_check(q(2), q(2), q(1), 4, 4, Real("1e-6")), ResolutionError);
  // spectrum of V = X + Y closer to zero: degree 40 is not enough
  CHECK_THROWS_AS(direct_lukacs_check(q(1), q(1), q(1), 4, 40, Real("1e-6")), ResolutionError);
  CHECK_THROWS_AS(direct_lukacs_check(q(1, 3), q(1, 3), q(1), 2), DomainError);
}
