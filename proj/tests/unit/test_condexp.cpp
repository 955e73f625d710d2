#include "doctest.h"

#include <random>

#include "fck/condexp.hpp"

using namespace fck;
using FD = FunctionDescriptor<Rational>;
using FR = FunctionDescriptor<Real>;
using S = TruncatedSeries<Rational>;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

S eta_of(const SpectralDistribution<Rational>& u, int N) { return transform_series(u, Transform::eta, N); }

}  // namespace

TEST_CASE("phi_D on the elementary weights") {
  auto u = make_free_binomial(q(1), q(2), 14);
  auto eta = eta_of(u, 12);
  auto psi = S::from_coeffs(std::vector<Rational>(13, Rational(1)), 12);
  psi[0] = 0;
  CHECK(phi_D_psi_apply(FD::constant(q(1)), u, eta) == S(12));
  CHECK(phi_D_psi_apply(FD::identity(), u, eta) == zero_derivative(eta, 1));
  CHECK(phi_D_apply(psi, FD::identity(), u, eta) == zero_derivative(eta, 1));
  for (int r = 1; r <= 4; ++r) {
    S expected(12 - r);
    for (int j = 1; j <= r; ++j) expected += zero_derivative(eta, j).truncated(12 - r) * u.moment(r - j);
    CHECK(phi_D_psi_apply(FD::monomial(r), u, eta) == expected);
  }
  CHECK_THROWS_AS(phi_D_psi_apply(FD::psi(), u, eta), CapabilityError);
  auto ur = make_free_binomial(Real(1), Real(2), 14);
  CHECK_THROWS_AS(phi_D_psi_apply(FR::psi(), ur, transform_series(ur, Transform::eta, 8)), PreconditionError);
}

TEST_CASE("closed forms of the eta series") {
  auto u = make_free_binomial(q(3, 2), q(5, 2), 16);
  const int N = 10;
  auto eta = eta_of(u, N + 4);
  CHECK(eta_fg_series(FD::identity(), FD::identity(), u, N, EtaPath::closed_form) ==
        zero_derivative(eta, 2).truncated(N));
  CHECK(eta_f_series(FD::identity(), u, N, EtaPath::closed_form) == zero_derivative(eta, 1).truncated(N));
  for (int r = 1; r <= 3; ++r) {
    S expected(N);
    for (int j = 1; j <= r; ++j) expected += zero_derivative(eta, j).truncated(N) * u.moment(r - j);
    CHECK(eta_f_series(FD::monomial(r), u, N, EtaPath::closed_form) == expected);
    CHECK(eta_f_series(FD::monomial(r), u, N, EtaPath::definition) == expected);
  }
  S expected(N);
  for (int k = 1; k <= 2; ++k) expected += zero_derivative(eta, k + 1).truncated(N) * u.moment(2 - k);
  CHECK(eta_fg_series(FD::monomial(2), FD::identity(), u, N, EtaPath::closed_form) == expected);
  CHECK(eta_fg_series(FD::monomial(2), FD::identity(), u, N, EtaPath::definition) == expected);
  CHECK(eta_fg_series(FD::constant(q(3)), FD::monomial(2), u, N, EtaPath::definition) == S(N));
  CHECK(eta_fg_series(FD::constant(q(3)), FD::monomial(2), u, N, EtaPath::closed_form) == S(N));
  CHECK(eta_f_series(FD::constant(q(3)), u, N, EtaPath::definition) == S::constant(q(3), N));
  CHECK(eta_f_series(FD::constant(q(3)), u, N, EtaPath::closed_form) == S::constant(q(3), N));
}

TEST_CASE("definition and closed form agree for random laws and polynomials") {
  std::mt19937_64 rng(31);
  auto rp = [&] {
    std::vector<Rational> c(1 + rng() % 4);
    for (auto& x : c) x = Rational(long(rng() % 7) - 3, 1 + long(rng() % 3));
    return FD::poly(c);
  };
  for (int t = 0; t < 10; ++t) {
    SpectralDistribution<Rational> u = t % 2 ? make_free_binomial(Rational(1 + long(rng() % 3), 2), Rational(3 + long(rng() % 3), 2), 16)
                                             : make_bernoulli(Rational(1, 2 + long(rng() % 3)), q(0), Rational(1 + long(rng() % 3), 4), 16);
    auto f = rp(), g = rp();
    CHECK(eta_fg_series(f, g, u, 10, EtaPath::definition) == eta_fg_series(f, g, u, 10, EtaPath::closed_form));
    CHECK(eta_f_series(f, u, 10, EtaPath::definition) == eta_f_series(f, u, 10, EtaPath::closed_form));
  }
}

TEST_CASE("Boolean cumulants with a power entry") {
  auto u = make_free_binomial(q(1), q(2), 12);
  for (int r = 1; r <= 4; ++r)
    for (int i = 1; r + i <= 8; ++i) {
      auto id = boolean_powers_identity(u, FD::poly({q(1), q(-2), q(1, 3)}), r, i);
      CHECK(id.left == id.right);
    }
}

TEST_CASE("conditional expectation pairing against the free product oracle") {
  auto u = make_free_binomial(q(1), q(2), 16), v = make_free_poisson(q(1), q(3), 16);
  Subordinator<Rational> s(u, v);
  const int N = 8;
  std::vector<FD> fs{FD::constant(q(1)), FD::identity(), FD::monomial(2), FD::monomial(3)};
  for (const auto& f : fs)
    for (const auto& g : fs) {
      auto p = condexp_pairing(f, g, s, N);
      for (int m = 0; m <= 3; ++m) CHECK(p(m) == pairing_oracle(f, g, s.engine(), N, m));
    }
  auto p = condexp_pairing(FD::identity(), FD::monomial(2), s, N);
  CHECK(p(0)[1] == (u.moment(3)) * v.moment(1));
  auto zero = condexp_pairing(FD::constant(q(0)), FD::identity(), s, N);
  for (int m = 0; m <= 3; ++m) CHECK(zero(m) == S(N));
}

TEST_CASE("general polynomial pairs") {
  auto u = make_free_binomial(q(3, 2), q(3), 16), v = make_free_poisson(q(1, 2), q(5, 2), 16);
  Subordinator<Rational> s(u, v);
  std::mt19937_64 rng(41);
  for (int t = 0; t < 6; ++t) {
    std::vector<Rational> a(4), b(4);
    for (auto& x : a) x = Rational(long(rng() % 5) - 2, 1 + long(rng() % 2));
    for (auto& x : b) x = Rational(long(rng() % 5) - 2, 1 + long(rng() % 2));
    auto f = FD::poly(a), g = FD::poly(b);
    auto p = condexp_pairing(f, g, s, 8);
    for (int m = 0; m <= 3; ++m) CHECK(p(m) == pairing_oracle(f, g, s.engine(), 8, m));
  }
}

TEST_CASE("float backend: A and B against the oracle") {
  auto u = make_free_binomial(Real(1), Real(2), 16), v = make_free_poisson(Real(1), Real(3), 16);
  Subordinator<Real> s(u, v);
  auto ab = lukacs_AB(s, 8);
  Real alpha = expectation_of(u, FR::psi()).value;
  CHECK(mp::abs(alpha - 1) < Real("1e-80"));
  CHECK(mp::abs(ab.at_one.value - alpha / (1 + alpha)) < Real("1e-80"));
  CHECK(mp::abs(ab.A[0] - alpha) < Real("1e-80"));
  CHECK(ab.B[0] == 0);
  auto generic = condexp_pairing(FR::psi(), FR::psi(), s, 8);
  for (int m = 0; m <= 3; ++m) {
    auto oracle = lukacs_pairing_oracle(s.engine(), 8, m);
    CHECK(series_max_delta(ab.pairing(m), oracle) < Real("1e-25"));
    CHECK(series_max_delta(generic(m), oracle) < Real("1e-25"));
  }
  CHECK(series_max_delta(ab.A, compose(eta_f_series(FR::psi(), u, 8, EtaPath::closed_form),
                                       s.omega(OmegaRoute::boolean_series, 8).omega2)) < Real("1e-25"));
}

TEST_CASE("psi(D) reproduces the eta tail") {
  auto u = make_free_binomial(Real(1), Real(2), 40);
  auto at = eta_at_one(u);
  auto eta = transform_series(u, Transform::eta, 12);
  auto g = psi_of_D(eta, at.value);
  auto back = g * TruncatedSeries<Real>::from_coeffs(std::vector<Real>{Real(-1), Real(1)}, 12);
  CHECK(series_max_delta(back, eta - at.value) < Real("1e-80"));
  // eta psi definition path against closed form
  auto d = eta_f_series(FR::psi(), u, 6, EtaPath::definition);
  auto c = eta_f_series(FR::psi(), u, 6, EtaPath::closed_form);
  CHECK(series_max_delta(d, c) < Real("1e-40"));
}

TEST_CASE("exact backend refuses rational functions") {
  auto u = make_free_binomial(q(1), q(2), 12), v = make_free_poisson(q(1), q(3), 12);
  Subordinator<Rational> s(u, v);
  CHECK_THROWS_AS(lukacs_AB(s, 4), CapabilityError);
}
