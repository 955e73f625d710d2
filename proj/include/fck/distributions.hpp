#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fck/functions.hpp"
#include "fck/scalar.hpp"
#include "fck/series.hpp"

namespace fck {

template <class F>
struct Atom {
  F location;
  F mass;
};

// Spectrum contained in [lo, hi] (continuous part) together with the atoms.
template <class F>
struct SupportHint {
  bool continuous = false;
  F lo{0};
  F hi{0};
  std::vector<Atom<F>> atoms;

  // Smallest interval holding the whole spectrum.
  std::pair<F, F> hull() const;
};

enum class LawKind { free_poisson, free_binomial, bernoulli, point, generic };

std::string law_kind_name(LawKind k);
LawKind parse_law_kind(const std::string& s);

template <class F>
struct LawParam {
  std::string name;
  F value;
};

// A(t)-coefficients of sum_j A_j(t) H(t)^j = 0 with H(t) = sum_k phi(X^k) t^k, degree <= 2 in H.
template <class F>
struct MomentEquation {
  std::vector<std::vector<F>> a;  // a[j][i] = coefficient of t^i in A_j

  // Equation satisfied by the moments of X - c.
  MomentEquation shifted(const F& c) const;
  // phi(X^k) for k = 0..K.
  std::vector<F> solve(int K) const;
};

template <class F>
class SpectralDistribution {
 public:
  SpectralDistribution() = default;

  // moments and cumulants indexed 1..N (stored at 0..N-1).
  static SpectralDistribution from_moments(std::vector<F> moments);
  static SpectralDistribution from_free_cumulants(std::vector<F> cumulants);

  int order() const { return static_cast<int>(moments_.size()); }
  // phi(X^k); k = 0 gives 1. Beyond the order the moment equation is used when present.
  F moment(int k) const;
  const F& free_cumulant(int k) const;
  const std::vector<F>& moments() const { return moments_; }
  const std::vector<F>& free_cumulants() const { return cumulants_; }

  // phi((X - c)^k) for k = 0..K.
  std::vector<F> centered_moments(const F& c, int K) const;
  std::vector<F> moment_sequence(int K) const { return centered_moments(F(0), K); }

  LawKind kind() const { return kind_; }
  const std::vector<LawParam<F>>& params() const { return params_; }
  std::optional<F> param(const std::string& name) const;
  std::string label() const;
  const std::optional<SupportHint<F>>& support() const { return support_; }
  const std::optional<MomentEquation<F>>& equation() const { return equation_; }

  SpectralDistribution& set_label(LawKind kind, std::vector<LawParam<F>> params);
  SpectralDistribution& set_support(SupportHint<F> hint);
  SpectralDistribution& set_equation(MomentEquation<F> eq);
  SpectralDistribution truncated(int N) const;
  // Same law with moments recomputed to order N (needs the moment equation for extension).
  SpectralDistribution with_order(int N) const;

 private:
  std::vector<F> moments_;
  std::vector<F> cumulants_;
  LawKind kind_ = LawKind::generic;
  std::vector<LawParam<F>> params_;
  std::optional<SupportHint<F>> support_;
  std::optional<MomentEquation<F>> equation_;
};

template <class F>
SpectralDistribution<F> make_free_poisson(const F& alpha, const F& lambda, int N);
template <class F>
SpectralDistribution<F> make_free_binomial(const F& sigma, const F& theta, int N);
// p delta_a + (1-p) delta_b
template <class F>
SpectralDistribution<F> make_bernoulli(const F& p, const F& a, const F& b, int N);
template <class F>
SpectralDistribution<F> make_point(const F& c, int N);

// Univariate conversions through the functional equation M(z) = C(z(1 + M(z))).
template <class F>
std::vector<F> free_cumulants_from_moments(const std::vector<F>& moments);
template <class F>
std::vector<F> moments_from_free_cumulants(const std::vector<F>& cumulants);

enum class Transform { M, eta, S };
Transform parse_transform(const std::string& s);

// M and eta through order N (needs law order >= N); S through order N (needs law order >= N+1).
template <class F>
TruncatedSeries<F> transform_series(const SpectralDistribution<F>& d, Transform which, int N);

// S-transform to M-series: M^<-1>(s) = s/(1+s) S(s), then reversion.
template <class F>
TruncatedSeries<F> moment_series_from_S(const TruncatedSeries<F>& S);

template <class F>
SpectralDistribution<F> free_convolve(const SpectralDistribution<F>& a, const SpectralDistribution<F>& b);

enum class ExpectMethod { exact_poly, neumann, quadrature };

template <class F>
struct Expectation {
  F value;
  Real error_bound{0};
  int degree = 0;  // Neumann degree or quadrature node count
};

struct ExpectOptions {
  ExpectMethod method = ExpectMethod::exact_poly;
  int degree = -1;      // Neumann degree; negative selects it from the tolerance
  Real tolerance{0};    // target bound; zero means 10^-(precision-10)
  int max_degree = 20000;
};

template <class F>
Expectation<F> expect_function(const SpectralDistribution<F>& d, const FunctionDescriptor<F>& fn,
                               const ExpectOptions& opts);

// Centre and radius used for Neumann expansions: midpoint and half-width of the support hull.
template <class F>
std::pair<F, Real> expansion_disc(const SpectralDistribution<F>& d);

// Smallest degree whose certified tail is within tol (throws DivergenceError past max_degree).
template <class F>
int neumann_degree(const FunctionDescriptor<F>& fn, const F& centre, const Real& radius, const Real& tol,
                   int max_degree = 20000);

Real default_series_tolerance();

}  // namespace fck
