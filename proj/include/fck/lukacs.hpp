#pragma once

#include <optional>
#include <string>

#include "fck/distributions.hpp"
#include "fck/freeprod.hpp"
#include "fck/report.hpp"
#include "fck/series.hpp"

namespace fck {

enum class RegressionMode { th1, th2 };

std::string regression_mode_name(RegressionMode m);

template <class F>
struct RegressionConstants {
  F alpha;
  std::optional<F> b, c, d;
};

// U ~ nu(sigma, theta), V ~ mu(alpha_v, lambda_v)
template <class F>
struct LawParams {
  F sigma, theta, alpha_v, lambda_v;
};

template <class F>
struct CharacterizationResult {
  TruncatedSeries<F> M_U_inv, M_UV_inv;
  TruncatedSeries<F> S_U, S_UV, S_V;
  LawParams<F> params;
};

// Throws DomainError quoting the violated inequality.
template <class F>
void check_constants(const RegressionConstants<F>& rc, RegressionMode mode);

template <class F>
LawParams<F> params_from_constants(const RegressionConstants<F>& rc, RegressionMode mode);

// Forward map: (sigma, theta, alpha_v) with lambda_v = sigma + theta to (alpha, b, c, d).
template <class F>
RegressionConstants<F> constants_from_params(const F& sigma, const F& theta, const F& alpha_v);

template <class F>
CharacterizationResult<F> solve_regression_system(const RegressionConstants<F>& rc, RegressionMode mode, int N);

// Closed forms of S_U, S_UV, S_V through order N.
template <class F>
struct ClosedForms {
  TruncatedSeries<F> S_U, S_UV, S_V;
};

template <class F>
ClosedForms<F> closed_s_transforms(const F& alpha, const F& b, const F& c, int N);

// Solve, compare with closed forms, check S_UV = S_U S_V and the parameter maps.
template <class F>
Report regression_check(const RegressionConstants<F>& rc, RegressionMode mode, int N);

// Regression conditions checked forward from the laws.
Report verify_regression_forward(const Rational& sigma, const Rational& theta, const Rational& alpha_v, int n_max);

// Moments of words in X1 = V^{1/2} U V^{1/2} (id 0) and Y1 = V - X1 (id 1) for free U, V. Memoized.
MomentOracle<Rational> dual_pair_oracle(const SpectralDistribution<Rational>& u, const SpectralDistribution<Rational>& v);

// X1 = V^{1/2} U V^{1/2}, Y1 = V - X1 for U ~ nu(lambda, kappa), V ~ mu(alpha, lambda + kappa).
Report dual_lukacs_check(const Rational& lambda, const Rational& kappa, const Rational& alpha, int max_order,
                         int moment_order = 8);

// U = V^{-1/2} X V^{-1/2}, V = X + Y for X ~ mu(alpha, lambda), Y ~ mu(alpha, kappa).
Report direct_lukacs_check(const Rational& lambda, const Rational& kappa, const Rational& alpha, int max_order = 4,
                           int approx_degree = 40, const Real& tolerance = Real("1e-6"));

// Word identity, the scalar identity behind the regression, and the subordination equations.
Report algebraic_identity_checks(const SpectralDistribution<Rational>& u, const SpectralDistribution<Rational>& v,
                                 int N);

}  // namespace fck
