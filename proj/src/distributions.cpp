#include "fck/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fck {

namespace {

template <class F>
F binom(int n, int k) {
  F r(1);
  for (int i = 1; i <= k; ++i) r = r * F(n - k + i) / F(i);
  return r;
}

// Rational just outside x, within 10^-30.
Rational outward(const Real& x, bool up) {
  Real scaled = x * mp::pow(Real(10), 30);
  Real r = up ? mp::ceil(scaled) : mp::floor(scaled);
  std::string digits = r.str(0, std::ios_base::fixed);
  digits = digits.substr(0, digits.find('.'));
  if (digits == "-0") digits = "0";
  Integer n(digits);
  Rational q(n, mp::pow(Integer(10), 30));
  return up ? Rational(q + Rational(1, mp::pow(Integer(10), 30))) : Rational(q - Rational(1, mp::pow(Integer(10), 30)));
}

template <class F>
F lower_bound_of(const Real& x);
template <>
Rational lower_bound_of<Rational>(const Real& x) { return outward(x, false); }
template <>
Real lower_bound_of<Real>(const Real& x) { return x - mp::abs(x) * mp::pow(Real(10), -static_cast<int>(float_precision()) + 5); }

template <class F>
F upper_bound_of(const Real& x);
template <>
Rational upper_bound_of<Rational>(const Real& x) { return outward(x, true); }
template <>
Real upper_bound_of<Real>(const Real& x) { return x + mp::abs(x) * mp::pow(Real(10), -static_cast<int>(float_precision()) + 5); }

Real as_real(const Rational& q) { return to_real(q); }
Real as_real(const Real& r) { return r; }

}  // namespace

Real default_series_tolerance() { return mp::pow(Real(10), -static_cast<int>(float_precision()) + 10); }

std::string law_kind_name(LawKind k) {
  switch (k) {
    case LawKind::free_poisson: return "poisson";
    case LawKind::free_binomial: return "binomial";
    case LawKind::bernoulli: return "bernoulli";
    case LawKind::point: return "point";
    case LawKind::generic: return "generic";
  }
  return "generic";
}

LawKind parse_law_kind(const std::string& s) {
  if (s == "poisson") return LawKind::free_poisson;
  if (s == "binomial") return LawKind::free_binomial;
  if (s == "bernoulli") return LawKind::bernoulli;
  if (s == "point") return LawKind::point;
  if (s == "generic") return LawKind::generic;
  throw ParseError("unknown law '" + s + "' (expected poisson|binomial|bernoulli|point)");
}

Transform parse_transform(const std::string& s) {
  if (s == "m" || s == "M") return Transform::M;
  if (s == "eta") return Transform::eta;
  if (s == "s" || s == "S") return Transform::S;
  throw ParseError("unknown transform '" + s + "' (expected m|eta|s)");
}

template <class F>
std::pair<F, F> SupportHint<F>::hull() const {
  bool have = continuous;
  F lo_ = lo, hi_ = hi;
  for (const auto& a : atoms) {
    if (!have) {
      lo_ = hi_ = a.location;
      have = true;
    }
    lo_ = std::min(lo_, a.location);
    hi_ = std::max(hi_, a.location);
  }
  if (!have) throw CapabilityError("empty support hint");
  return {lo_, hi_};
}

template <class F>
MomentEquation<F> MomentEquation<F>::shifted(const F& c) const {
  std::size_t D = 0;
  for (const auto& aj : a) D = std::max(D, aj.empty() ? 0 : aj.size() - 1);
  // powers of (1 + c t)
  std::vector<std::vector<F>> pw(D + a.size() + 1);
  pw[0] = {F(1)};
  for (std::size_t e = 1; e < pw.size(); ++e) {
    pw[e].assign(e + 1, F(0));
    for (std::size_t i = 0; i < pw[e - 1].size(); ++i) {
      pw[e][i] += pw[e - 1][i];
      pw[e][i + 1] += c * pw[e - 1][i];
    }
  }
  MomentEquation out;
  out.a.resize(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    std::vector<F> r(D + j + 1, F(0));
    for (std::size_t i = 0; i < a[j].size(); ++i) {
      if (a[j][i] == 0) continue;
      const auto& p = pw[D - i + j];
      for (std::size_t l = 0; l < p.size(); ++l) r[i + l] += a[j][i] * p[l];
    }
    out.a[j] = std::move(r);
  }
  return out;
}

template <class F>
std::vector<F> MomentEquation<F>::solve(int K) const {
  if (a.size() > 3) throw CapabilityError("moment equations of degree above 2 are not supported");
  auto co = [&](std::size_t j, int i) -> F {
    if (j >= a.size() || i < 0 || static_cast<std::size_t>(i) >= a[j].size()) return F(0);
    return a[j][i];
  };
  int deg = 0;
  for (const auto& aj : a) deg = std::max(deg, static_cast<int>(aj.size()) - 1);
  if (co(0, 0) + co(1, 0) + co(2, 0) != 0) throw DomainError("moment equation does not vanish at H = 1");
  F dnm = F(2) * co(2, 0) + co(1, 0);
  if (dnm == 0) throw DomainError("moment equation is singular at the origin");
  std::vector<F> h(static_cast<std::size_t>(K) + 1, F(0)), sq(static_cast<std::size_t>(K) + 1, F(0));
  h[0] = F(1);
  sq[0] = F(1);
  for (int k = 1; k <= K; ++k) {
    F part(0);
    for (int l = 1; l < k; ++l) part += h[l] * h[k - l];
    F r = co(2, 0) * part + co(0, k);
    for (int i = 1; i <= std::min(k, deg); ++i) r += co(2, i) * sq[k - i] + co(1, i) * h[k - i];
    h[k] = -r / dnm;
    sq[k] = part + F(2) * h[k];
  }
  return h;
}

template <class F>
std::vector<F> free_cumulants_from_moments(const std::vector<F>& m) {
  int N = static_cast<int>(m.size());
  if (N == 0) return {};
  TruncatedSeries<F> M(N);
  for (int k = 1; k <= N; ++k) M[k] = m[k - 1];
  auto w = (M + F(1)).times_z();
  for (int k = 1; k <= N; ++k) w[k] = k == 1 ? F(1) : m[k - 2];
  auto C = compose(M, revert(w));
  return std::vector<F>(C.coeffs().begin() + 1, C.coeffs().end());
}

template <class F>
std::vector<F> moments_from_free_cumulants(const std::vector<F>& c) {
  int N = static_cast<int>(c.size());
  if (N == 0) return {};
  TruncatedSeries<F> C(N), M(N);
  for (int k = 1; k <= N; ++k) C[k] = c[k - 1];
  for (int it = 0; it < N; ++it) {
    auto w = (M + F(1)).times_z();
    M = compose(C, w);
  }
  return std::vector<F>(M.coeffs().begin() + 1, M.coeffs().end());
}

template <class F>
SpectralDistribution<F> SpectralDistribution<F>::from_moments(std::vector<F> moments) {
  SpectralDistribution d;
  d.cumulants_ = free_cumulants_from_moments(moments);
  d.moments_ = std::move(moments);
  return d;
}

template <class F>
SpectralDistribution<F> SpectralDistribution<F>::from_free_cumulants(std::vector<F> cumulants) {
  SpectralDistribution d;
  d.moments_ = moments_from_free_cumulants(cumulants);
  d.cumulants_ = std::move(cumulants);
  return d;
}

template <class F>
F SpectralDistribution<F>::moment(int k) const {
  if (k < 0) throw DomainError("negative moment index");
  if (k == 0) return F(1);
  if (k <= order()) return moments_[k - 1];
  if (equation_) return equation_->solve(k)[k];
  throw CapabilityError("moment " + std::to_string(k) + " beyond the law's order " + std::to_string(order()));
}

template <class F>
const F& SpectralDistribution<F>::free_cumulant(int k) const {
  if (k < 1 || k > order())
    throw CapabilityError("free cumulant " + std::to_string(k) + " outside 1.." + std::to_string(order()));
  return cumulants_[k - 1];
}

template <class F>
std::vector<F> SpectralDistribution<F>::centered_moments(const F& c, int K) const {
  if (K <= order()) {
    std::vector<F> out(static_cast<std::size_t>(K) + 1, F(0));
    std::vector<F> cp(static_cast<std::size_t>(K) + 1, F(1));
    for (int i = 1; i <= K; ++i) cp[i] = cp[i - 1] * (-c);
    for (int k = 0; k <= K; ++k) {
      F b(1);
      for (int i = 0; i <= k; ++i) {
        out[k] += b * moment(i) * cp[k - i];
        b = b * F(k - i) / F(i + 1);
      }
    }
    return out;
  }
  if (!equation_)
    throw CapabilityError("law '" + label() + "' has order " + std::to_string(order()) + " but " +
                          std::to_string(K) + " moments were requested");
  if (c == 0) return equation_->solve(K);
  return equation_->shifted(c).solve(K);
}

template <class F>
std::optional<F> SpectralDistribution<F>::param(const std::string& name) const {
  for (const auto& p : params_)
    if (p.name == name) return p.value;
  return std::nullopt;
}

template <class F>
std::string SpectralDistribution<F>::label() const {
  std::string out = law_kind_name(kind_) + "(";
  for (std::size_t i = 0; i < params_.size(); ++i)
    out += (i ? ", " : "") + params_[i].name + "=" + format_short(params_[i].value);
  return out + ")";
}

template <class F>
SpectralDistribution<F>& SpectralDistribution<F>::set_label(LawKind kind, std::vector<LawParam<F>> params) {
  kind_ = kind;
  params_ = std::move(params);
  return *this;
}

template <class F>
SpectralDistribution<F>& SpectralDistribution<F>::set_support(SupportHint<F> hint) {
  support_ = std::move(hint);
  return *this;
}

template <class F>
SpectralDistribution<F>& SpectralDistribution<F>::set_equation(MomentEquation<F> eq) {
  equation_ = std::move(eq);
  return *this;
}

template <class F>
SpectralDistribution<F> SpectralDistribution<F>::truncated(int N) const {
  if (N > order()) return with_order(N);
  SpectralDistribution d = *this;
  d.moments_.resize(N);
  d.cumulants_.resize(N);
  return d;
}

template <class F>
SpectralDistribution<F> SpectralDistribution<F>::with_order(int N) const {
  if (N <= order()) return truncated(N);
  if (!equation_) throw CapabilityError("cannot extend law '" + label() + "' beyond order " + std::to_string(order()));
  auto h = equation_->solve(N);
  SpectralDistribution d = *this;
  d.moments_.assign(h.begin() + 1, h.end());
  d.cumulants_ = free_cumulants_from_moments(d.moments_);
  return d;
}

template <class F>
TruncatedSeries<F> moment_series_from_S(const TruncatedSeries<F>& S) {
  int N = S.order();
  auto inv = (S / (TruncatedSeries<F>::variable(N) + F(1))).times_z();
  return revert(inv);
}

template <class F>
SpectralDistribution<F> make_free_poisson(const F& alpha, const F& lambda, int N) {
  if (!(alpha > 0) || !(lambda > 0)) throw DomainError("free Poisson needs alpha > 0 and lambda > 0");
  if (N < 1) throw DomainError("order must be positive");
  // S(z) = 1/(alpha lambda + alpha z)
  TruncatedSeries<F> den(N);
  den[0] = alpha * lambda;
  if (N >= 1) den[1] = alpha;
  auto S = TruncatedSeries<F>::constant(F(1), N) / den;
  auto M = moment_series_from_S(S);
  auto d = SpectralDistribution<F>::from_moments(std::vector<F>(M.coeffs().begin() + 1, M.coeffs().end()));
  d.set_label(LawKind::free_poisson, {{"alpha", alpha}, {"lambda", lambda}});
  MomentEquation<F> eq;
  eq.a = {{F(1)}, {F(-1), alpha * (lambda - F(1))}, {F(0), alpha}};
  d.set_equation(eq);
  Real a = as_real(alpha), l = as_real(lambda);
  SupportHint<F> hint;
  hint.continuous = true;
  hint.lo = lower_bound_of<F>(a * mp::pow(1 - mp::sqrt(l), 2));
  hint.hi = upper_bound_of<F>(a * mp::pow(1 + mp::sqrt(l), 2));
  if (lambda < F(1)) hint.atoms.push_back({F(0), F(1) - lambda});
  d.set_support(hint);
  return d;
}

template <class F>
SpectralDistribution<F> make_free_binomial(const F& sigma, const F& theta, int N) {
  F s = sigma + theta;
  if (s - F(1) == 0 || !(s / (s - F(1)) > 0) || !(sigma * theta / (s - F(1)) > 0))
    throw DomainError("free binomial parameters must satisfy (sigma+theta)/(sigma+theta-1) > 0 and "
                      "sigma*theta/(sigma+theta-1) > 0");
  if (N < 1) throw DomainError("order must be positive");
  // S(z) = 1 + theta/(sigma + z)
  TruncatedSeries<F> den(N);
  den[0] = sigma;
  if (N >= 1) den[1] = F(1);
  if (sigma == 0) throw DomainError("free binomial S-transform needs sigma != 0");
  auto S = TruncatedSeries<F>::constant(theta, N) / den + F(1);
  auto M = moment_series_from_S(S);
  auto d = SpectralDistribution<F>::from_moments(std::vector<F>(M.coeffs().begin() + 1, M.coeffs().end()));
  d.set_label(LawKind::free_binomial, {{"sigma", sigma}, {"theta", theta}});
  MomentEquation<F> eq;
  eq.a = {{s - F(1)}, {F(2) - s, sigma - F(1)}, {F(-1), F(1)}};
  d.set_equation(eq);
  Real rs = as_real(sigma), rt = as_real(theta), rsum = rs + rt;
  Real u = mp::sqrt(rs / rsum * (1 - 1 / rsum)), v = mp::sqrt(1 / rsum * (1 - rs / rsum));
  SupportHint<F> hint;
  hint.continuous = true;
  hint.lo = std::max(F(0), lower_bound_of<F>((u - v) * (u - v)));
  hint.hi = std::min(F(1), upper_bound_of<F>((u + v) * (u + v)));
  if (sigma > 0 && sigma < F(1)) hint.atoms.push_back({F(0), F(1) - sigma});
  if (theta > 0 && theta < F(1)) hint.atoms.push_back({F(1), F(1) - theta});
  d.set_support(hint);
  return d;
}

template <class F>
SpectralDistribution<F> make_bernoulli(const F& p, const F& a, const F& b, int N) {
  if (p < 0 || p > F(1)) throw DomainError("Bernoulli weight must lie in [0, 1]");
  if (N < 1) throw DomainError("order must be positive");
  std::vector<F> m(N);
  F ak(1), bk(1);
  for (int k = 1; k <= N; ++k) {
    ak *= a;
    bk *= b;
    m[k - 1] = p * ak + (F(1) - p) * bk;
  }
  auto d = SpectralDistribution<F>::from_moments(std::move(m));
  d.set_label(LawKind::bernoulli, {{"p", p}, {"a", a}, {"b", b}});
  MomentEquation<F> eq;
  // (1-at)(1-bt) H - [p(1-bt) + (1-p)(1-at)] = 0
  eq.a = {{F(-1), p * b + (F(1) - p) * a}, {F(1), -(a + b), a * b}};
  d.set_equation(eq);
  SupportHint<F> hint;
  if (p > 0) hint.atoms.push_back({a, p});
  if (p < F(1)) hint.atoms.push_back({b, F(1) - p});
  d.set_support(hint);
  return d;
}

template <class F>
SpectralDistribution<F> make_point(const F& c, int N) {
  if (N < 1) throw DomainError("order must be positive");
  std::vector<F> m(N);
  F ck(1);
  for (int k = 1; k <= N; ++k) m[k - 1] = ck *= c;
  auto d = SpectralDistribution<F>::from_moments(std::move(m));
  d.set_label(LawKind::point, {{"c", c}});
  MomentEquation<F> eq;
  eq.a = {{F(-1)}, {F(1), -c}};
  d.set_equation(eq);
  SupportHint<F> hint;
  hint.atoms.push_back({c, F(1)});
  d.set_support(hint);
  return d;
}

template <class F>
TruncatedSeries<F> transform_series(const SpectralDistribution<F>& d, Transform which, int N) {
  int need = which == Transform::S ? N + 1 : N;
  TruncatedSeries<F> M(need);
  for (int k = 1; k <= need; ++k) M[k] = d.moment(k);
  switch (which) {
    case Transform::M: return M;
    case Transform::eta: return M / (M + F(1));
    case Transform::S: {
      if (M[1] == 0) throw ReversionDomainError("S-transform needs a nonzero mean");
      auto g = revert(M).over_z();
      return g * (TruncatedSeries<F>::variable(N) + F(1));
    }
  }
  return M;
}

template <class F>
SpectralDistribution<F> free_convolve(const SpectralDistribution<F>& a, const SpectralDistribution<F>& b) {
  if (a.order() != b.order())
    throw DimensionError("free convolution of laws with orders " + std::to_string(a.order()) + " and " +
                         std::to_string(b.order()));
  std::vector<F> c(a.order());
  for (int k = 1; k <= a.order(); ++k) c[k - 1] = a.free_cumulant(k) + b.free_cumulant(k);
  return SpectralDistribution<F>::from_free_cumulants(std::move(c));
}

template <class F>
std::pair<F, Real> expansion_disc(const SpectralDistribution<F>& d) {
  if (!d.support()) throw CapabilityError("law '" + d.label() + "' has no support hint");
  auto [lo, hi] = d.support()->hull();
  F c = (lo + hi) / F(2);
  return {c, as_real(hi - c)};
}

template <class F>
int neumann_degree(const FunctionDescriptor<F>& fn, const F& centre, const Real& radius, const Real& tol,
                   int max_degree) {
  if (fn.is_polynomial()) return std::max(fn.degree(), 0);
  int lo = 0, hi = 1;
  while (fn.tail_bound(hi, centre, radius) > tol) {
    lo = hi;
    hi *= 2;
    if (hi > 2 * max_degree)
      throw DivergenceError("Neumann degree above " + std::to_string(max_degree) + " needed for tolerance");
  }
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (fn.tail_bound(mid, centre, radius) > tol)
      lo = mid;
    else
      hi = mid;
  }
  if (hi > max_degree) throw DivergenceError("Neumann degree above " + std::to_string(max_degree) + " needed");
  return hi;
}

namespace {

template <class F>
Expectation<F> quadrature(const SpectralDistribution<F>&, const FunctionDescriptor<F>&, const ExpectOptions&) {
  throw CapabilityError("quadrature needs the float backend");
}

template <>
Expectation<Real> quadrature<Real>(const SpectralDistribution<Real>& d, const FunctionDescriptor<Real>& fn,
                                   const ExpectOptions& opts) {
  if (!d.support()) throw CapabilityError("law '" + d.label() + "' has no support data");
  const auto& hint = *d.support();
  Expectation<Real> out{Real(0), Real(0), 0};
  for (const auto& a : hint.atoms) out.value += a.mass * fn(a.location);
  if (!hint.continuous || d.kind() == LawKind::point || d.kind() == LawKind::bernoulli) return out;
  if (!fn.is_polynomial() && fn.pole() >= hint.lo && fn.pole() <= hint.hi)
    throw DivergenceError("function has a pole inside the support");
  const Real pi = mp::acos(Real(-1));
  Real lo, hi;
  std::function<Real(const Real&)> weight;  // density times sqrt-free factor, see below
  if (d.kind() == LawKind::free_poisson) {
    Real a = *d.param("alpha"), l = *d.param("lambda");
    lo = a * mp::pow(1 - mp::sqrt(l), 2);
    hi = a * mp::pow(1 + mp::sqrt(l), 2);
    // density = sqrt((x-lo)(hi-x)) / (2 pi a x)
    weight = [a, pi](const Real& x) { return 1 / (2 * pi * a * x); };
  } else if (d.kind() == LawKind::free_binomial) {
    Real s = *d.param("sigma"), t = *d.param("theta"), sum = s + t;
    Real u = mp::sqrt(s / sum * (1 - 1 / sum)), v = mp::sqrt(1 / sum * (1 - s / sum));
    lo = (u - v) * (u - v);
    hi = (u + v) * (u + v);
    weight = [sum, pi](const Real& x) { return sum / (2 * pi * x * (1 - x)); };
  } else {
    throw CapabilityError("no density available for law '" + d.label() + "'");
  }
  // x = m - h cos t; sqrt((x-lo)(hi-x)) dx = h^2 sin^2 t dt
  Real m = (lo + hi) / 2, h = (hi - lo) / 2;
  Real tol = opts.tolerance > 0 ? opts.tolerance : default_series_tolerance();
  auto rule = [&](int n) {
    Real s(0);
    for (int i = 0; i < n; ++i) {
      Real t = pi * (Real(i) + Real(1) / 2) / n;
      Real st = mp::sin(t);
      Real x = m - h * mp::cos(t);
      s += fn(x) * weight(x) * h * h * st * st;
    }
    return s * pi / n;
  };
  int n = 16, used = 16;
  Real prev = rule(n);
  Real diff(0);
  while (true) {
    n *= 2;
    used += n;
    if (used > 10000) break;
    Real cur = rule(n);
    diff = mp::abs(cur - prev);
    prev = cur;
    if (diff <= tol) break;
  }
  out.value += prev;
  out.error_bound = diff;
  out.degree = n;
  return out;
}

}  // namespace

template <class F>
Expectation<F> expect_function(const SpectralDistribution<F>& d, const FunctionDescriptor<F>& fn,
                               const ExpectOptions& opts) {
  switch (opts.method) {
    case ExpectMethod::exact_poly: {
      if (!fn.is_polynomial()) throw CapabilityError("exact evaluation needs a polynomial function");
      F v(0);
      const auto& c = fn.numerator();
      for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0) v += c[k] * d.moment(static_cast<int>(k));
      return {v, Real(0), fn.degree()};
    }
    case ExpectMethod::neumann: {
      auto [c, r] = expansion_disc(d);
      Real tol = opts.tolerance > 0 ? opts.tolerance : default_series_tolerance();
      int K = opts.degree >= 0 ? opts.degree : neumann_degree(fn, c, r, tol, opts.max_degree);
      auto a = fn.taylor(K, c);
      auto mu = d.centered_moments(c, K);
      F v(0);
      for (int k = 0; k <= K; ++k) v += a[k] * mu[k];
      return {v, fn.tail_bound(K, c, r), K};
    }
    case ExpectMethod::quadrature: return quadrature(d, fn, opts);
  }
  throw CapabilityError("unknown expectation method");
}

#define FCK_INSTANTIATE(F)                                                                               \
  template struct SupportHint<F>;                                                                        \
  template struct MomentEquation<F>;                                                                     \
  template class SpectralDistribution<F>;                                                                \
  template SpectralDistribution<F> make_free_poisson<F>(const F&, const F&, int);                       \
  template SpectralDistribution<F> make_free_binomial<F>(const F&, const F&, int);                      \
  template SpectralDistribution<F> make_bernoulli<F>(const F&, const F&, const F&, int);                \
  template SpectralDistribution<F> make_point<F>(const F&, int);                                        \
  template std::vector<F> free_cumulants_from_moments<F>(const std::vector<F>&);                        \
  template std::vector<F> moments_from_free_cumulants<F>(const std::vector<F>&);                        \
  template TruncatedSeries<F> transform_series<F>(const SpectralDistribution<F>&, Transform, int);       \
  template TruncatedSeries<F> moment_series_from_S<F>(const TruncatedSeries<F>&);                       \
  template SpectralDistribution<F> free_convolve<F>(const SpectralDistribution<F>&,                      \
                                                    const SpectralDistribution<F>&);                     \
  template std::pair<F, Real> expansion_disc<F>(const SpectralDistribution<F>&);                         \
  template int neumann_degree<F>(const FunctionDescriptor<F>&, const F&, const Real&, const Real&, int); \
  template Expectation<F> expect_function<F>(const SpectralDistribution<F>&, const FunctionDescriptor<F>&, \
                                             const ExpectOptions&);

FCK_INSTANTIATE(Rational)
FCK_INSTANTIATE(Real)

}  // namespace fck
