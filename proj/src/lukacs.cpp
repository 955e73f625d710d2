#include "fck/lukacs.hpp"

#include <map>
#include <mutex>

#include "fck/condexp.hpp"
#include "fck/subordination.hpp"
#include "fck/sumletters.hpp"

namespace fck {

std::string regression_mode_name(RegressionMode m) { return m == RegressionMode::th1 ? "th1" : "th2"; }

template <class F>
void check_constants(const RegressionConstants<F>& rc, RegressionMode mode) {
  if (!(rc.alpha > 0)) throw DomainError("inadmissible constants: alpha > 0 fails (alpha = " + format(rc.alpha) + ")");
  if (mode == RegressionMode::th1) {
    if (!rc.b || !rc.c) throw PreconditionError("th1 mode needs b and c");
    const F &b = *rc.b, &c = *rc.c;
    if (!(b > 0)) throw DomainError("inadmissible constants: b > 0 fails (b = " + format(b) + ")");
    if (!(c > 0)) throw DomainError("inadmissible constants: c > 0 fails (c = " + format(c) + ")");
    if (!(b * c > 1)) throw DomainError("inadmissible constants: bc > 1 fails (bc = " + format(F(b * c)) + ")");
  } else {
    if (!rc.c || !rc.d) throw PreconditionError("th2 mode needs c and d");
    const F &c = *rc.c, &d = *rc.d;
    if (!(c > 0)) throw DomainError("inadmissible constants: c > 0 fails (c = " + format(c) + ")");
    if (!(d > c * c)) throw DomainError("inadmissible constants: d > c^2 fails (d = " + format(d) + ")");
  }
}

template <class F>
LawParams<F> params_from_constants(const RegressionConstants<F>& rc, RegressionMode mode) {
  check_constants(rc, mode);
  const F& a = rc.alpha;
  if (mode == RegressionMode::th1) {
    F bc = *rc.b * *rc.c;
    return {a / (bc - 1), bc / (bc - 1), (bc - 1) / *rc.c, (bc + a) / (bc - 1)};
  }
  const F &c = *rc.c, &d = *rc.d;
  F c2 = c * c, gap = d - c2;
  return {c2 * a / gap, d / gap, gap / (c2 * c), (c2 * a + d) / gap};
}

template <class F>
RegressionConstants<F> constants_from_params(const F& sigma, const F& theta, const F& alpha_v) {
  if (!(sigma > 0) || !(theta > 1) || !(alpha_v > 0))
    throw DomainError("forward parameters need sigma > 0, theta > 1, alpha_v > 0");
  RegressionConstants<F> rc;
  rc.alpha = sigma / (theta - 1);
  F c = F(1) / ((theta - 1) * alpha_v);
  F b = theta * alpha_v;
  rc.b = b;
  rc.c = c;
  rc.d = b * c * c * c;
  return rc;
}

template <class F>
CharacterizationResult<F> solve_regression_system(const RegressionConstants<F>& rc, RegressionMode mode, int N) {
  check_constants(rc, mode);
  const F& a = rc.alpha;
  const F& c = *rc.c;
  F b = mode == RegressionMode::th1 ? *rc.b : *rc.d / (c * c * c);
  using S = TruncatedSeries<F>;
  S s = S::variable(N), one = S::constant(F(1), N);
  // b(1+s) y - (1+s) x = -s ;  (s - alpha) y - c s x = -c s   with x = M_U^<-1>, y = M_UV^<-1>
  S a11 = (one + s) * b, a12 = -(one + s), r1 = -s;
  S a21 = s - a, a22 = s * (-c), r2 = s * (-c);
  S det = a11 * a22 - a12 * a21;
  CharacterizationResult<F> out;
  out.M_UV_inv = (r1 * a22 - a12 * r2) / det;
  out.M_U_inv = (a11 * r2 - a21 * r1) / det;
  S onep = (one + s).truncated(N - 1);
  out.S_U = onep * out.M_U_inv.over_z();
  out.S_UV = onep * out.M_UV_inv.over_z();
  out.S_V = out.S_UV / out.S_U;
  out.params = params_from_constants(rc, mode);
  return out;
}

template <class F>
ClosedForms<F> closed_s_transforms(const F& alpha, const F& b, const F& c, int N) {
  using S = TruncatedSeries<F>;
  F bc = b * c;
  S den = S::variable(N) * (bc - 1) + alpha;
  ClosedForms<F> out;
  out.S_U = S::constant(bc, N) / den + F(1);
  out.S_UV = S::constant(c, N) / den;
  out.S_V = S::constant(c, N) / (den + bc);
  return out;
}

namespace {

template <class F>
std::string constants_string(const RegressionConstants<F>& rc) {
  std::string s = "alpha=" + format(rc.alpha);
  if (rc.b) s += " b=" + format(*rc.b);
  if (rc.c) s += " c=" + format(*rc.c);
  if (rc.d) s += " d=" + format(*rc.d);
  return s;
}

template <class F>
Real tol_of() {
  if constexpr (std::is_same_v<F, Rational>)
    return Real(0);
  else
    return default_series_tolerance();
}

}  // namespace

template <class F>
Report regression_check(const RegressionConstants<F>& rc, RegressionMode mode, int N) {
  Report rep;
  std::string mod = "lukacs", params = regression_mode_name(mode) + " " + constants_string(rc);
  try {
    check_constants(rc, mode);
  } catch (const DomainError& e) {
    rep.add({mod, regression_mode_name(mode) + ".admissible", "regression constants", params, "", "", "", "exact",
             false, e.what()});
    return rep;
  }
  Real tol = tol_of<F>();
  auto res = solve_regression_system(rc, mode, N + 1);
  const F& c = *rc.c;
  F b = mode == RegressionMode::th1 ? *rc.b : *rc.d / (c * c * c);
  auto closed = closed_s_transforms(rc.alpha, b, c, N);
  std::string tag = regression_mode_name(mode);
  rep.add(compare_series_row(mod, tag + ".S_U", "S-transform of U (closed form)", params, res.S_U, closed.S_U, tol));
  rep.add(compare_series_row(mod, tag + ".S_UV", "S-transform of UV (closed form)", params, res.S_UV, closed.S_UV, tol));
  rep.add(compare_series_row(mod, tag + ".S_V", "S-transform of V (closed form)", params, res.S_V, closed.S_V, tol));
  rep.add(compare_series_row(mod, tag + ".multiplicative", "S_UV = S_U S_V", params, res.S_UV,
                             (res.S_U * res.S_V).truncated(res.S_UV.order()), tol));
  const auto& p = res.params;
  rep.add(compare_row(mod, tag + ".lambda_sum", "lambda_V = sigma + theta", params, p.lambda_v, F(p.sigma + p.theta), tol));
  auto u = make_free_binomial(p.sigma, p.theta, N + 2);
  auto v = make_free_poisson(p.alpha_v, p.lambda_v, N + 2);
  rep.add(compare_series_row(mod, tag + ".law_U", "free binomial law from the parameter map", params,
                             transform_series(u, Transform::S, N), closed.S_U, tol));
  rep.add(compare_series_row(mod, tag + ".law_V", "free Poisson law from the parameter map", params,
                             transform_series(v, Transform::S, N), closed.S_V, tol));
  auto back = constants_from_params(p.sigma, p.theta, p.alpha_v);
  rep.add(compare_row(mod, tag + ".roundtrip_alpha", "parameter maps round trip", params, back.alpha, rc.alpha, tol));
  rep.add(compare_row(mod, tag + ".roundtrip_c", "parameter maps round trip", params, *back.c, c, tol));
  rep.add(compare_row(mod, tag + ".roundtrip_b", "parameter maps round trip", params, *back.b, b, tol));
  if (mode == RegressionMode::th2) {
    RegressionConstants<F> r1{rc.alpha, b, c, {}};
    auto one = solve_regression_system(r1, RegressionMode::th1, N + 1);
    rep.add(compare_series_row(mod, "th2.same_system_S_U", "th2 with b = d/c^3 equals th1", params, res.S_U, one.S_U, tol));
    rep.add(compare_series_row(mod, "th2.same_system_S_V", "th2 with b = d/c^3 equals th1", params, res.S_V, one.S_V, tol));
    auto p1 = params_from_constants(r1, RegressionMode::th1);
    rep.add(compare_row(mod, "th2.same_sigma", "th2 with b = d/c^3 equals th1", params, p.sigma, p1.sigma, tol));
    rep.add(compare_row(mod, "th2.same_alpha_v", "th2 with b = d/c^3 equals th1", params, p.alpha_v, p1.alpha_v, tol));
  }
  return rep;
}

namespace {

template <class F>
Letter<F> lt(Tag t, int k) {
  return power_letter<F>(t, k);
}

template <class F>
void push_uv(Word<F>& w, int n) {
  for (int i = 0; i < n; ++i) {
    w.push_back(lt<F>(Tag::left, 1));
    w.push_back(lt<F>(Tag::right, 1));
  }
}

template <class F>
Word<F> uv_word(int n) {
  Word<F> w;
  push_uv(w, n);
  return w;
}

Word<Rational> gen_word(const std::vector<GenPower>& g) {
  Word<Rational> w;
  for (auto x : g) w.push_back(power_letter<Rational>(x.gen == 0 ? Tag::left : Tag::right, x.power));
  return w;
}

std::string rp(const Rational& s, const Rational& t, const Rational& a) {
  return "sigma=" + format(s) + " theta=" + format(t) + " alpha_v=" + format(a);
}

}  // namespace

Report verify_regression_forward(const Rational& sigma, const Rational& theta, const Rational& alpha_v, int n_max) {
  Report rep;
  const std::string mod = "lukacs";
  auto rc = constants_from_params(sigma, theta, alpha_v);
  std::string params = rp(sigma, theta, alpha_v);
  Rational lambda_v = sigma + theta;
  int order = 2 * n_max + 4;
  FreeProductEngine<Rational> ex(make_free_binomial(sigma, theta, order), make_free_poisson(alpha_v, lambda_v, order));
  const Rational b = *rc.b, c = *rc.c, d = *rc.d;
  // mean regression, polynomial and exact
  for (int n = 0; n <= n_max; ++n) {
    Word<Rational> w{{Tag::left, FunctionDescriptor<Rational>::poly({Rational(1), Rational(-1)})}, lt<Rational>(Tag::right, 1)};
    push_uv(w, n);
    Rational lhs = ex.joint_moment(w);
    Rational rhs = b * (n == 0 ? Rational(1) : ex.joint_moment(uv_word<Rational>(n)));
    rep.add(compare_row(mod, "forward.mean.n" + std::to_string(n), "mean regression constant b", params, lhs, rhs, Real(0)));
  }
  // float checks with certified expansions of (1-U)^-1 and V^-1
  Real s = to_real(sigma), t = to_real(theta), av = to_real(alpha_v);
  auto ur = make_free_binomial(s, t, order), vr = make_free_poisson(av, s + t, order);
  auto alpha = expectation_of(ur, FunctionDescriptor<Real>::psi());
  rep.add(compare_row(mod, "forward.alpha", "alpha = phi(Psi_U) from the law of U", params, alpha.value,
                      to_real(rc.alpha), alpha.error_bound + Real("1e-20")));
  EngineOptions opts;
  opts.letter_tolerance = Real("1e-30");
  FreeProductEngine<Real> fe(ur, vr, opts);
  Letter<Real> R{Tag::left, FunctionDescriptor<Real>::inv1m()};
  Letter<Real> Vi{Tag::right, FunctionDescriptor<Real>::inverse()};
  for (int n = 0; n <= n_max; ++n) {
    Word<Real> w{R};
    if (n == 0) {
      w.push_back(Vi);
    } else {
      push_uv(w, n - 1);
      w.push_back(lt<Real>(Tag::left, 1));
    }
    auto lhs = fe.joint_moment_bounded(w);
    Real rhs = to_real(c) * (n == 0 ? Real(1) : fe.joint_moment(uv_word<Real>(n)));
    rep.add(compare_row(mod, "forward.inverse.n" + std::to_string(n), "inverse regression constant c", params, lhs.value,
                        rhs, lhs.error_bound + Real("1e-20")));
  }
  for (int n = 0; n <= n_max; ++n) {
    Word<Real> w{R, Vi, R};
    if (n == 0) {
      w.push_back(Vi);
    } else {
      push_uv(w, n - 1);
      w.push_back(lt<Real>(Tag::left, 1));
    }
    auto lhs = fe.joint_moment_bounded(w);
    Real rhs = to_real(d) * (n == 0 ? Real(1) : fe.joint_moment(uv_word<Real>(n)));
    rep.add(compare_row(mod, "forward.inverse2.n" + std::to_string(n), "inverse-square regression constant d", params,
                        lhs.value, rhs, lhs.error_bound + Real("1e-20")));
  }
  return rep;
}

MomentOracle<Rational> dual_pair_oracle(const SpectralDistribution<Rational>& u, const SpectralDistribution<Rational>& v) {
  auto e = std::make_shared<FreeProductEngine<Rational>>(u, v);
  auto cache = std::make_shared<std::pair<std::mutex, std::map<ArgWord, Rational>>>();
  return [e, cache](std::span<const ArgId> w) {
    ArgWord key = min_rotation(w);
    {
      std::lock_guard lock(cache->first);
      auto it = cache->second.find(key);
      if (it != cache->second.end()) return it->second;
    }
    std::vector<int> ys;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] == 1) ys.push_back(static_cast<int>(i));
    Rational total(0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ys.size()); ++mask) {
      // bit set: the Y1 factor contributes -X1, else V
      std::vector<HalfPower> hw;
      int sign = 1;
      std::size_t yi = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        bool x = w[i] == 0;
        if (!x) {
          x = (mask >> yi) & 1;
          if (x) sign = -sign;
          ++yi;
        }
        if (x)
          hw.insert(hw.end(), {{1, 1}, {0, 2}, {1, 1}});
        else
          hw.push_back({1, 2});
      }
      Rational m = e->joint_moment(gen_word(reduce_trace_word(hw)));
      total += sign > 0 ? m : Rational(-m);
    }
    std::lock_guard lock(cache->first);
    cache->second.emplace(key, total);
    return total;
  };
}

Report dual_lukacs_check(const Rational& lambda, const Rational& kappa, const Rational& alpha, int max_order,
                         int moment_order) {
  Report rep;
  const std::string mod = "lukacs";
  std::string params = "lambda=" + format(lambda) + " kappa=" + format(kappa) + " alpha=" + format(alpha);
  if (!(lambda > 0) || !(kappa > 0) || !(alpha > 0)) throw DomainError("dual check needs positive parameters");
  int order = std::max(2 * max_order, moment_order) + 2;
  auto oracle = dual_pair_oracle(make_free_binomial(lambda, kappa, order), make_free_poisson(alpha, lambda + kappa, order));
  auto x1 = make_free_poisson(alpha, lambda, moment_order);
  auto y1 = make_free_poisson(alpha, kappa, moment_order);
  for (int k = 1; k <= moment_order; ++k) {
    ArgWord xs(k, 0), ys(k, 1);
    rep.add(compare_row(mod, "dual.X1.m" + std::to_string(k), "X1 is free Poisson mu(alpha, lambda)", params, oracle(xs),
                        x1.moment(k), Real(0)));
    rep.add(compare_row(mod, "dual.Y1.m" + std::to_string(k), "Y1 is free Poisson mu(alpha, kappa)", params, oracle(ys),
                        y1.moment(k), Real(0)));
  }
  ArgNamer namer = [](ArgId a) { return std::string(a == 0 ? "X1" : "Y1"); };
  auto fr = freeness_report(oracle, {0}, {1}, max_order, Real(0), namer);
  for (const auto& r : fr.rows)
    rep.add({mod, "dual.mixed." + r.word, "X1 and Y1 are free", params, format(r.value), "0", format(r.value), "exact",
             r.vanishes, ""});
  if (lambda == kappa) {
    for (int k = 1; k <= moment_order; ++k) {
      ArgWord xs(k, 0), ys(k, 1);
      rep.add(compare_row(mod, "dual.symmetry.m" + std::to_string(k), "lambda = kappa symmetry", params, oracle(xs),
                          oracle(ys), Real(0)));
    }
  }
  return rep;
}

namespace {

struct DirectContext {
  PoissonSumEngine<Real> engine;
  InverseApprox inv;
  Real norm_x, norm_v, norm_inv;
  std::mutex mutex;
  std::map<ArgWord, std::pair<Real, Real>> cache;
};

std::vector<Real> shifted_power(int k, const Real& m) {
  // (Z + m)^k in powers of Z
  std::vector<Real> c{Real(1)};
  for (int i = 0; i < k; ++i) {
    std::vector<Real> n(c.size() + 1, Real(0));
    for (std::size_t j = 0; j < c.size(); ++j) {
      n[j] += c[j] * m;
      n[j + 1] += c[j];
    }
    c = std::move(n);
  }
  return c;
}

// value and error bound of phi(word in U = 0, V = 1)
std::pair<Real, Real> direct_moment(DirectContext& ctx, std::span<const ArgId> w) {
  ArgWord key = min_rotation(w);
  {
    std::lock_guard lock(ctx.mutex);
    auto it = ctx.cache.find(key);
    if (it != ctx.cache.end()) return it->second;
  }
  std::vector<HalfPower> hw;
  for (ArgId a : w) {
    if (a == 0)
      hw.insert(hw.end(), {{1, -1}, {0, 2}, {1, -1}});
    else
      hw.push_back({1, 2});
  }
  std::vector<SumLetter<Real>> letters;
  Real norm(1);
  int approx = 0;
  for (auto g : reduce_trace_word(hw)) {
    if (g.gen == 0) {
      std::vector<Real> c(g.power + 1, Real(0));
      c[g.power] = 1;
      letters.push_back({false, c});
      norm *= mp::pow(ctx.norm_x, g.power);
    } else if (g.power > 0) {
      letters.push_back({true, shifted_power(g.power, ctx.inv.centre)});
      norm *= mp::pow(ctx.norm_v, g.power);
    } else {
      for (int i = 0; i < -g.power; ++i) {
        letters.push_back({true, ctx.inv.coeffs});
        norm *= ctx.norm_inv;
        ++approx;
      }
    }
  }
  Real value = ctx.engine.moment(letters);
  Real bound = approx == 0 ? Real(0) : Real(approx) * ctx.inv.error_bound * norm / ctx.norm_inv;
  std::lock_guard lock(ctx.mutex);
  ctx.cache.emplace(key, std::make_pair(value, bound));
  return {value, bound};
}

}  // namespace

Report direct_lukacs_check(const Rational& lambda, const Rational& kappa, const Rational& alpha, int max_order,
                           int approx_degree, const Real& tolerance) {
  Report rep;
  const std::string mod = "lukacs";
  std::string params = "lambda=" + format(lambda) + " kappa=" + format(kappa) + " alpha=" + format(alpha) +
                       " approx_degree=" + std::to_string(approx_degree);
  if (!(lambda > 0) || !(kappa > 0) || !(alpha > 0)) throw DomainError("direct check needs positive parameters");
  if (!(lambda + kappa > 1)) throw DomainError("direct check needs lambda + kappa > 1 (V must be invertible)");
  // V-marginal by cumulant addition, exact
  const int vo = 8;
  auto vsum = free_convolve(make_free_poisson(alpha, lambda, vo), make_free_poisson(alpha, kappa, vo));
  auto vlaw = make_free_poisson(alpha, lambda + kappa, vo);
  for (int k = 1; k <= vo; ++k)
    rep.add(compare_row(mod, "direct.V.m" + std::to_string(k), "X + Y is free Poisson mu(alpha, lambda + kappa)", params,
                        vsum.moment(k), vlaw.moment(k), Real(0)));

  Real a = to_real(alpha), l = to_real(lambda), k = to_real(kappa);
  auto vr = make_free_poisson(a, l + k, 4);
  auto [lo, hi] = vr.support()->hull();
  auto xr = make_free_poisson(a, l, 4);
  Real xhi = xr.support()->hull().second;
  auto inv = chebyshev_inverse(lo, hi, approx_degree);
  DirectContext ctx{PoissonSumEngine<Real>(a, l, a, k, inv.centre), inv, mp::abs(xhi), mp::abs(hi),
                    1 / lo + inv.error_bound, {}, {}};
  Real worst_bound(0);
  MomentOracle<Real> oracle = [&ctx, &worst_bound](std::span<const ArgId> w) {
    auto [v, b] = direct_moment(ctx, w);
    worst_bound = std::max(worst_bound, b);
    return v;
  };
  ArgWord uw{0}, vw{1}, uvw{0, 1};
  Real pu = oracle(uw), pv = oracle(vw), puv = oracle(uvw);
  rep.add(compare_row(mod, "direct.phiUV", "phi(UV) = phi(U) phi(V)", params, puv, Real(pu * pv), tolerance));
  ArgNamer namer = [](ArgId x) { return std::string(x == 0 ? "U" : "V"); };
  auto fr = freeness_report(oracle, {0}, {1}, max_order, tolerance, namer);
  for (const auto& r : fr.rows)
    rep.add({mod, "direct.mixed." + r.word, "U and V are free", params, short_decimal(r.value, 20), "0",
             short_decimal(mp::abs(r.value)), short_decimal(tolerance), r.vanishes, ""});
  if (worst_bound > tolerance)
    throw ResolutionError("inverse approximation error " + short_decimal(worst_bound) + " exceeds tolerance " +
                          short_decimal(tolerance) + "; increase approx_degree above " + std::to_string(approx_degree));
  rep.add({mod, "direct.approximation", "certified error of the V^-1 approximation", params, short_decimal(worst_bound),
           "0", short_decimal(worst_bound), short_decimal(tolerance), true,
           "Chebyshev tail bound " + short_decimal(inv.error_bound)});
  return rep;
}

Report algebraic_identity_checks(const SpectralDistribution<Rational>& u, const SpectralDistribution<Rational>& v,
                                 int N) {
  Report rep;
  const std::string mod = "lukacs";
  std::string params = u.label() + " " + v.label() + " N=" + std::to_string(N);
  FreeProductEngine<Rational> e(u, v);
  // W^{-1/2} (W^{1/2} T W^{1/2})^n W^{-1/2} = T^{1/2} (T^{1/2} W T^{1/2})^{n-1} T^{1/2}, paired with V^m
  for (int wgen = 0; wgen <= 1; ++wgen) {
    int tgen = 1 - wgen;
    std::string pair = wgen == 1 ? "(W,T)=(V,U)" : "(W,T)=(U,V)";
    for (int n = 1; n <= N; ++n)
      for (int m = 0; m <= 3; ++m) {
        std::vector<HalfPower> lhs{{wgen, -1}}, rhs{{tgen, 1}};
        for (int i = 0; i < n; ++i) lhs.insert(lhs.end(), {{wgen, 1}, {tgen, 2}, {wgen, 1}});
        lhs.push_back({wgen, -1});
        for (int i = 0; i < n - 1; ++i) rhs.insert(rhs.end(), {{tgen, 1}, {wgen, 2}, {tgen, 1}});
        rhs.push_back({tgen, 1});
        lhs.push_back({1, 2 * m});
        rhs.push_back({1, 2 * m});
        auto l = e.joint_moment(gen_word(reduce_trace_word(lhs)));
        auto r = e.joint_moment(gen_word(reduce_trace_word(rhs)));
        rep.add(compare_row(mod, "psi_word." + pair + ".n" + std::to_string(n) + ".m" + std::to_string(m),
                            "Psi conjugation word identity", params, l, r, Real(0)));
      }
  }
  // x(1-x)^-1 (tx/(1-tx) + 1) = (tx/(1-tx) - x/(1-x)) / (t - 1)
  {
    Rational worst(0);
    int count = 0;
    for (int xn = 1; xn <= 4; ++xn)
      for (int tn : {-3, -1, 1, 2, 3, 5, 7}) {
        Rational x(xn, 5), t(tn, 3);
        if (t == 1 || t * x == 1) continue;
        Rational lhs = x / (1 - x) * (t * x / (1 - t * x) + 1);
        Rational rhs = (t * x / (1 - t * x) - x / (1 - x)) / (t - 1);
        worst = std::max(worst, Rational(abs(lhs - rhs)));
        ++count;
      }
    rep.add({mod, "scalar_identity.grid", "scalar identity behind the inverse regression",
             std::to_string(count) + " rational points", "", "", format(worst), "exact", worst == 0, ""});
  }
  auto sig = u.param("sigma"), th = u.param("theta"), av = v.param("alpha"), lv = v.param("lambda");
  if (u.kind() == LawKind::free_binomial && v.kind() == LawKind::free_poisson && sig && th && av && lv &&
      *th > 1 && *lv == *sig + *th) {
    auto rc = constants_from_params(*sig, *th, *av);
    Subordinator<Rational> s(u, v);
    const auto& om = s.omega(OmegaRoute::boolean_series, N);
    TruncatedSeries<Rational> mu(N);
    for (int k = 1; k <= N; ++k) mu[k] = u.moment(k);
    auto M = compose(mu, om.omega2);
    auto z = TruncatedSeries<Rational>::variable(N);
    auto w1 = om.omega2 - Rational(1);
    const Rational &b = *rc.b, &c = *rc.c, &d = *rc.d;
    rep.add(compare_series_row(mod, "subordination.inverse_regression", "z(M_U(w2) - alpha) = c(w2 - 1) M_U(w2)", params,
                               z * (M - rc.alpha), w1 * M * c, Real(0)));
    rep.add(compare_series_row(mod, "subordination.mean_regression", "w2 + (w2 - 1) M_U(w2) = bz(M_U(w2) + 1)", params,
                               om.omega2 + w1 * M, z * (M + Rational(1)) * b, Real(0)));
    rep.add(compare_series_row(mod, "subordination.inverse_square", "w2 + (w2 - 1) M_U(w2) = (d/c^3) z (M_U(w2) + 1)",
                               params, om.omega2 + w1 * M, z * (M + Rational(1)) * Rational(d / (c * c * c)), Real(0)));
    rep.add(compare_series_row(mod, "subordination.product", "M_UV = M_U(w2)", params, M, s.product_moments(N), Real(0)));
  }
  return rep;
}

#define FCK_INSTANTIATE(F)                                                                                 \
  template void check_constants(const RegressionConstants<F>&, RegressionMode);                          \
  template LawParams<F> params_from_constants(const RegressionConstants<F>&, RegressionMode);            \
  template RegressionConstants<F> constants_from_params(const F&, const F&, const F&);                    \
  template CharacterizationResult<F> solve_regression_system(const RegressionConstants<F>&, RegressionMode, int); \
  template ClosedForms<F> closed_s_transforms(const F&, const F&, const F&, int);                        \
  template Report regression_check(const RegressionConstants<F>&, RegressionMode, int);

FCK_INSTANTIATE(Rational)
FCK_INSTANTIATE(Real)

}  // namespace fck
