#include "fck/verify.hpp"

#include <functional>

#include "fck/condexp.hpp"
#include "fck/distributions.hpp"
#include "fck/freeprod.hpp"
#include "fck/lukacs.hpp"
#include "fck/partitions.hpp"
#include "fck/series.hpp"
#include "fck/subordination.hpp"

namespace fck {

Real effective_tolerance(const RunConfig& cfg) {
  if (cfg.backend == Backend::exact) return Real(0);
  return cfg.tolerance ? *cfg.tolerance : default_tolerance();
}

Rational SeededRationals::positive(std::uint64_t P, std::uint64_t Q) {
  std::uint64_t p = rng_(), q = rng_();
  return Rational(static_cast<long>(1 + p % P), static_cast<long>(1 + q % Q));
}

Rational SeededRationals::signed_value(std::uint64_t S, std::uint64_t Q) {
  std::uint64_t p = rng_(), q = rng_();
  return Rational(static_cast<long>(p % (2 * S + 1)) - static_cast<long>(S), static_cast<long>(1 + q % Q));
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

MomentOracle<Rational> seeded_oracle(std::uint64_t seed) {
  return [seed](std::span<const ArgId> w) -> Rational {
    if (w.empty()) return Rational(1);
    std::uint64_t h = splitmix(seed);
    for (ArgId a : w) h = splitmix(h ^ (a + 0x100));
    h = splitmix(h ^ w.size());
    return Rational(static_cast<long>(h % 19) - 9, static_cast<long>((h >> 20) % 5) + 1);
  };
}

const std::vector<std::string>& suite_modules() {
  static const std::vector<std::string> m{"partitions",   "series",  "cumulants", "distributions",
                                          "freeprod",     "subordination", "condexp", "lukacs"};
  return m;
}

namespace {

std::string num(long long x) { return std::to_string(x); }

CheckRow bool_row(std::string module, std::string id, std::string anchor, std::string params, std::string lhs,
                  std::string rhs, bool pass) {
  return {std::move(module), std::move(id), std::move(anchor), std::move(params), lhs, rhs, pass ? "0" : "nonzero",
          "exact", pass, ""};
}

// ---- partitions

Report partitions_battery(const RunConfig& cfg) {
  Report rep;
  int nmax = std::min(std::max(cfg.order, 1), 10);
  std::vector<long long> catalan{1};
  for (int n = 1; n <= nmax; ++n) catalan.push_back(catalan.back() * 2 * (2 * n - 1) / (n + 1));
  for (int n = 1; n <= nmax; ++n) {
    long long nc = 0, in = 0, all = 0;
    for_each_partition(n, PartitionFamily::all, [&](std::span<const int> l) {
      ++all;
      nc += labels_noncrossing(l);
      in += labels_interval(l);
    });
    std::string p = "n=" + num(n);
    rep.add(bool_row("partitions", "nc_count.n" + num(n), "noncrossing family vs filtered set partitions", p,
                     num(count_partitions(n, PartitionFamily::noncrossing)), num(nc),
                     static_cast<long long>(count_partitions(n, PartitionFamily::noncrossing)) == nc && nc == catalan[n]));
    rep.add(bool_row("partitions", "interval_count.n" + num(n), "interval family vs filtered set partitions", p,
                     num(count_partitions(n, PartitionFamily::interval)), num(in),
                     static_cast<long long>(count_partitions(n, PartitionFamily::interval)) == in &&
                         in == (1LL << (n - 1))));
    rep.add(bool_row("partitions", "all_count.n" + num(n), "set partitions counted by Bell numbers", p,
                     num(count_partitions(n, PartitionFamily::all)), num(all),
                     static_cast<long long>(count_partitions(n, PartitionFamily::all)) == all));
  }
  auto a = Partition::parse("{1,2|3|4}"), b = Partition::parse("{1|2,3|4}");
  rep.add(bool_row("partitions", "join.example", "join of interval partitions", "{1,2|3|4} v {1|2,3|4}",
                   join_partitions(a, b).to_string(), "{1,2,3|4}", join_partitions(a, b) == Partition::parse("{1,2,3|4}")));
  rep.add(bool_row("partitions", "order.example", "refinement order", "{1|2|3} <= {1,3|2}", "true", "true",
                   compare_leq(Partition::singletons(3), Partition::parse("{1,3|2}")) &&
                       !compare_leq(Partition::parse("{1,3|2}"), Partition::parse("{1,2|3}"))));
  return rep;
}

// ---- series

template <class F>
Report series_battery(const RunConfig& cfg) {
  Report rep;
  Real tol = effective_tolerance(cfg);
  int N = std::max(cfg.order, 2);
  SeededRationals sr(cfg.seed);
  using S = TruncatedSeries<F>;
  for (int t = 0; t < 3; ++t) {
    S f(N);
    for (int k = 1; k <= N; ++k) f[k] = FieldTraits<F>::from_rational(sr.signed_value(4, 3));
    if (f[1] == 0) f[1] = F(1);
    std::string p = "f=[";
    for (int k = 0; k <= std::min(N, 4); ++k) p += (k ? ", " : "") + format_short(f[k]);
    p += ", ...] seed=" + num(static_cast<long long>(cfg.seed));
    auto g = revert(f);
    rep.add(compare_series_row("series", "revert.left.t" + num(t), "f(f^<-1>(z)) = z", p, compose(f, g), S::variable(N), tol));
    rep.add(compare_series_row("series", "revert.right.t" + num(t), "f^<-1>(f(z)) = z", p, compose(g, f), S::variable(N), tol));
    S h(N);
    for (int k = 0; k <= N; ++k) h[k] = FieldTraits<F>::from_rational(sr.signed_value(5, 2));
    F h1 = h.sum_of_coeffs();
    auto q = psi_of_D(h, h1);
    auto back = (q.times_z() - q).truncated(N - 1);
    rep.add(compare_series_row("series", "psi_of_D.t" + num(t), "(z - 1) psi(D)h = h - h(1)", p, back,
                               (h - h1).truncated(N - 1), tol));
    rep.add(compare_series_row("series", "inverse.t" + num(t), "(1 + f) / (1 + f) = 1", p, (f + F(1)) / (f + F(1)),
                               S::constant(F(1), N), tol));
  }
  S geo(N);
  for (int k = 1; k <= N; ++k) geo[k] = F(1);
  S alt(N);
  for (int k = 1; k <= N; ++k) alt[k] = F(k % 2 ? 1 : -1);
  rep.add(compare_series_row("series", "revert.geometric", "z/(1-z) reverts to z/(1+z)", "order=" + num(N), revert(geo), alt, tol));
  return rep;
}

// ---- cumulants

Report cumulants_battery(const RunConfig& cfg) {
  Report rep;
  int nmax = std::min(std::max(cfg.order, 2), 8);
  for (std::uint64_t s = 0; s < 3; ++s) {
    std::uint64_t seed = cfg.seed * 1000 + s;
    auto phi = seeded_oracle(seed);
    CumulantEngine<Rational> e(phi);
    ArgWord w;
    for (int i = 0; i < nmax; ++i) w.push_back(static_cast<ArgId>(splitmix(seed * 31 + i) % 3));
    std::string p = "oracle seed=" + num(static_cast<long long>(seed)) + " word=" + word_to_string(w);
    for (auto kind : {CumulantKind::free_kind, CumulantKind::boolean_kind}) {
      CumulantTable<Rational> t{kind, {}};
      for (std::uint32_t mask = 1; mask < (1u << nmax); ++mask) {
        ArgWord sub;
        for (int i = 0; i < nmax; ++i)
          if (mask >> i & 1) sub.push_back(w[i]);
        t.entries[sub] = e.cumulant(sub, kind);
      }
      rep.add(compare_row("cumulants", "roundtrip." + cumulant_kind_name(kind) + ".s" + num(static_cast<long long>(s)),
                          "moments to cumulants to moments", p, moments_from_cumulants(t, w), e.moment(w), Real(0)));
    }
    int n = std::min(nmax, 6);
    ArgWord args(w.begin(), w.begin() + n);
    int k = 0;
    bool ok = true;
    for (const auto& sigma : enumerate_partitions(n, PartitionFamily::interval)) {
      ok = ok && boolean_cumulant_of_products(e, args, sigma) == grouped_boolean_cumulant(phi, args, sigma);
      ++k;
    }
    rep.add(bool_row("cumulants", "products_as_entries.s" + num(static_cast<long long>(s)),
                     "grouped Boolean cumulants as a lattice sum over pi v sigma = 1", p + " groupings=" + num(k),
                     ok ? "equal" : "differ", "equal", ok));
  }
  return rep;
}

// ---- distributions

template <class F>
Report distributions_battery(const RunConfig& cfg) {
  Report rep;
  Real tol = effective_tolerance(cfg);
  int N = std::max(cfg.order, 2);
  SeededRationals sr(cfg.seed + 1);
  auto R = [](const Rational& q) { return FieldTraits<F>::from_rational(q); };
  for (int t = 0; t < 2; ++t) {
    Rational a = sr.positive(4, 2), l = sr.positive(6, 2), s = sr.positive(4, 2), th = 1 + sr.positive(5, 2);
    std::string p = "alpha=" + format(a) + " lambda=" + format(l) + " sigma=" + format(s) + " theta=" + format(th);
    auto mu = make_free_poisson(R(a), R(l), N + 2);
    auto nu = make_free_binomial(R(s), R(th), N + 2);
    using S = TruncatedSeries<F>;
    S z = S::variable(N);
    rep.add(compare_series_row("distributions", "poisson.S.t" + num(t), "S-transform of free Poisson 1/(alpha(lambda + z))", p,
                               transform_series(mu, Transform::S, N), S::constant(F(1), N) / ((z + R(l)) * R(a)), tol));
    rep.add(compare_series_row("distributions", "binomial.S.t" + num(t), "S-transform of free binomial 1 + theta/(sigma + z)", p,
                               transform_series(nu, Transform::S, N), S::constant(R(th), N) / (z + R(s)) + F(1), tol));
    std::vector<F> kap;
    for (int k = 1; k <= N; ++k) kap.push_back(R(l) * ipow(R(a), k));
    auto mom = moments_from_free_cumulants(kap);
    rep.add(compare_series_row("distributions", "poisson.cumulants.t" + num(t), "free Poisson cumulants lambda alpha^s", p,
                               S(mom), S(std::vector<F>(mu.moments().begin(), mu.moments().begin() + N)), tol));
    rep.add(compare_series_row("distributions", "cumulant_roundtrip.t" + num(t), "cumulants of moments", p,
                               S(free_cumulants_from_moments(std::vector<F>(nu.moments().begin(), nu.moments().begin() + N))),
                               S(std::vector<F>(nu.free_cumulants().begin(), nu.free_cumulants().begin() + N)), tol));
    Rational l2 = sr.positive(5, 3);
    auto sum = free_convolve(make_free_poisson(R(a), R(l), N), make_free_poisson(R(a), R(l2), N));
    auto direct = make_free_poisson(R(a), R(l + l2), N);
    rep.add(compare_series_row("distributions", "poisson.convolution.t" + num(t), "mu(a,l) + mu(a,l') = mu(a,l+l')",
                               p + " lambda'=" + format(l2), S(sum.moments()), S(direct.moments()), tol));
  }
  return rep;
}

// ---- freeprod

Report freeprod_battery(const RunConfig& cfg) {
  Report rep;
  SeededRationals sr(cfg.seed + 2);
  int nmax = std::min(std::max(cfg.order / 2, 1), 5);
  for (int t = 0; t < 2; ++t) {
    Rational s = sr.positive(4, 2), th = 1 + sr.positive(4, 2), a = sr.positive(3, 2), l = sr.positive(5, 2);
    auto u = make_free_binomial(s, th, 14), v = make_free_poisson(a, l, 14);
    std::string p = u.label() + " " + v.label();
    FreeProductEngine<Rational> e(u, v);
    std::vector<Letter<Rational>> alphabet;
    for (int k = 0; k <= 2 * nmax; ++k) {
      std::vector<Rational> c{sr.signed_value(2, 2), sr.positive(2, 1)};
      alphabet.push_back({k % 2 ? Tag::right : Tag::left, FunctionDescriptor<Rational>::poly(c)});
    }
    CumulantEngine<Rational> joint(e.oracle(alphabet), {.max_length = 2 * nmax + 2});
    for (int n = 1; n <= nmax; ++n) {
      auto direct = mixed_moment_boolean(joint, n, MixedMomentPath::direct);
      rep.add(compare_row("freeprod", "boolean_sum.t" + num(t) + ".n" + num(n), "alternating moment from Boolean cumulants",
                          p, mixed_moment_boolean(joint, n, MixedMomentPath::boolean_sum), direct, Real(0)));
      rep.add(compare_row("freeprod", "reformulated.t" + num(t) + ".n" + num(n),
                          "alternating moment, reformulated Boolean sum", p,
                          mixed_moment_boolean(joint, n, MixedMomentPath::reformulated), direct, Real(0)));
      auto odd = odd_boolean_identity(joint, n);
      rep.add(compare_row("freeprod", "odd_boolean.t" + num(t) + ".n" + num(n), "odd Boolean cumulant identity", p,
                          odd.left, odd.right, Real(0)));
    }
    auto uv = e.oracle({power_letter<Rational>(Tag::left, 1), power_letter<Rational>(Tag::right, 1)});
    auto fr = freeness_report(uv, {0}, {1}, std::min(std::max(cfg.order / 2, 2), 4), Real(0));
    rep.add(bool_row("freeprod", "mixed_cumulants.t" + num(t), "mixed free cumulants of U and V vanish",
                     p + " words=" + num(static_cast<long long>(fr.rows.size())), fr.free_verdict ? "0" : "nonzero", "0",
                     fr.free_verdict));
  }
  return rep;
}

// ---- subordination

template <class F>
Report subordination_battery(const RunConfig& cfg) {
  Report rep;
  Real tol = effective_tolerance(cfg);
  int N = std::min(std::max(cfg.order, 2), 10);
  SeededRationals sr(cfg.seed + 3);
  auto R = [](const Rational& q) { return FieldTraits<F>::from_rational(q); };
  for (int t = 0; t < 2; ++t) {
    Rational s = sr.positive(4, 2), th = 1 + sr.positive(4, 2), a = sr.positive(3, 2), l = sr.positive(5, 2);
    Subordinator<F> sub(make_free_binomial(R(s), R(th), N + 2), make_free_poisson(R(a), R(l), N + 2));
    std::string p = sub.left().label() + " " + sub.right().label() + " N=" + num(N);
    const auto& b = sub.omega(OmegaRoute::boolean_series, N);
    const auto& r = sub.omega(OmegaRoute::reversion, N);
    auto muv = sub.product_moments(N);
    rep.add(compare_series_row("subordination", "routes.omega1.t" + num(t), "omega1 by Boolean cumulants = by reversion", p,
                               b.omega1, r.omega1, tol));
    rep.add(compare_series_row("subordination", "routes.omega2.t" + num(t), "omega2 by Boolean cumulants = by reversion", p,
                               b.omega2, r.omega2, tol));
    rep.add(compare_series_row("subordination", "M_V.omega1.t" + num(t), "M_UV = M_V o omega1", p,
                               compose(transform_series(sub.right(), Transform::M, N), b.omega1), muv, tol));
    rep.add(compare_series_row("subordination", "M_U.omega2.t" + num(t), "M_UV = M_U o omega2", p,
                               compose(transform_series(sub.left(), Transform::M, N), b.omega2), muv, tol));
  }
  return rep;
}

// ---- condexp

Report condexp_battery(const RunConfig& cfg) {
  Report rep;
  int N = std::min(std::max(cfg.order, 2), 8);
  using FD = FunctionDescriptor<Rational>;
  auto u = make_free_binomial(Rational(1), Rational(2), 2 * N + 4), v = make_free_poisson(Rational(1), Rational(3), 2 * N + 4);
  Subordinator<Rational> s(u, v);
  std::string p = u.label() + " " + v.label() + " N=" + num(N);
  std::vector<std::pair<std::string, FD>> fns{{"1", FD::constant(Rational(1))}, {"id", FD::identity()}, {"x^2", FD::monomial(2)}};
  for (const auto& [fn, f] : fns)
    for (const auto& [gn, g] : fns) {
      auto pair = condexp_pairing(f, g, s, N);
      for (int m = 0; m <= 2; ++m)
        rep.add(compare_series_row("condexp", "pairing." + fn + "." + gn + ".m" + num(m),
                                   "conditional expectation onto V, closed form vs pairing", p + " f=" + fn + " g=" + gn,
                                   pair(m), pairing_oracle(f, g, s.engine(), N, m), Real(0)));
    }
  rep.add(compare_series_row("condexp", "eta_idid", "eta^{id,id} = D^2 eta_U", p,
                             eta_fg_series(FD::identity(), FD::identity(), u, N, EtaPath::definition),
                             zero_derivative(transform_series(u, Transform::eta, N + 2), 2), Real(0)));
  for (int r = 1; r <= 3; ++r)
    rep.add(compare_series_row("condexp", "eta_f.x^" + num(r), "eta^{x^r}: definition vs closed form", p,
                               eta_f_series(FD::monomial(r), u, N, EtaPath::definition),
                               eta_f_series(FD::monomial(r), u, N, EtaPath::closed_form), Real(0)));
  // A(z), B(z) on the float backend
  Real tol("1e-25");
  Subordinator<Real> sr(make_free_binomial(Real(1), Real(2), 2 * N + 4), make_free_poisson(Real(1), Real(3), 2 * N + 4));
  auto ab = lukacs_AB(sr, N);
  for (int m = 0; m <= 3; ++m)
    rep.add(compare_series_row("condexp", "lukacs_AB.m" + num(m), "A(z), B(z) closed forms vs pairing oracle", p,
                               ab.pairing(m), lukacs_pairing_oracle(sr.engine(), N, m), tol));
  return rep;
}

// ---- lukacs

template <class F>
Report lukacs_regression_rows(const RunConfig& cfg) {
  Report rep;
  int N = std::max(cfg.order, 2);
  auto R = [](const Rational& q) { return FieldTraits<F>::from_rational(q); };
  if (cfg.b || cfg.c || cfg.d) {
    Rational alpha = cfg.alpha.value_or(Rational(1));
    RegressionConstants<F> rc{R(alpha), {}, {}, {}};
    if (cfg.b) rc.b = R(*cfg.b);
    if (cfg.c) rc.c = R(*cfg.c);
    if (cfg.d) rc.d = R(*cfg.d);
    auto mode = cfg.b || !cfg.d ? RegressionMode::th1 : RegressionMode::th2;
    rep.append(regression_check(rc, mode, N));
    return rep;
  }
  SeededRationals sr(cfg.seed + 4);
  for (int t = 0; t < 2; ++t) {
    Rational a = sr.positive(4, 2), c = sr.positive(3, 2), b = (1 + sr.positive(4, 3)) / c;
    rep.append(regression_check(RegressionConstants<F>{R(a), R(b), R(c), {}}, RegressionMode::th1, N));
    rep.append(regression_check(RegressionConstants<F>{R(a), {}, R(c), R(b * c * c * c)}, RegressionMode::th2, N));
  }
  return rep;
}

Report lukacs_battery(const RunConfig& cfg) {
  Report rep;
  rep.append(cfg.backend == Backend::exact ? lukacs_regression_rows<Rational>(cfg) : lukacs_regression_rows<Real>(cfg));
  if (cfg.b || cfg.c || cfg.d) return rep;
  int n = std::min(std::max(cfg.order / 2, 1), 6);
  rep.append(verify_regression_forward(Rational(1), Rational(2), Rational(1), n));
  rep.append(dual_lukacs_check(Rational(1), Rational(1), Rational(1), std::min(std::max(cfg.order / 2, 2), 6), 8));
  rep.append(direct_lukacs_check(Rational(2), Rational(2), Rational(1), 4, 40, Real("1e-6")));
  rep.append(algebraic_identity_checks(make_free_binomial(Rational(1), Rational(2), 24),
                                       make_free_poisson(Rational(1), Rational(3), 24), std::min(cfg.order, 4)));
  return rep;
}

using Battery = std::function<Report(const RunConfig&)>;

Battery battery_for(const std::string& name, Backend backend) {
  bool exact = backend == Backend::exact;
  if (name == "partitions") return partitions_battery;
  if (name == "series") return exact ? Battery(series_battery<Rational>) : Battery(series_battery<Real>);
  if (name == "cumulants") return cumulants_battery;
  if (name == "distributions")
    return exact ? Battery(distributions_battery<Rational>) : Battery(distributions_battery<Real>);
  if (name == "freeprod") return freeprod_battery;
  if (name == "subordination")
    return exact ? Battery(subordination_battery<Rational>) : Battery(subordination_battery<Real>);
  if (name == "condexp") return condexp_battery;
  if (name == "lukacs") return lukacs_battery;
  throw ParseError("unknown verification scope '" + name + "'");
}

}  // namespace

Report run_verification_suite(const RunConfig& cfg, const std::string& scope) {
  if (cfg.order < 1) throw DimensionError("order must be positive");
  set_float_precision(cfg.precision);
  std::vector<std::string> names;
  if (scope == "all")
    names = suite_modules();
  else
    names = {scope};
  for (const auto& n : names) battery_for(n, cfg.backend);
  Report rep;
  for (const auto& n : names) {
    try {
      rep.append(battery_for(n, cfg.backend)(cfg));
    } catch (const Error& e) {
      rep.add({n, n + ".error", "battery aborted", "", "", "", "", "", false, e.what()});
    }
  }
  return rep;
}

}  // namespace fck
