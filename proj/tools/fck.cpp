#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fck/condexp.hpp"
#include "fck/freeprod.hpp"
#include "fck/io.hpp"
#include "fck/lukacs.hpp"
#include "fck/partitions.hpp"
#include "fck/subordination.hpp"
#include "fck/verify.hpp"

using namespace fck;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Globals {
  int order = 12;
  std::string backend = "exact";
  unsigned precision = 100;
  std::string tolerance;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";

  RunConfig config() const {
    RunConfig c;
    c.order = order;
    c.backend = parse_backend(backend);
    c.precision = precision;
    if (!tolerance.empty()) c.tolerance = parse_scalar<Real>(tolerance);
    c.seed = seed;
    c.format = parse_output_format(format);
    return c;
  }
  bool exact() const { return parse_backend(backend) == Backend::exact; }
};

class Output {
 public:
  explicit Output(const Globals& g) : path_(g.out), format_(parse_output_format(g.format)) {}

  OutputFormat format() const { return format_; }

  void write(const std::string& text) const {
    if (path_.empty() || path_ == "-") {
      std::cout << text;
      return;
    }
    std::ofstream f(path_);
    if (!f) throw ParseError("cannot write '" + path_ + "'");
    f << text;
  }

  // Documents that are not reports: JSON as is, CSV and plain from key/value rows.
  void document(const Json& j, const std::vector<std::pair<std::string, std::string>>& rows) const {
    if (format_ == OutputFormat::json) return write(j.dump(2) + "\n");
    std::ostringstream os;
    if (format_ == OutputFormat::csv) {
      os << "key,value\n";
      for (const auto& [k, v] : rows) os << csv_field(k) << ',' << csv_field(v) << '\n';
    } else {
      for (const auto& [k, v] : rows) os << k << " = " << v << '\n';
    }
    write(os.str());
  }

  int report(const Report& r) const {
    write(render_report(r, format_));
    for (const auto& row : r.rows)
      if (!row.pass) std::cerr << "FAIL " << row.module << ' ' << row.id << ' ' << row.note << '\n';
    return r.all_pass() ? kExitPass : kExitFail;
  }

 private:
  std::string path_;
  OutputFormat format_;
};

template <class F>
std::vector<std::pair<std::string, std::string>> series_rows(const std::string& name, const TruncatedSeries<F>& s) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (int k = 0; k <= s.order(); ++k) rows.push_back({name + "[" + std::to_string(k) + "]", format(s[k])});
  return rows;
}

template <class F>
void append(std::vector<std::pair<std::string, std::string>>& a, std::vector<std::pair<std::string, std::string>> b) {
  a.insert(a.end(), b.begin(), b.end());
}

// ---- partitions

struct PartitionsArgs {
  int n = 4;
  std::string family = "nc";
  bool count_only = false;
  std::vector<std::string> join, leq;
};

int run_partitions(const Globals& g, const PartitionsArgs& a) {
  Output out(g);
  if (a.join.size() == 2) {
    auto j = join_partitions(Partition::parse(a.join[0]), Partition::parse(a.join[1]));
    return out.document(partition_to_json(j), {{"join", j.to_string()}}), kExitPass;
  }
  if (a.leq.size() == 2) {
    bool r = compare_leq(Partition::parse(a.leq[0]), Partition::parse(a.leq[1]));
    return out.document(Json{{"leq", r}}, {{"leq", r ? "true" : "false"}}), kExitPass;
  }
  auto fam = parse_family(a.family);
  std::size_t count = count_partitions(a.n, fam);
  Json j{{"n", a.n}, {"family", family_name(fam)}, {"count", count}};
  std::vector<std::pair<std::string, std::string>> rows{{"count", std::to_string(count)}};
  if (!a.count_only) {
    Json list = Json::array();
    for (const auto& p : enumerate_partitions(a.n, fam)) {
      list.push_back(p.blocks());
      rows.push_back({"partition", p.to_string()});
    }
    j["partitions"] = list;
  }
  out.document(j, rows);
  return kExitPass;
}

// ---- cumulants

struct CumulantsArgs {
  std::string kind = "free";
  std::string law;
  std::string word;
  std::uint64_t oracle_seed = 0;
  bool use_seed = false;
};

ArgWord parse_arg_word(const std::string& s) {
  ArgWord w;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    try {
      w.push_back(static_cast<ArgId>(std::stoul(tok)));
    } catch (const std::logic_error&) {
      throw ParseError("word entries must be argument numbers, got '" + tok + "'");
    }
  }
  return w;
}

template <class F>
int run_cumulants(const Globals& g, const CumulantsArgs& a) {
  Output out(g);
  auto kind = parse_cumulant_kind(a.kind);
  CumulantTable<F> table{kind, {}};
  ArgNamer namer;
  if (!a.law.empty()) {
    auto d = parse_law_spec<F>(a.law, g.order);
    MomentOracle<F> phi = [d](std::span<const ArgId> w) { return d.moment(static_cast<int>(w.size())); };
    CumulantEngine<F> e(phi);
    namer = [](ArgId) { return std::string("X"); };
    for (int n = 1; n <= g.order; ++n) {
      ArgWord w(n, 0);
      table.entries[w] = e.cumulant(w, kind);
    }
  } else {
    if constexpr (!std::is_same_v<F, Rational>) {
      throw BackendError("seeded oracles are exact; use --backend exact");
    } else {
      ArgWord w = parse_arg_word(a.word.empty() ? "0 1 0 1" : a.word);
      auto phi = seeded_oracle(a.use_seed ? a.oracle_seed : g.seed);
      CumulantEngine<Rational> e(phi);
      int n = static_cast<int>(w.size());
      if (n > 20) throw SizeLimitError("word too long for the subword table");
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        ArgWord sub;
        for (int i = 0; i < n; ++i)
          if (mask >> i & 1) sub.push_back(w[i]);
        if (!sub.empty()) table.entries[sub] = e.cumulant(sub, kind);
      }
    }
  }
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [w, v] : table.entries) rows.push_back({word_to_string(w, namer), format(v)});
  out.document(cumulant_table_to_json(table, namer), rows);
  return kExitPass;
}

// ---- dist

struct DistArgs {
  std::string law = "poisson:alpha=1,lambda=2";
  std::string transform;
  std::string convolve;
  std::string expect;
};

template <class F>
int run_dist(const Globals& g, const DistArgs& a) {
  Output out(g);
  auto d = parse_law_spec<F>(a.law, g.order + 1);
  if (!a.convolve.empty()) d = free_convolve(d, parse_law_spec<F>(a.convolve, g.order + 1));
  if (!a.transform.empty()) {
    auto s = transform_series(d, parse_transform(a.transform), g.order);
    out.document(series_to_json(s), series_rows(a.transform, s));
    return kExitPass;
  }
  if (!a.expect.empty()) {
    auto e = expectation_of(d, FunctionDescriptor<F>::parse(a.expect));
    Json j{{"law", d.label()}, {"function", a.expect}, {"value", format(e.value)},
           {"error_bound", short_decimal(e.error_bound)}, {"backend", backend_name(FieldTraits<F>::backend)}};
    out.document(j, {{"value", format(e.value)}, {"error_bound", short_decimal(e.error_bound)}});
    return kExitPass;
  }
  auto j = distribution_to_json(d.truncated(g.order));
  std::vector<std::pair<std::string, std::string>> rows{{"law", d.label()}};
  for (int k = 1; k <= g.order; ++k) rows.push_back({"m" + std::to_string(k), format(d.moment(k))});
  out.document(j, rows);
  return kExitPass;
}

// ---- freeprod

struct FreeprodArgs {
  std::string left = "binomial:sigma=1,theta=2";
  std::string right = "poisson:alpha=1,lambda=3";
  std::string word = "U V U V";
  int freeness = 0;
};

template <class F>
int run_freeprod(const Globals& g, const FreeprodArgs& a) {
  Output out(g);
  FreeProductEngine<F> e(parse_law_spec<F>(a.left, g.order), parse_law_spec<F>(a.right, g.order));
  if (a.freeness > 0) {
    auto oracle = e.oracle({power_letter<F>(Tag::left, 1), power_letter<F>(Tag::right, 1)});
    ArgNamer namer = [](ArgId x) { return std::string(x == 0 ? "U" : "V"); };
    auto fr = freeness_report(oracle, {0}, {1}, a.freeness, effective_tolerance(g.config()), namer);
    Report rep;
    for (const auto& r : fr.rows)
      rep.add({"freeprod", "mixed." + r.word, "mixed free cumulant of U and V", a.left + " " + a.right, format(r.value),
               "0", format(r.value), g.exact() ? "exact" : short_decimal(effective_tolerance(g.config())), r.vanishes,
               ""});
    return out.report(rep);
  }
  auto w = parse_word<F>(a.word);
  auto v = e.joint_moment_bounded(w);
  Json j{{"word", word_string(w)}, {"value", format(v.value)}, {"error_bound", short_decimal(v.error_bound)},
         {"backend", backend_name(FieldTraits<F>::backend)}};
  out.document(j, {{"value", format(v.value)}, {"error_bound", short_decimal(v.error_bound)}});
  return kExitPass;
}

// ---- subord

struct SubordArgs {
  std::string left = "binomial:sigma=1,theta=2";
  std::string right = "poisson:alpha=1,lambda=3";
  std::string route = "boolean";
  bool check = false;
};

template <class F>
int run_subord(const Globals& g, const SubordArgs& a) {
  Output out(g);
  int N = g.order;
  Subordinator<F> s(parse_law_spec<F>(a.left, N + 2), parse_law_spec<F>(a.right, N + 2));
  if (a.check) {
    Real tol = effective_tolerance(g.config());
    const auto& b = s.omega(OmegaRoute::boolean_series, N);
    const auto& r = s.omega(OmegaRoute::reversion, N);
    auto muv = s.product_moments(N);
    std::string p = s.left().label() + " " + s.right().label();
    Report rep;
    rep.add(compare_series_row("subordination", "routes.omega1", "omega1 by both routes", p, b.omega1, r.omega1, tol));
    rep.add(compare_series_row("subordination", "routes.omega2", "omega2 by both routes", p, b.omega2, r.omega2, tol));
    rep.add(compare_series_row("subordination", "M_V.omega1", "M_UV = M_V o omega1", p,
                               compose(transform_series(s.right(), Transform::M, N), b.omega1), muv, tol));
    rep.add(compare_series_row("subordination", "M_U.omega2", "M_UV = M_U o omega2", p,
                               compose(transform_series(s.left(), Transform::M, N), b.omega2), muv, tol));
    return out.report(rep);
  }
  const auto& pair = s.omega(parse_omega_route(a.route), N);
  Json j{{"route", omega_route_name(pair.source)},
         {"omega1", series_to_json(pair.omega1)},
         {"omega2", series_to_json(pair.omega2)},
         {"M_UV", series_to_json(s.product_moments(N))}};
  auto rows = series_rows("omega1", pair.omega1);
  append<F>(rows, series_rows("omega2", pair.omega2));
  out.document(j, rows);
  return kExitPass;
}

// ---- condexp

struct CondexpArgs {
  std::string left = "binomial:sigma=1,theta=2";
  std::string right = "poisson:alpha=1,lambda=3";
  std::string f = "id", gfn = "id";
  int m_max = 3;
  bool ab = false;
  bool check = false;
};

template <class F>
int run_condexp(const Globals& g, const CondexpArgs& a) {
  Output out(g);
  int N = g.order;
  Subordinator<F> s(parse_law_spec<F>(a.left, 2 * N + 4), parse_law_spec<F>(a.right, 2 * N + 4));
  std::string p = s.left().label() + " " + s.right().label();
  Real tol = std::is_same_v<F, Rational> ? Real(0) : effective_tolerance(g.config());
  if (a.ab) {
    auto ab = lukacs_AB(s, N);
    if (a.check) {
      Report rep;
      Real t = g.tolerance.empty() ? Real("1e-25") : tol;
      for (int m = 0; m <= a.m_max; ++m)
        rep.add(compare_series_row("condexp", "lukacs_AB.m" + std::to_string(m), "A(z), B(z) vs pairing oracle", p,
                                   ab.pairing(m), lukacs_pairing_oracle(s.engine(), N, m), t));
      return out.report(rep);
    }
    Json j{{"A", series_to_json(ab.A)},
           {"B", series_to_json(ab.B)},
           {"eta_at_one", format(ab.at_one.value)},
           {"error_bound", short_decimal(ab.at_one.error_bound)}};
    auto rows = series_rows("A", ab.A);
    append<F>(rows, series_rows("B", ab.B));
    out.document(j, rows);
    return kExitPass;
  }
  auto f = FunctionDescriptor<F>::parse(a.f), gg = FunctionDescriptor<F>::parse(a.gfn);
  auto pair = condexp_pairing(f, gg, s, N);
  if (a.check) {
    Report rep;
    for (int m = 0; m <= a.m_max; ++m)
      rep.add(compare_series_row("condexp", "pairing.m" + std::to_string(m), "closed form vs pairing oracle",
                                 p + " f=" + a.f + " g=" + a.gfn, pair(m), pairing_oracle(f, gg, s.engine(), N, m), tol));
    return out.report(rep);
  }
  Json j{{"f", a.f}, {"g", a.gfn}, {"scalar_part", series_to_json(pair.scalar_part)},
         {"v_coefficient", series_to_json(pair.v_coefficient)}, {"pairings", Json::array()}};
  std::vector<std::pair<std::string, std::string>> rows;
  for (int m = 0; m <= a.m_max; ++m) {
    auto sm = pair(m);
    j["pairings"].push_back({{"m", m}, {"series", series_to_json(sm)}});
    append<F>(rows, series_rows("m" + std::to_string(m), sm));
  }
  out.document(j, rows);
  return kExitPass;
}

// ---- lukacs

struct LukacsArgs {
  std::string alpha = "1", b, c, d;
  std::string lambda = "2", kappa = "2";
  std::string sigma = "1", theta = "2", alpha_v = "1";
  int approx_degree = 40;
  std::string direct_tolerance = "1e-6";
  int n_max = 6;
};

template <class F>
Report lukacs_regression(const Globals& g, const LukacsArgs& a, RegressionMode mode) {
  RegressionConstants<F> rc{parse_scalar<F>(a.alpha), {}, {}, {}};
  if (!a.b.empty()) rc.b = parse_scalar<F>(a.b);
  if (!a.c.empty()) rc.c = parse_scalar<F>(a.c);
  if (!a.d.empty()) rc.d = parse_scalar<F>(a.d);
  return regression_check(rc, mode, g.order);
}

int run_lukacs(const Globals& g, const std::string& mode, const LukacsArgs& a) {
  Output out(g);
  auto Q = [](const std::string& s) { return parse_scalar<Rational>(s); };
  if (mode == "th1" || mode == "th2") {
    auto m = mode == "th1" ? RegressionMode::th1 : RegressionMode::th2;
    if (m == RegressionMode::th1 && (a.b.empty() || a.c.empty())) throw ParseError("th1 needs --b and --c");
    if (m == RegressionMode::th2 && (a.c.empty() || a.d.empty())) throw ParseError("th2 needs --c and --d");
    return out.report(g.exact() ? lukacs_regression<Rational>(g, a, m) : lukacs_regression<Real>(g, a, m));
  }
  if (mode == "forward") return out.report(verify_regression_forward(Q(a.sigma), Q(a.theta), Q(a.alpha_v), a.n_max));
  if (mode == "dual") return out.report(dual_lukacs_check(Q(a.lambda), Q(a.kappa), Q(a.alpha), g.order));
  if (mode == "direct")
    return out.report(direct_lukacs_check(Q(a.lambda), Q(a.kappa), Q(a.alpha), std::min(g.order, 4), a.approx_degree,
                                          parse_scalar<Real>(a.direct_tolerance)));
  if (mode == "identities") {
    Rational s = Q(a.sigma), t = Q(a.theta);
    return out.report(algebraic_identity_checks(make_free_binomial(s, t, 4 * g.order + 8),
                                                make_free_poisson(Q(a.alpha_v), s + t, 4 * g.order + 8), g.order));
  }
  throw ParseError("unknown lukacs mode '" + mode + "' (expected th1|th2|forward|dual|direct|identities)");
}

// ---- verify

struct VerifyArgs {
  std::string scope = "all";
  std::string alpha, b, c, d;
};

int run_verify(const Globals& g, const VerifyArgs& a) {
  Output out(g);
  auto cfg = g.config();
  if (!a.alpha.empty()) cfg.alpha = parse_scalar<Rational>(a.alpha);
  if (!a.b.empty()) cfg.b = parse_scalar<Rational>(a.b);
  if (!a.c.empty()) cfg.c = parse_scalar<Rational>(a.c);
  if (!a.d.empty()) cfg.d = parse_scalar<Rational>(a.d);
  return out.report(run_verification_suite(cfg, a.scope));
}

void law_options(CLI::App* sub, std::string& left, std::string& right) {
  sub->add_option("--left", left, "law of U, e.g. binomial:sigma=1,theta=2")->capture_default_str();
  sub->add_option("--right", right, "law of V, e.g. poisson:alpha=1,lambda=3")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fck: free cumulants, subordination, conditional expectations and Lukacs checks"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--order", g.order, "series / moment order")->envname("FCK_ORDER")->capture_default_str();
  app.add_option("--backend", g.backend, "exact | float")
      ->envname("FCK_BACKEND")
      ->check(CLI::IsMember({"exact", "float"}))
      ->capture_default_str();
  app.add_option("--precision", g.precision, "decimal digits on the float backend")
      ->envname("FCK_PRECISION")
      ->capture_default_str();
  app.add_option("--tolerance", g.tolerance, "float comparison tolerance (default 1e-40)")->envname("FCK_TOLERANCE");
  app.add_option("--seed", g.seed, "seed for parameter draws")->envname("FCK_SEED")->capture_default_str();
  app.add_option("--out", g.out, "output file (default stdout)")->envname("FCK_OUT");
  app.add_option("--format", g.format, "json | csv | plain")
      ->envname("FCK_FORMAT")
      ->check(CLI::IsMember({"json", "csv", "plain"}))
      ->capture_default_str();
  app.fallthrough();

  PartitionsArgs pa;
  auto* parts = app.add_subcommand("partitions", "enumerate, count, compare and join set partitions");
  parts->add_option("--n", pa.n, "ground set size")->capture_default_str();
  parts->add_option("--family", pa.family, "all | nc | interval")->capture_default_str();
  parts->add_flag("--count", pa.count_only, "count only");
  parts->add_option("--join", pa.join, "join of two partitions, e.g. '{1,2|3}' '{1|2,3}'")->expected(2);
  parts->add_option("--leq", pa.leq, "refinement test p <= q")->expected(2);

  CumulantsArgs ca;
  auto* cums = app.add_subcommand("cumulants", "free or Boolean cumulant tables keyed by words");
  cums->add_option("--kind", ca.kind, "free | boolean")->capture_default_str();
  cums->add_option("--law", ca.law, "univariate law spec; table of X^n cumulants up to --order");
  cums->add_option("--word", ca.word, "argument word for the seeded oracle, e.g. '0 1 0 1'");
  auto* os = cums->add_option("--oracle-seed", ca.oracle_seed, "seed of the moment oracle (default --seed)");

  DistArgs da;
  auto* dist = app.add_subcommand("dist", "laws, transforms, free convolution and expectations");
  dist->add_option("--law", da.law, "law spec")->capture_default_str();
  dist->add_option("--transform", da.transform, "M | eta | S");
  dist->add_option("--convolve", da.convolve, "free additive convolution with this law");
  dist->add_option("--expect", da.expect, "phi(f(X)) for f = poly:..., id, x^r, psi, inv1m, inv");

  FreeprodArgs fa;
  auto* fp = app.add_subcommand("freeprod", "joint moments and mixed cumulants of a free pair");
  law_options(fp, fa.left, fa.right);
  fp->add_option("--word", fa.word, "word in U, V, e.g. 'U V^2 psi(U) inv(V)'")->capture_default_str();
  fp->add_option("--freeness", fa.freeness, "report mixed cumulants of U, V up to this order");

  SubordArgs sa;
  auto* sb = app.add_subcommand("subord", "subordination series omega1, omega2");
  law_options(sb, sa.left, sa.right);
  sb->add_option("--route", sa.route, "boolean | reversion")->capture_default_str();
  sb->add_flag("--check", sa.check, "compare both routes and the subordination identities");

  CondexpArgs cx;
  auto* ce = app.add_subcommand("condexp", "conditional expectations onto the V-algebra");
  law_options(ce, cx.left, cx.right);
  ce->add_option("--f", cx.f, "left function of U")->capture_default_str();
  ce->add_option("--g", cx.gfn, "right function of U")->capture_default_str();
  ce->add_option("--m", cx.m_max, "largest power of V paired against")->capture_default_str();
  ce->add_flag("--ab", cx.ab, "A(z), B(z) for the Lukacs pair (float backend)");
  ce->add_flag("--check", cx.check, "compare against the pairing oracle");

  LukacsArgs la;
  std::string lmode = "th1";
  auto* lk = app.add_subcommand("lukacs", "regression characterizations and Lukacs freeness checks");
  lk->add_option("mode", lmode, "th1 | th2 | forward | dual | direct | identities")->capture_default_str();
  lk->add_option("--alpha", la.alpha)->capture_default_str();
  lk->add_option("--b", la.b);
  lk->add_option("--c", la.c);
  lk->add_option("--d", la.d);
  lk->add_option("--lambda", la.lambda)->capture_default_str();
  lk->add_option("--kappa", la.kappa)->capture_default_str();
  lk->add_option("--sigma", la.sigma)->capture_default_str();
  lk->add_option("--theta", la.theta)->capture_default_str();
  lk->add_option("--alpha-v", la.alpha_v)->capture_default_str();
  lk->add_option("--n-max", la.n_max, "forward regression: largest n")->capture_default_str();
  lk->add_option("--approx-degree", la.approx_degree, "direct check: degree of the V^-1 approximation")
      ->capture_default_str();
  lk->add_option("--direct-tolerance", la.direct_tolerance, "direct check tolerance")->capture_default_str();

  VerifyArgs va;
  auto* vf = app.add_subcommand("verify", "run the verification batteries");
  vf->add_option("--scope", va.scope, "all | partitions | series | cumulants | distributions | freeprod | "
                                      "subordination | condexp | lukacs")
      ->capture_default_str();
  vf->add_option("--alpha", va.alpha, "lukacs battery: regression constant alpha");
  vf->add_option("--b", va.b);
  vf->add_option("--c", va.c);
  vf->add_option("--d", va.d);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (g.order < 0) throw DimensionError("--order must be nonnegative");
    set_float_precision(g.precision);
    bool exact = g.exact();
    if (*parts) return run_partitions(g, pa);
    if (*cums) {
      ca.use_seed = os->count() > 0;
      return exact ? run_cumulants<Rational>(g, ca) : run_cumulants<Real>(g, ca);
    }
    if (*dist) return exact ? run_dist<Rational>(g, da) : run_dist<Real>(g, da);
    if (*fp) return exact ? run_freeprod<Rational>(g, fa) : run_freeprod<Real>(g, fa);
    if (*sb) return exact ? run_subord<Rational>(g, sa) : run_subord<Real>(g, sa);
    if (*ce) return exact ? run_condexp<Rational>(g, cx) : run_condexp<Real>(g, cx);
    if (*lk) return run_lukacs(g, lmode, la);
    if (*vf) return run_verify(g, va);
  } catch (const ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BackendError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
