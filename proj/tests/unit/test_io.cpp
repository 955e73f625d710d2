#include "doctest.h"

#include "fck/io.hpp"
#include "fck/verify.hpp"

using namespace fck;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

}  // namespace

TEST_CASE("series JSON round trip") {
  auto s = TruncatedSeries<Rational>(std::vector<Rational>{q(0), q(1, 2), q(-3, 4)});
  auto j = series_to_json(s);
  CHECK(j.dump() == R"({"order":2,"backend":"exact","coeffs":["0","1/2","-3/4"]})");
  CHECK(series_from_json<Rational>(j) == s);
  auto r = TruncatedSeries<Real>(std::vector<Real>{Real(1), Real("0.125")});
  auto jr = series_to_json(r);
  CHECK(jr["backend"] == "float");
  CHECK(series_from_json<Real>(jr) == r);
  CHECK_THROWS_AS(series_from_json<Real>(j), ParseError);
  CHECK_THROWS_AS(series_from_json<Rational>(Json{{"order", 3}, {"coeffs", {"1"}}}), DimensionError);
}

TEST_CASE("distribution JSON mirrors the law") {
  auto d = make_free_poisson(q(1), q(2), 6);
  auto j = distribution_to_json(d);
  CHECK(j["type"] == "poisson");
  CHECK(j["params"]["lambda"] == "2");
  CHECK(j["moments"][1] == "6");
  auto back = distribution_from_json<Rational>(j);
  CHECK(back.moments() == d.moments());
  CHECK(back.label() == d.label());
  Json generic{{"type", "generic"}, {"moments", {"1", "2", "5"}}};
  CHECK(distribution_from_json<Rational>(generic).free_cumulant(3) == 1);
  CHECK_THROWS_AS(distribution_from_json<Rational>(Json{{"type", "poisson"}, {"params", {{"alpha", "1"}}}}), ParseError);
}

TEST_CASE("law specs") {
  CHECK(parse_law_spec<Rational>("binomial:sigma=1,theta=2", 4).moment(1) ==
        make_free_binomial(q(1), q(2), 4).moment(1));
  CHECK(parse_law_spec<Rational>("cumulants:1,1,1", 3).moment(3) == 5);
  CHECK(parse_law_spec<Rational>("bernoulli:p=1/3,a=-1,b=2", 4).moment(1) == 1);
  CHECK_THROWS_AS(parse_law_spec<Rational>("poisson", 4), ParseError);
  CHECK_THROWS_AS(parse_law_spec<Rational>("poisson:alpha", 4), ParseError);
  CHECK_THROWS_AS(parse_law_spec<Rational>("@/nonexistent.json", 4), ParseError);
}

TEST_CASE("cumulant tables are keyed by words") {
  CumulantTable<Rational> t{CumulantKind::boolean_kind, {{{0, 1}, q(1, 3)}, {{0}, q(2)}}};
  auto j = cumulant_table_to_json(t, [](ArgId a) { return std::string(a ? "Y" : "X"); });
  CHECK(j["kind"] == "boolean");
  CHECK(j["entries"]["X Y"] == "1/3");
  CHECK(j["entries"]["X"] == "2");
}

TEST_CASE("report renderings") {
  Report r;
  r.add(compare_row("m", "a", "anchor, with comma", "p", q(1), q(1), Real(0)));
  r.add(compare_row("m", "b", "anchor", "p", q(1), q(2), Real(0)));
  CHECK(r.failures() == 1);
  auto j = report_to_json(r);
  CHECK(j["status"] == "fail");
  CHECK(j["checks"][1]["delta"] == "-1");
  auto csv = report_to_csv(r);
  CHECK(csv.find("\"anchor, with comma\"") != std::string::npos);
  CHECK(report_to_plain(r).find("FAIL m b") != std::string::npos);
  CHECK_THROWS_AS(parse_output_format("xml"), ParseError);
}

TEST_CASE("seeded draws are replayable") {
  SeededRationals a(42), b(42);
  for (int i = 0; i < 10; ++i) {
    auto x = a.positive(5, 3);
    CHECK(x == b.positive(5, 3));
    CHECK(x > 0);
  }
  std::mt19937_64 rng(7);
  std::uint64_t p = rng(), qq = rng();
  CHECK(SeededRationals(7).positive(5, 3) == Rational(static_cast<long>(1 + p % 5), static_cast<long>(1 + qq % 3)));
  auto o1 = seeded_oracle(3), o2 = seeded_oracle(3);
  ArgWord w{0, 1, 2};
  CHECK(o1(w) == o2(w));
  CHECK(o1({}) == 1);
}

TEST_CASE("verification suite") {
  RunConfig cfg;
  cfg.order = 8;
  auto rep = run_verification_suite(cfg, "all");
  CHECK(rep.rows.size() >= 40);
  CHECK(rep.all_pass());
  auto again = run_verification_suite(cfg, "all");
  CHECK(report_to_json(again).dump() == report_to_json(rep).dump());
  auto part = run_verification_suite(cfg, "partitions");
  for (const auto& r : part.rows) CHECK(r.module == "partitions");
  cfg.b = q(1);
  cfg.c = q(1);
  auto bad = run_verification_suite(cfg, "lukacs");
  REQUIRE(bad.rows.size() == 1);
  CHECK_FALSE(bad.rows[0].pass);
  CHECK_THROWS_AS(run_verification_suite(cfg, "nope"), ParseError);
}
