#include "fck/io.hpp"

#include <fstream>
#include <sstream>

namespace fck {

OutputFormat parse_output_format(std::string_view s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "plain" || s == "text") return OutputFormat::plain;
  throw ParseError("unknown output format '" + std::string(s) + "' (expected json|csv|plain)");
}

namespace {

template <class F>
std::string backend_of() {
  return backend_name(FieldTraits<F>::backend);
}

template <class F>
void check_backend(const Json& j) {
  if (j.contains("backend") && j.at("backend").get<std::string>() != backend_of<F>())
    throw ParseError("backend mismatch: document is '" + j.at("backend").get<std::string>() + "', expected '" +
                     backend_of<F>() + "'");
}

template <class F>
F scalar_of(const Json& j) {
  if (j.is_string()) return parse_scalar<F>(j.get<std::string>());
  if (j.is_number_integer()) return F(j.get<long long>());
  if (j.is_number_float()) return parse_scalar<F>(j.dump());
  throw ParseError("expected a scalar string or number, got " + j.dump());
}

template <class F>
Json scalars(const std::vector<F>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(format(x));
  return a;
}

template <class F>
std::vector<F> scalars_from(const Json& j) {
  std::vector<F> out;
  for (const auto& x : j) out.push_back(scalar_of<F>(x));
  return out;
}

}  // namespace

template <class F>
Json series_to_json(const TruncatedSeries<F>& s) {
  return Json{{"order", s.order()}, {"backend", backend_of<F>()}, {"coeffs", scalars(s.coeffs())}};
}

template <class F>
TruncatedSeries<F> series_from_json(const Json& j) {
  try {
    check_backend<F>(j);
    auto c = scalars_from<F>(j.at("coeffs"));
    int order = j.contains("order") ? j.at("order").get<int>() : static_cast<int>(c.size()) - 1;
    if (order < 0 || static_cast<int>(c.size()) != order + 1)
      throw DimensionError("series order " + std::to_string(order) + " does not match " + std::to_string(c.size()) +
                           " coefficients");
    return TruncatedSeries<F>(std::move(c));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed series JSON: ") + e.what());
  }
}

template <class F>
Json distribution_to_json(const SpectralDistribution<F>& d) {
  Json params = Json::object();
  for (const auto& p : d.params()) params[p.name] = format(p.value);
  Json j{{"type", law_kind_name(d.kind())},
         {"params", params},
         {"backend", backend_of<F>()},
         {"order", d.order()},
         {"moments", scalars(d.moments())},
         {"free_cumulants", scalars(d.free_cumulants())}};
  if (d.support()) {
    const auto& s = *d.support();
    Json atoms = Json::array();
    for (const auto& a : s.atoms) atoms.push_back({{"location", format(a.location)}, {"mass", format(a.mass)}});
    auto [lo, hi] = s.hull();
    j["support"] = {{"continuous", s.continuous}, {"lo", format(s.lo)}, {"hi", format(s.hi)}, {"atoms", atoms},
                    {"hull", {format(lo), format(hi)}}};
  }
  return j;
}

template <class F>
SpectralDistribution<F> distribution_from_json(const Json& j, int order) {
  try {
    check_backend<F>(j);
    LawKind kind = parse_law_kind(j.value("type", std::string("generic")));
    if (order < 0) order = j.value("order", 12);
    auto param = [&](const char* name) {
      if (!j.contains("params") || !j.at("params").contains(name))
        throw ParseError(std::string("missing parameter '") + name + "' for law " + law_kind_name(kind));
      return scalar_of<F>(j.at("params").at(name));
    };
    switch (kind) {
      case LawKind::free_poisson: return make_free_poisson(param("alpha"), param("lambda"), order);
      case LawKind::free_binomial: return make_free_binomial(param("sigma"), param("theta"), order);
      case LawKind::bernoulli: return make_bernoulli(param("p"), param("a"), param("b"), order);
      case LawKind::point: return make_point(param("c"), order);
      case LawKind::generic: break;
    }
    if (j.contains("moments")) return SpectralDistribution<F>::from_moments(scalars_from<F>(j.at("moments")));
    if (j.contains("free_cumulants"))
      return SpectralDistribution<F>::from_free_cumulants(scalars_from<F>(j.at("free_cumulants")));
    throw ParseError("generic law needs 'moments' or 'free_cumulants'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed distribution JSON: ") + e.what());
  }
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

template <class F>
SpectralDistribution<F> parse_law_spec(std::string_view spec, int order) {
  if (!spec.empty() && spec[0] == '@') {
    std::ifstream in{std::string(spec.substr(1))};
    if (!in) throw ParseError("cannot read law file '" + std::string(spec.substr(1)) + "'");
    try {
      return distribution_from_json<F>(Json::parse(in), order);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed law file: ") + e.what());
    }
  }
  auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("law spec '" + std::string(spec) + "' needs the form name:key=value,...");
  std::string name(spec.substr(0, colon));
  auto rest = spec.substr(colon + 1);
  if (name == "moments" || name == "cumulants") {
    std::vector<F> v;
    for (const auto& t : split(rest, ',')) v.push_back(parse_scalar<F>(t));
    return name == "moments" ? SpectralDistribution<F>::from_moments(v) : SpectralDistribution<F>::from_free_cumulants(v);
  }
  Json j{{"type", name}, {"params", Json::object()}};
  for (const auto& kv : split(rest, ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("law parameter '" + kv + "' needs key=value");
    j["params"][kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  parse_law_kind(name);
  return distribution_from_json<F>(j, order);
}

template <class F>
Json cumulant_table_to_json(const CumulantTable<F>& t, const ArgNamer& namer) {
  Json entries = Json::object();
  for (const auto& [w, v] : t.entries) entries[word_to_string(w, namer)] = format(v);
  return Json{{"kind", t.kind == CumulantKind::free_kind ? "free" : "boolean"},
              {"backend", backend_of<F>()},
              {"entries", entries}};
}

Json partition_to_json(const Partition& p) { return Json{{"n", p.size()}, {"blocks", p.blocks()}}; }

Json report_to_json(const Report& r) {
  Json rows = Json::array();
  for (const auto& c : r.rows)
    rows.push_back({{"module", c.module},
                    {"id", c.id},
                    {"anchor", c.anchor},
                    {"params", c.params},
                    {"lhs", c.lhs},
                    {"rhs", c.rhs},
                    {"delta", c.delta},
                    {"tolerance", c.tolerance},
                    {"status", c.pass ? "pass" : "fail"},
                    {"note", c.note}});
  return Json{{"rows", static_cast<int>(r.rows.size())},
              {"failures", r.failures()},
              {"status", r.all_pass() ? "pass" : "fail"},
              {"checks", rows}};
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string report_to_csv(const Report& r) {
  std::ostringstream os;
  os << "module,id,anchor,params,lhs,rhs,delta,tolerance,status,note\n";
  for (const auto& c : r.rows)
    os << csv_field(c.module) << ',' << csv_field(c.id) << ',' << csv_field(c.anchor) << ',' << csv_field(c.params)
       << ',' << csv_field(c.lhs) << ',' << csv_field(c.rhs) << ',' << csv_field(c.delta) << ','
       << csv_field(c.tolerance) << ',' << (c.pass ? "pass" : "fail") << ',' << csv_field(c.note) << '\n';
  return os.str();
}

std::string report_to_plain(const Report& r) {
  std::ostringstream os;
  for (const auto& c : r.rows) {
    os << (c.pass ? "PASS " : "FAIL ") << c.module << ' ' << c.id << "  [" << c.anchor << "]";
    if (!c.params.empty()) os << "  " << c.params;
    os << "  delta=" << c.delta << " tol=" << c.tolerance;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << '\n';
  }
  os << r.rows.size() << " checks, " << r.failures() << " failed\n";
  return os.str();
}

std::string render_report(const Report& r, OutputFormat f) {
  switch (f) {
    case OutputFormat::json: return report_to_json(r).dump(2) + "\n";
    case OutputFormat::csv: return report_to_csv(r);
    case OutputFormat::plain: return report_to_plain(r);
  }
  return {};
}

#define FCK_INSTANTIATE(F)                                                        \
  template Json series_to_json(const TruncatedSeries<F>&);                        \
  template TruncatedSeries<F> series_from_json<F>(const Json&);                  \
  template Json distribution_to_json(const SpectralDistribution<F>&);             \
  template SpectralDistribution<F> distribution_from_json<F>(const Json&, int);  \
  template Json cumulant_table_to_json(const CumulantTable<F>&, const ArgNamer&);  \
  template SpectralDistribution<F> parse_law_spec<F>(std::string_view, int);

FCK_INSTANTIATE(Rational)
FCK_INSTANTIATE(Real)

}  // namespace fck
