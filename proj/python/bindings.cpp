#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fck/condexp.hpp"
#include "fck/freeprod.hpp"
#include "fck/io.hpp"
#include "fck/lukacs.hpp"
#include "fck/partitions.hpp"
#include "fck/subordination.hpp"
#include "fck/verify.hpp"

namespace py = pybind11;
using namespace fck;

namespace {

template <class F>
std::vector<std::string> strings(const std::vector<F>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(format(x));
  return out;
}

template <class F>
std::vector<std::string> strings(const TruncatedSeries<F>& s) {
  return strings(s.coeffs());
}

bool is_exact(const std::string& backend) { return parse_backend(backend) == Backend::exact; }

template <class F>
std::vector<std::string> moments_impl(const std::string& law, int order) {
  auto d = parse_law_spec<F>(law, order);
  std::vector<std::string> out;
  for (int k = 1; k <= order; ++k) out.push_back(format(d.moment(k)));
  return out;
}

template <class F>
std::vector<std::string> transform_impl(const std::string& law, const std::string& which, int order) {
  return strings(transform_series(parse_law_spec<F>(law, order + 1), parse_transform(which), order));
}

template <class F>
std::string joint_moment_impl(const std::string& left, const std::string& right, const std::string& word, int order) {
  FreeProductEngine<F> e(parse_law_spec<F>(left, order), parse_law_spec<F>(right, order));
  return format(e.joint_moment(parse_word<F>(word)));
}

template <class F>
std::pair<std::vector<std::string>, std::vector<std::string>> omega_impl(const std::string& left,
                                                                         const std::string& right,
                                                                         const std::string& route, int order) {
  auto p = omega_series(parse_law_spec<F>(left, order + 2), parse_law_spec<F>(right, order + 2),
                        parse_omega_route(route), order);
  return {strings(p.omega1), strings(p.omega2)};
}

template <class F>
std::vector<std::vector<std::string>> pairing_impl(const std::string& left, const std::string& right,
                                                   const std::string& f, const std::string& g, int order, int m_max) {
  Subordinator<F> s(parse_law_spec<F>(left, 2 * order + 4), parse_law_spec<F>(right, 2 * order + 4));
  auto p = condexp_pairing(FunctionDescriptor<F>::parse(f), FunctionDescriptor<F>::parse(g), s, order);
  std::vector<std::vector<std::string>> out;
  for (int m = 0; m <= m_max; ++m) out.push_back(strings(p(m)));
  return out;
}

std::string report_json(const Report& r) { return report_to_json(r).dump(); }

template <class F>
std::string theorem_impl(const std::string& alpha, const std::optional<std::string>& b,
                         const std::optional<std::string>& c, const std::optional<std::string>& d, int order) {
  RegressionConstants<F> rc{parse_scalar<F>(alpha), {}, {}, {}};
  if (b) rc.b = parse_scalar<F>(*b);
  if (c) rc.c = parse_scalar<F>(*c);
  if (d) rc.d = parse_scalar<F>(*d);
  auto mode = b || !d ? RegressionMode::th1 : RegressionMode::th2;
  return report_json(regression_check(rc, mode, order));
}

template <class Fn>
auto dispatch(const std::string& backend, Fn&& fn) {
  return is_exact(backend) ? fn(Rational{}) : fn(Real{});
}

}  // namespace

PYBIND11_MODULE(_fck, m) {
  m.doc() = "Free cumulants, subordination, conditional expectations and Lukacs checks";

  py::register_exception<Error>(m, "FckError");
  py::register_exception<DomainError>(m, "DomainError", m.attr("FckError"));
  py::register_exception<ParseError>(m, "ParseError", m.attr("FckError"));
  py::register_exception<CapabilityError>(m, "CapabilityError", m.attr("FckError"));
  py::register_exception<ResolutionError>(m, "ResolutionError", m.attr("FckError"));

  m.def("set_precision", &set_float_precision, py::arg("digits"));

  m.def(
      "partitions",
      [](int n, const std::string& family) {
        std::vector<std::vector<std::vector<int>>> out;
        for (const auto& p : enumerate_partitions(n, parse_family(family))) out.push_back(p.blocks());
        return out;
      },
      py::arg("n"), py::arg("family") = "nc");
  m.def(
      "count_partitions", [](int n, const std::string& family) { return count_partitions(n, parse_family(family)); },
      py::arg("n"), py::arg("family") = "nc");
  m.def(
      "join", [](const std::string& a, const std::string& b) {
        return join_partitions(Partition::parse(a), Partition::parse(b)).to_string();
      },
      py::arg("p"), py::arg("q"));

  m.def(
      "cumulants",
      [](const std::vector<std::string>& moments, const std::string& kind) {
        std::vector<Rational> mom;
        for (const auto& s : moments) mom.push_back(parse_scalar<Rational>(s));
        MomentOracle<Rational> phi = [mom](std::span<const ArgId> w) {
          return w.empty() ? Rational(1) : mom.at(w.size() - 1);
        };
        CumulantEngine<Rational> e(phi);
        std::vector<std::string> out;
        for (std::size_t n = 1; n <= mom.size(); ++n) {
          ArgWord w(n, 0);
          out.push_back(format(e.cumulant(w, parse_cumulant_kind(kind))));
        }
        return out;
      },
      py::arg("moments"), py::arg("kind") = "free");

  m.def(
      "moments",
      [](const std::string& law, int order, const std::string& backend) {
        return dispatch(backend, [&](auto tag) { return moments_impl<decltype(tag)>(law, order); });
      },
      py::arg("law"), py::arg("order") = 8, py::arg("backend") = "exact");
  m.def(
      "transform",
      [](const std::string& law, const std::string& which, int order, const std::string& backend) {
        return dispatch(backend, [&](auto tag) { return transform_impl<decltype(tag)>(law, which, order); });
      },
      py::arg("law"), py::arg("which") = "S", py::arg("order") = 8, py::arg("backend") = "exact");
  m.def(
      "joint_moment",
      [](const std::string& left, const std::string& right, const std::string& word, int order,
         const std::string& backend) {
        return dispatch(backend, [&](auto tag) { return joint_moment_impl<decltype(tag)>(left, right, word, order); });
      },
      py::arg("left"), py::arg("right"), py::arg("word"), py::arg("order") = 16, py::arg("backend") = "exact");
  m.def(
      "omega",
      [](const std::string& left, const std::string& right, const std::string& route, int order,
         const std::string& backend) {
        return dispatch(backend, [&](auto tag) { return omega_impl<decltype(tag)>(left, right, route, order); });
      },
      py::arg("left"), py::arg("right"), py::arg("route") = "boolean", py::arg("order") = 8,
      py::arg("backend") = "exact");
  m.def(
      "condexp_pairing",
      [](const std::string& left, const std::string& right, const std::string& f, const std::string& g, int order,
         int m_max, const std::string& backend) {
        return dispatch(backend,
                        [&](auto tag) { return pairing_impl<decltype(tag)>(left, right, f, g, order, m_max); });
      },
      py::arg("left"), py::arg("right"), py::arg("f") = "id", py::arg("g") = "id", py::arg("order") = 6,
      py::arg("m_max") = 3, py::arg("backend") = "exact");

  m.def(
      "regression_check",
      [](const std::string& alpha, std::optional<std::string> b, std::optional<std::string> c,
         std::optional<std::string> d, int order, const std::string& backend) {
        return dispatch(backend, [&](auto tag) { return theorem_impl<decltype(tag)>(alpha, b, c, d, order); });
      },
      py::arg("alpha"), py::arg("b") = py::none(), py::arg("c") = py::none(), py::arg("d") = py::none(),
      py::arg("order") = 11, py::arg("backend") = "exact");
  m.def(
      "params_from_constants",
      [](const std::string& alpha, const std::string& b, const std::string& c) {
        RegressionConstants<Rational> rc{parse_scalar<Rational>(alpha), parse_scalar<Rational>(b),
                                         parse_scalar<Rational>(c), {}};
        auto p = params_from_constants(rc, RegressionMode::th1);
        return std::map<std::string, std::string>{{"sigma", format(p.sigma)},
                                                  {"theta", format(p.theta)},
                                                  {"alpha_v", format(p.alpha_v)},
                                                  {"lambda_v", format(p.lambda_v)}};
      },
      py::arg("alpha"), py::arg("b"), py::arg("c"));
  m.def(
      "forward_check",
      [](const std::string& sigma, const std::string& theta, const std::string& alpha_v, int n_max) {
        return report_json(verify_regression_forward(parse_scalar<Rational>(sigma), parse_scalar<Rational>(theta),
                                                     parse_scalar<Rational>(alpha_v), n_max));
      },
      py::arg("sigma") = "1", py::arg("theta") = "2", py::arg("alpha_v") = "1", py::arg("n_max") = 4);
  m.def(
      "dual_check",
      [](const std::string& lambda, const std::string& kappa, const std::string& alpha, int max_order) {
        return report_json(dual_lukacs_check(parse_scalar<Rational>(lambda), parse_scalar<Rational>(kappa),
                                             parse_scalar<Rational>(alpha), max_order));
      },
      py::arg("lambda_") = "1", py::arg("kappa") = "1", py::arg("alpha") = "1", py::arg("max_order") = 4);
  m.def(
      "direct_check",
      [](const std::string& lambda, const std::string& kappa, const std::string& alpha, int max_order,
         int approx_degree, const std::string& tolerance) {
        return report_json(direct_lukacs_check(parse_scalar<Rational>(lambda), parse_scalar<Rational>(kappa),
                                               parse_scalar<Rational>(alpha), max_order, approx_degree,
                                               parse_scalar<Real>(tolerance)));
      },
      py::arg("lambda_") = "2", py::arg("kappa") = "2", py::arg("alpha") = "1", py::arg("max_order") = 4,
      py::arg("approx_degree") = 40, py::arg("tolerance") = "1e-6");
  m.def(
      "verify",
      [](const std::string& scope, int order, const std::string& backend, std::uint64_t seed) {
        RunConfig cfg;
        cfg.order = order;
        cfg.backend = parse_backend(backend);
        cfg.seed = seed;
        return report_json(run_verification_suite(cfg, scope));
      },
      py::arg("scope") = "all", py::arg("order") = 8, py::arg("backend") = "exact", py::arg("seed") = 1);
}
