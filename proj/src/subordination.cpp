#include "fck/subordination.hpp"

#include "fck/cumulants.hpp"

namespace fck {

std::string omega_route_name(OmegaRoute r) { return r == OmegaRoute::boolean_series ? "boolean" : "reversion"; }

OmegaRoute parse_omega_route(const std::string& s) {
  if (s == "boolean" || s == "boolean_series") return OmegaRoute::boolean_series;
  if (s == "reversion") return OmegaRoute::reversion;
  throw ParseError("unknown route '" + s + "' (expected boolean or reversion)");
}

template <class F>
Subordinator<F>::Subordinator(SpectralDistribution<F> u, SpectralDistribution<F> v, EngineOptions options)
    : engine_(std::move(u), std::move(v), options) {}

template <class F>
TruncatedSeries<F> Subordinator<F>::product_moments(int N) const {
  TruncatedSeries<F> m(N);
  Word<F> w;
  for (int n = 1; n <= N; ++n) {
    w.push_back(power_letter<F>(Tag::left, 1));
    w.push_back(power_letter<F>(Tag::right, 1));
    m[n] = engine_.joint_moment(w);
  }
  return m;
}

namespace {

template <class F>
TruncatedSeries<F> moment_series(const SpectralDistribution<F>& d, int N) {
  TruncatedSeries<F> m(N);
  for (int k = 1; k <= N; ++k) m[k] = d.moment(k);
  return m;
}

}  // namespace

template <class F>
const SubordinationPair<F>& Subordinator<F>::omega(OmegaRoute route, int N) const {
  auto key = std::make_pair(static_cast<int>(route), N);
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }
  auto out = std::make_unique<SubordinationPair<F>>();
  out->source = route;
  out->omega1 = TruncatedSeries<F>(N);
  out->omega2 = TruncatedSeries<F>(N);
  if (route == OmegaRoute::boolean_series) {
    // arguments: 0 = U, 1 = V
    CumulantOptions opts;
    opts.max_length = std::max(2 * N, kDefaultPartitionCap);
    opts.tracial = true;
    opts.namer = [](ArgId a) { return std::string(a == 0 ? "U" : "V"); };
    CumulantEngine<F> joint(engine_.oracle({power_letter<F>(Tag::left, 1), power_letter<F>(Tag::right, 1)}), opts);
    for (int k = 1; k <= N; ++k) {
      ArgWord a, b;
      for (int i = 0; i < 2 * k - 1; ++i) {
        a.push_back(static_cast<ArgId>(i % 2));
        b.push_back(static_cast<ArgId>(1 - i % 2));
      }
      out->omega1[k] = joint.boolean_cumulant(a);
      out->omega2[k] = joint.boolean_cumulant(b);
    }
  } else {
    auto muv = product_moments(N);
    auto mu = moment_series(left(), N), mv = moment_series(right(), N);
    if (N >= 1 && mv[1] == 0) throw ReversionDomainError("reversion route needs phi(V) != 0");
    if (N >= 1 && mu[1] == 0) throw ReversionDomainError("reversion route needs phi(U) != 0");
    out->omega1 = compose(revert(mv), muv);
    out->omega2 = compose(revert(mu), muv);
  }
  std::lock_guard lock(mutex_);
  auto& slot = cache_[key];
  if (!slot) slot = std::move(out);
  return *slot;
}

template <class F>
SubordinationPair<F> omega_series(const SpectralDistribution<F>& u, const SpectralDistribution<F>& v,
                                  OmegaRoute route, int N) {
  Subordinator<F> s(u, v);
  return s.omega(route, N);
}

template class Subordinator<Rational>;
template class Subordinator<Real>;
template SubordinationPair<Rational> omega_series(const SpectralDistribution<Rational>&,
                                                  const SpectralDistribution<Rational>&, OmegaRoute, int);
template SubordinationPair<Real> omega_series(const SpectralDistribution<Real>&, const SpectralDistribution<Real>&,
                                              OmegaRoute, int);

}  // namespace fck
