#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "fck/distributions.hpp"
#include "fck/freeprod.hpp"
#include "fck/series.hpp"

namespace fck {

enum class OmegaRoute { boolean_series, reversion };

std::string omega_route_name(OmegaRoute r);
OmegaRoute parse_omega_route(const std::string& s);

template <class F>
struct SubordinationPair {
  TruncatedSeries<F> omega1;
  TruncatedSeries<F> omega2;
  OmegaRoute source = OmegaRoute::boolean_series;
};

// Subordination data for a fixed free pair (U, V). Results are cached per route and order.
template <class F>
class Subordinator {
 public:
  Subordinator(SpectralDistribution<F> u, SpectralDistribution<F> v, EngineOptions options = {});

  // sum_{n>=1} phi((UV)^n) z^n
  TruncatedSeries<F> product_moments(int N) const;
  const SubordinationPair<F>& omega(OmegaRoute route, int N) const;

  const FreeProductEngine<F>& engine() const { return engine_; }
  const SpectralDistribution<F>& left() const { return engine_.law(Tag::left); }
  const SpectralDistribution<F>& right() const { return engine_.law(Tag::right); }

 private:
  FreeProductEngine<F> engine_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<SubordinationPair<F>>> cache_;
};

template <class F>
SubordinationPair<F> omega_series(const SpectralDistribution<F>& u, const SpectralDistribution<F>& v,
                                  OmegaRoute route, int N);

}  // namespace fck
