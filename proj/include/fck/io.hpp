#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "fck/cumulants.hpp"
#include "fck/distributions.hpp"
#include "fck/partitions.hpp"
#include "fck/report.hpp"
#include "fck/series.hpp"

namespace fck {

using Json = nlohmann::ordered_json;

enum class OutputFormat { json, csv, plain };

OutputFormat parse_output_format(std::string_view s);

// {"order": N, "backend": "exact"|"float", "coeffs": ["p/q", ...]}; decimal strings in float mode.
template <class F>
Json series_to_json(const TruncatedSeries<F>& s);
template <class F>
TruncatedSeries<F> series_from_json(const Json& j);

// {"type", "params": {...}, "backend", "order", "moments", "free_cumulants", "support"}
template <class F>
Json distribution_to_json(const SpectralDistribution<F>& d);
// Named types are rebuilt from their parameters at the given order; generic laws from moments or cumulants.
template <class F>
SpectralDistribution<F> distribution_from_json(const Json& j, int order = -1);

// "poisson:alpha=1,lambda=3", "binomial:sigma=1,theta=2", "bernoulli:p=1/3,a=-1,b=2", "point:c=2",
// "moments:m1,m2,...", "cumulants:k1,k2,...", or "@file.json" holding a distribution document.
template <class F>
SpectralDistribution<F> parse_law_spec(std::string_view spec, int order);

// {"kind": "free"|"boolean", "backend", "entries": {"X1 Y1": "p/q", ...}}
template <class F>
Json cumulant_table_to_json(const CumulantTable<F>& t, const ArgNamer& namer = {});

Json partition_to_json(const Partition& p);

Json report_to_json(const Report& r);
std::string report_to_csv(const Report& r);
std::string report_to_plain(const Report& r);
std::string render_report(const Report& r, OutputFormat f);

// Quotes a CSV field when needed.
std::string csv_field(std::string_view s);

}  // namespace fck
