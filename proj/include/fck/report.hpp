#pragma once

#include <string>
#include <vector>

#include "fck/scalar.hpp"
#include "fck/series.hpp"

namespace fck {

// One checked identity.
struct CheckRow {
  std::string module;
  std::string id;
  std::string anchor;
  std::string params;
  std::string lhs;
  std::string rhs;
  std::string delta;
  std::string tolerance;  // "exact" or a decimal bound
  bool pass = false;
  std::string note;
};

struct Report {
  std::vector<CheckRow> rows;

  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
  int failures() const {
    int n = 0;
    for (const auto& r : rows) n += r.pass ? 0 : 1;
    return n;
  }
  std::vector<CheckRow> failed_rows() const {
    std::vector<CheckRow> out;
    for (const auto& r : rows)
      if (!r.pass) out.push_back(r);
    return out;
  }
  Report& append(const Report& o) {
    rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    return *this;
  }
  Report& add(CheckRow r) {
    rows.push_back(std::move(r));
    return *this;
  }
};

std::string short_decimal(const Real& x, int digits = 12);

// Scalar comparison: exact equality for Rational, |lhs - rhs| <= tol for Real.
template <class F>
CheckRow compare_row(std::string module, std::string id, std::string anchor, std::string params, const F& lhs,
                     const F& rhs, const Real& tol) {
  CheckRow r{std::move(module), std::move(id), std::move(anchor), std::move(params), format(lhs), format(rhs)};
  if constexpr (std::is_same_v<F, Rational>) {
    r.delta = format(Rational(lhs - rhs));
    r.tolerance = "exact";
    r.pass = lhs == rhs;
  } else {
    Real d = mp::abs(lhs - rhs);
    r.lhs = short_decimal(lhs, 30);
    r.rhs = short_decimal(rhs, 30);
    r.delta = short_decimal(d);
    r.tolerance = short_decimal(tol);
    r.pass = d <= tol;
  }
  return r;
}

template <class F>
CheckRow compare_series_row(std::string module, std::string id, std::string anchor, std::string params,
                            const TruncatedSeries<F>& lhs, const TruncatedSeries<F>& rhs, const Real& tol) {
  int n = std::min(lhs.order(), rhs.order());
  CheckRow r{std::move(module), std::move(id), std::move(anchor), std::move(params)};
  Real d = series_max_delta(lhs, rhs);
  if constexpr (std::is_same_v<F, Rational>) {
    r.lhs = series_to_string(lhs.truncated(n));
    r.rhs = series_to_string(rhs.truncated(n));
    r.tolerance = "exact";
    r.pass = lhs.truncated(n) == rhs.truncated(n);
  } else {
    r.lhs = "series of order " + std::to_string(n);
    r.rhs = r.lhs;
    r.tolerance = short_decimal(tol);
    r.pass = d <= tol;
  }
  r.delta = short_decimal(d);
  return r;
}

}  // namespace fck
