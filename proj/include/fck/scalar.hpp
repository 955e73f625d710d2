#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

#include "fck/errors.hpp"

namespace fck {

namespace mp = boost::multiprecision;

using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

enum class Backend { exact, floating };

std::string backend_name(Backend b);
Backend parse_backend(std::string_view s);

// Decimal digits used by newly created Real values.
void set_float_precision(unsigned digits);
unsigned float_precision();

Real to_real(const Rational& q);

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr Backend backend = Backend::exact;
  static Rational ratio(std::int64_t p, std::int64_t q = 1);
  static Rational from_rational(const Rational& q) { return q; }
  // Accepts "p", "p/q", and finite decimals such as "-0.125" or "1e-3".
  static Rational parse(std::string_view s);
  static std::string format(const Rational& x);
  static bool is_zero(const Rational& x) { return x == 0; }
  static bool near(const Rational& a, const Rational& b, const Real&) { return a == b; }
  static Real magnitude(const Rational& x);
};

template <>
struct FieldTraits<Real> {
  static constexpr Backend backend = Backend::floating;
  static Real ratio(std::int64_t p, std::int64_t q = 1);
  static Real from_rational(const Rational& q) { return to_real(q); }
  static Real parse(std::string_view s);
  static std::string format(const Real& x);
  static bool is_zero(const Real& x) { return x == 0; }
  static bool near(const Real& a, const Real& b, const Real& tol);
  static Real magnitude(const Real& x);
};

template <class F>
F ratio(std::int64_t p, std::int64_t q = 1) {
  return FieldTraits<F>::ratio(p, q);
}

template <class F>
std::string format(const F& x) {
  return FieldTraits<F>::format(x);
}

// Exact text for Rational, 15 significant digits for Real; used in labels.
template <class F>
std::string format_short(const F& x) {
  if constexpr (std::is_same_v<F, Real>)
    return x.str(15);
  else
    return FieldTraits<F>::format(x);
}

template <class F>
F parse_scalar(std::string_view s) {
  return FieldTraits<F>::parse(s);
}

template <class F>
F ipow(F base, unsigned e) {
  F r(1);
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// Default comparison tolerance: 10^-40, or exact equality on Rational.
Real default_tolerance();

// Runtime-tagged scalar for I/O boundaries.
class Scalar {
 public:
  Scalar() : backend_(Backend::exact), q_(0) {}
  explicit Scalar(Rational q) : backend_(Backend::exact), q_(std::move(q)) {}
  explicit Scalar(Real r) : backend_(Backend::floating), r_(std::move(r)) {}

  Backend backend() const { return backend_; }
  const Rational& exact() const;
  const Real& floating() const;
  std::string to_string() const;
  static Scalar parse(std::string_view s, Backend b);

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  Backend backend_;
  Rational q_;
  Real r_;
};

}  // namespace fck
