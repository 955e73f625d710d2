#include "fck/scalar.hpp"

#include <atomic>
#include <cctype>
#include <sstream>

namespace fck {

namespace {

std::atomic<unsigned> g_digits{100};

struct PrecisionInit {
  PrecisionInit() { Real::default_precision(100); }
} g_precision_init;

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

Integer parse_integer(const std::string& s, std::string_view whole) {
  if (s.empty()) throw ParseError("empty number in '" + std::string(whole) + "'");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw ParseError("bad number '" + std::string(whole) + "'");
  for (std::size_t k = i; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k])))
      throw ParseError("bad number '" + std::string(whole) + "'");
  return Integer(s[0] == '+' ? s.substr(1) : s);
}

Rational parse_decimal(const std::string& s, std::string_view whole) {
  std::string mant = s;
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    mant = s.substr(0, epos);
    try {
      exp10 = std::stol(s.substr(epos + 1));
    } catch (...) {
      throw ParseError("bad exponent in '" + std::string(whole) + "'");
    }
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant = mant.substr(1);
  }
  auto dot = mant.find('.');
  std::string digits = mant;
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty()) throw ParseError("bad number '" + std::string(whole) + "'");
  Integer n = parse_integer(digits, whole);
  Integer p = mp::pow(Integer(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
  Rational r = exp10 < 0 ? Rational(n, p) : Rational(n * p);
  return neg ? Rational(-r) : r;
}

}  // namespace

std::string backend_name(Backend b) { return b == Backend::exact ? "exact" : "float"; }

Backend parse_backend(std::string_view s) {
  if (s == "exact") return Backend::exact;
  if (s == "float") return Backend::floating;
  throw ParseError("unknown backend '" + std::string(s) + "' (expected exact|float)");
}

void set_float_precision(unsigned digits) {
  if (digits < 10) throw DomainError("precision must be at least 10 digits");
  g_digits = digits;
  Real::default_precision(digits);
}

unsigned float_precision() { return g_digits; }

Real to_real(const Rational& q) {
  Real n(mp::numerator(q).str());
  Real d(mp::denominator(q).str());
  return n / d;
}

Rational FieldTraits<Rational>::ratio(std::int64_t p, std::int64_t q) {
  if (q == 0) throw DivisionError("zero denominator");
  return Rational(Integer(p), Integer(q));
}

Rational FieldTraits<Rational>::parse(std::string_view sv) {
  std::string s = trim(sv);
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational n = parse_decimal(trim(s.substr(0, slash)), sv);
    Rational d = parse_decimal(trim(s.substr(slash + 1)), sv);
    if (d == 0) throw DivisionError("zero denominator in '" + s + "'");
    return n / d;
  }
  return parse_decimal(s, sv);
}

std::string FieldTraits<Rational>::format(const Rational& x) {
  if (mp::denominator(x) == 1) return mp::numerator(x).str();
  return mp::numerator(x).str() + "/" + mp::denominator(x).str();
}

Real FieldTraits<Rational>::magnitude(const Rational& x) { return mp::abs(to_real(x)); }

Real FieldTraits<Real>::ratio(std::int64_t p, std::int64_t q) {
  if (q == 0) throw DivisionError("zero denominator");
  return Real(p) / Real(q);
}

Real FieldTraits<Real>::parse(std::string_view sv) {
  std::string s = trim(sv);
  if (s.find('/') != std::string::npos) return to_real(FieldTraits<Rational>::parse(s));
  return to_real(parse_decimal(s, sv));
}

std::string FieldTraits<Real>::format(const Real& x) {
  if (x == 0) return "0";
  return x.str(static_cast<std::streamsize>(float_precision()), std::ios_base::scientific);
}

bool FieldTraits<Real>::near(const Real& a, const Real& b, const Real& tol) {
  return mp::abs(a - b) <= tol;
}

Real FieldTraits<Real>::magnitude(const Real& x) { return mp::abs(x); }

Real default_tolerance() { return mp::pow(Real(10), -40); }

const Rational& Scalar::exact() const {
  if (backend_ != Backend::exact) throw BackendError("expected an exact scalar");
  return q_;
}

const Real& Scalar::floating() const {
  if (backend_ != Backend::floating) throw BackendError("expected a float scalar");
  return r_;
}

std::string Scalar::to_string() const {
  return backend_ == Backend::exact ? format(q_) : format(r_);
}

Scalar Scalar::parse(std::string_view s, Backend b) {
  if (b == Backend::exact) return Scalar(FieldTraits<Rational>::parse(s));
  return Scalar(FieldTraits<Real>::parse(s));
}

namespace {
void same_backend(const Scalar& a, const Scalar& b) {
  if (a.backend() != b.backend()) throw BackendError("mixed exact and float scalars");
}
}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  same_backend(a, b);
  return a.backend() == Backend::exact ? Scalar(a.q_ + b.q_) : Scalar(a.r_ + b.r_);
}
Scalar operator-(const Scalar& a, const Scalar& b) {
  same_backend(a, b);
  return a.backend() == Backend::exact ? Scalar(a.q_ - b.q_) : Scalar(a.r_ - b.r_);
}
Scalar operator*(const Scalar& a, const Scalar& b) {
  same_backend(a, b);
  return a.backend() == Backend::exact ? Scalar(a.q_ * b.q_) : Scalar(a.r_ * b.r_);
}
Scalar operator/(const Scalar& a, const Scalar& b) {
  same_backend(a, b);
  if (a.backend() == Backend::exact) {
    if (b.q_ == 0) throw DivisionError("division by zero");
    return Scalar(a.q_ / b.q_);
  }
  if (b.r_ == 0) throw DivisionError("division by zero");
  return Scalar(a.r_ / b.r_);
}
bool operator==(const Scalar& a, const Scalar& b) {
  same_backend(a, b);
  return a.backend() == Backend::exact ? a.q_ == b.q_ : a.r_ == b.r_;
}

}  // namespace fck
