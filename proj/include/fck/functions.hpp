#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fck/errors.hpp"
#include "fck/scalar.hpp"

namespace fck {

enum class FnKind { poly, identity, monomial, psi, inv1m, inverse, rational };

// f(x) = N(x) / (pole - x)^pole_order with N a polynomial.
template <class F>
class FunctionDescriptor {
 public:
  FunctionDescriptor() : kind_(FnKind::poly), num_{F(0)} {}

  static FunctionDescriptor poly(std::vector<F> coeffs) {
    FunctionDescriptor f;
    f.num_ = std::move(coeffs);
    if (f.num_.empty()) f.num_.push_back(F(0));
    f.trim();
    return f;
  }
  static FunctionDescriptor constant(const F& c) { return poly({c}); }
  static FunctionDescriptor identity() {
    auto f = poly({F(0), F(1)});
    f.kind_ = FnKind::identity;
    return f;
  }
  static FunctionDescriptor monomial(int r) {
    if (r < 0) throw DomainError("negative monomial power");
    std::vector<F> c(static_cast<std::size_t>(r) + 1, F(0));
    c[r] = F(1);
    auto f = poly(c);
    f.kind_ = FnKind::monomial;
    f.power_ = r;
    return f;
  }
  // x (1-x)^-1
  static FunctionDescriptor psi() { return rational({F(0), F(1)}, F(1), 1, FnKind::psi); }
  // (1-x)^-1
  static FunctionDescriptor inv1m() { return rational({F(1)}, F(1), 1, FnKind::inv1m); }
  // x^-1
  static FunctionDescriptor inverse() { return rational({F(-1)}, F(0), 1, FnKind::inverse); }
  static FunctionDescriptor rational(std::vector<F> num, F pole, int order, FnKind kind = FnKind::rational) {
    FunctionDescriptor f;
    f.num_ = std::move(num);
    if (f.num_.empty()) f.num_.push_back(F(0));
    f.trim();
    f.pole_ = std::move(pole);
    f.pole_order_ = order;
    f.kind_ = order == 0 ? FnKind::poly : kind;
    return f;
  }

  // "poly:c0,c1,...", "id", "x^r", "psi", "inv1m", "inv", "const:c".
  static FunctionDescriptor parse(std::string_view text);
  std::string to_string() const;

  FnKind kind() const { return kind_; }
  bool is_polynomial() const { return pole_order_ == 0; }
  bool is_zero() const { return num_.size() == 1 && num_[0] == 0; }
  bool is_constant() const { return is_polynomial() && num_.size() == 1; }
  int degree() const { return static_cast<int>(num_.size()) - 1; }
  const std::vector<F>& numerator() const { return num_; }
  const F& pole() const { return pole_; }
  int pole_order() const { return pole_order_; }

  F operator()(const F& x) const {
    F n(0);
    for (auto it = num_.rbegin(); it != num_.rend(); ++it) n = n * x + *it;
    if (pole_order_ == 0) return n;
    F d = pole_ - x;
    if (d == 0) throw DomainError("function evaluated at its pole");
    F p(1);
    for (int i = 0; i < pole_order_; ++i) p *= d;
    return n / p;
  }

  friend FunctionDescriptor operator*(const FunctionDescriptor& a, const FunctionDescriptor& b) {
    if (a.pole_order_ && b.pole_order_ && a.pole_ != b.pole_)
      throw CapabilityError("product of functions with different poles");
    std::vector<F> n(a.num_.size() + b.num_.size() - 1, F(0));
    for (std::size_t i = 0; i < a.num_.size(); ++i)
      for (std::size_t j = 0; j < b.num_.size(); ++j) n[i + j] += a.num_[i] * b.num_[j];
    const F& pole = a.pole_order_ ? a.pole_ : b.pole_;
    return rational(std::move(n), pole, a.pole_order_ + b.pole_order_);
  }

  friend bool operator==(const FunctionDescriptor& a, const FunctionDescriptor& b) {
    return a.num_ == b.num_ && a.pole_order_ == b.pole_order_ && (a.pole_order_ == 0 || a.pole_ == b.pole_);
  }

  // Coefficients a_0..a_K of f(c + y) in powers of y.
  std::vector<F> taylor(int K, const F& c = F(0)) const {
    std::vector<F> n = shifted_numerator(c);
    std::vector<F> out(static_cast<std::size_t>(K) + 1, F(0));
    if (pole_order_ == 0) {
      for (std::size_t i = 0; i < n.size() && i <= static_cast<std::size_t>(K); ++i) out[i] = n[i];
      return out;
    }
    F d = pole_ - c;
    if (d == 0) throw DomainError("expansion centre coincides with the pole");
    // (d - y)^-j = sum_k C(k+j-1, j-1) y^k / d^(k+j)
    std::vector<F> g(static_cast<std::size_t>(K) + 1);
    F dj(1);
    for (int i = 0; i < pole_order_; ++i) dj *= d;
    g[0] = F(1) / dj;
    for (int k = 0; k < K; ++k) g[k + 1] = g[k] * F(k + pole_order_) / (F(k + 1) * d);
    for (std::size_t i = 0; i < n.size() && i <= static_cast<std::size_t>(K); ++i)
      for (int k = 0; i + k <= static_cast<std::size_t>(K); ++k) out[i + k] += n[i] * g[k];
    return out;
  }

  // Bound on sup over |y| <= r of the Taylor remainder after degree K around c.
  Real tail_bound(int K, const F& c, const Real& r) const {
    std::vector<F> n = shifted_numerator(c);
    if (pole_order_ == 0) {
      Real s(0), rk(1);
      for (std::size_t i = 0; i < n.size(); ++i) {
        if (static_cast<int>(i) > K) s += FieldTraits<F>::magnitude(n[i]) * rk;
        rk *= r;
      }
      return s;
    }
    Real d = FieldTraits<F>::magnitude(pole_ - c);
    Real q = r / d;
    if (q >= 1) throw DivergenceError("geometric expansion diverges: spectrum reaches the pole");
    Real dj = mp::pow(d, pole_order_);
    Real total(0), ri(1);
    for (std::size_t i = 0; i < n.size(); ++i) {
      int m0 = K - static_cast<int>(i) + 1;
      if (m0 < 0) m0 = 0;
      total += FieldTraits<F>::magnitude(n[i]) * ri * neg_binomial_tail(m0, q) / dj;
      ri *= r;
    }
    return total;
  }

  // Bound on sup over |x - c| <= r of |f(x)|.
  Real sup_bound(const F& c, const Real& r) const {
    std::vector<F> n = shifted_numerator(c);
    Real s(0), ri(1);
    for (const auto& a : n) {
      s += FieldTraits<F>::magnitude(a) * ri;
      ri *= r;
    }
    if (pole_order_ == 0) return s;
    Real gap = FieldTraits<F>::magnitude(pole_ - c) - r;
    if (gap <= 0) throw DivergenceError("function unbounded on the spectrum");
    return s / mp::pow(gap, pole_order_);
  }

  // D^k: drop the first k Taylor coefficients at 0 and divide by x^k.
  FunctionDescriptor zero_shift(int k) const {
    if (k == 0) return *this;
    if (pole_order_ == 0) {
      if (k >= static_cast<int>(num_.size())) return constant(F(0));
      return poly(std::vector<F>(num_.begin() + k, num_.end()));
    }
    auto head = taylor(k - 1);
    // N(x) - (p - x)^j * head(x), then divide by x^k
    std::vector<F> pj{F(1)};
    for (int i = 0; i < pole_order_; ++i) {
      std::vector<F> next(pj.size() + 1, F(0));
      for (std::size_t a = 0; a < pj.size(); ++a) {
        next[a] += pj[a] * pole_;
        next[a + 1] -= pj[a];
      }
      pj = std::move(next);
    }
    std::vector<F> r(std::max(num_.size(), pj.size() + head.size() - 1), F(0));
    for (std::size_t i = 0; i < num_.size(); ++i) r[i] += num_[i];
    for (std::size_t a = 0; a < pj.size(); ++a)
      for (std::size_t b = 0; b < head.size(); ++b) r[a + b] -= pj[a] * head[b];
    std::vector<F> out(r.begin() + std::min<std::size_t>(k, r.size()), r.end());
    return rational(out, pole_, pole_order_);
  }

 private:
  std::vector<F> shifted_numerator(const F& c) const {
    // coefficients of N(c + y)
    std::vector<F> out(num_);
    if (c == 0) return out;
    std::size_t n = out.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) out[j - 1] += c * out[j];
    return out;
  }

  // sum_{m >= m0} C(m+j-1, j-1) q^m
  Real neg_binomial_tail(int m0, const Real& q) const {
    int j = pole_order_;
    Real t = mp::pow(q, m0);
    for (int i = 1; i < j; ++i) t *= Real(m0 + i) / Real(i);
    Real ratio = q * Real(m0 + j) / Real(m0 + 1);
    if (ratio >= 1) {
      // sum directly until the (decreasing) ratio drops below one
      Real s(0);
      int m = m0;
      while (ratio >= Real(1)) {
        s += t;
        t *= q * Real(m + j) / Real(m + 1);
        ++m;
        ratio = q * Real(m + j) / Real(m + 1);
        if (m > 1000000) throw DivergenceError("tail bound does not converge");
      }
      return s + t / (1 - ratio);
    }
    return t / (1 - ratio);
  }

  void trim() {
    while (num_.size() > 1 && num_.back() == 0) num_.pop_back();
  }

  FnKind kind_;
  std::vector<F> num_;
  F pole_{0};
  int pole_order_ = 0;
  int power_ = 0;
};

template <class F>
FunctionDescriptor<F> FunctionDescriptor<F>::parse(std::string_view text) {
  std::string s(text);
  if (s == "id" || s == "x") return identity();
  if (s == "psi") return psi();
  if (s == "inv1m") return inv1m();
  if (s == "inv") return inverse();
  if (s.rfind("x^", 0) == 0) {
    try {
      return monomial(std::stoi(s.substr(2)));
    } catch (const std::logic_error&) {
      throw ParseError("bad monomial '" + s + "'");
    }
  }
  if (s.rfind("const:", 0) == 0) return constant(FieldTraits<F>::parse(s.substr(6)));
  if (s.rfind("poly:", 0) == 0) {
    std::vector<F> c;
    std::string rest = s.substr(5);
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto comma = rest.find(',', start);
      std::string tok = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      c.push_back(FieldTraits<F>::parse(tok));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return poly(c);
  }
  throw ParseError("unknown function '" + s + "' (expected poly:..., id, x^r, psi, inv1m, inv, const:c)");
}

template <class F>
std::string FunctionDescriptor<F>::to_string() const {
  switch (kind_) {
    case FnKind::identity: return "id";
    case FnKind::monomial: return "x^" + std::to_string(power_);
    case FnKind::psi: return "psi";
    case FnKind::inv1m: return "inv1m";
    case FnKind::inverse: return "inv";
    default: break;
  }
  std::string out = "poly:";
  for (std::size_t i = 0; i < num_.size(); ++i) out += (i ? "," : "") + format(num_[i]);
  if (pole_order_) out = "(" + out + ")/(" + format(pole_) + "-x)^" + std::to_string(pole_order_);
  return out;
}

}  // namespace fck
