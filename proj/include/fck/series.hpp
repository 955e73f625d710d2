#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "fck/errors.hpp"
#include "fck/scalar.hpp"

namespace fck {

// Power series truncated after z^order. The order is also the valid order:
// operations that lose tail information return a lower order.
template <class F>
class TruncatedSeries {
 public:
  TruncatedSeries() : c_(1, F(0)) {}
  explicit TruncatedSeries(int order) : c_(check(order) + 1, F(0)) {}
  explicit TruncatedSeries(std::vector<F> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(F(0));
  }

  static TruncatedSeries constant(const F& c, int order) {
    TruncatedSeries s(order);
    s.c_[0] = c;
    return s;
  }
  static TruncatedSeries variable(int order) {
    TruncatedSeries s(order);
    if (order >= 1) s.c_[1] = F(1);
    return s;
  }
  // Truncation of a polynomial or longer coefficient list.
  static TruncatedSeries from_coeffs(std::span<const F> coeffs, int order) {
    TruncatedSeries s(order);
    for (std::size_t k = 0; k < coeffs.size() && k <= static_cast<std::size_t>(order); ++k) s.c_[k] = coeffs[k];
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const F& operator[](int k) const { return c_.at(static_cast<std::size_t>(k)); }
  F& operator[](int k) { return c_.at(static_cast<std::size_t>(k)); }
  const std::vector<F>& coeffs() const { return c_; }

  TruncatedSeries truncated(int order) const {
    if (order > this->order())
      throw DimensionError("cannot extend a series of order " + std::to_string(this->order()) + " to " +
                           std::to_string(order));
    return TruncatedSeries(std::vector<F>(c_.begin(), c_.begin() + order + 1));
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    same_order(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    same_order(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  TruncatedSeries& operator*=(const F& a) {
    for (auto& x : c_) x *= a;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator-(TruncatedSeries a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend TruncatedSeries operator*(TruncatedSeries a, const F& s) { return a *= s; }
  friend TruncatedSeries operator*(const F& s, TruncatedSeries a) { return a *= s; }
  friend TruncatedSeries operator+(TruncatedSeries a, const F& s) {
    a.c_[0] += s;
    return a;
  }
  friend TruncatedSeries operator-(TruncatedSeries a, const F& s) {
    a.c_[0] -= s;
    return a;
  }
  friend TruncatedSeries operator-(const F& s, const TruncatedSeries& a) { return -a + s; }
  friend TruncatedSeries operator+(const F& s, TruncatedSeries a) { return a + s; }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.same_order(b);
    int n = a.order();
    TruncatedSeries r(n);
    for (int i = 0; i <= n; ++i) {
      if (a.c_[i] == 0) continue;
      for (int j = 0; i + j <= n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }

  friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.same_order(b);
    if (b.c_[0] == 0) throw DivisionError("series division by a series with zero constant term");
    int n = a.order();
    TruncatedSeries r(n);
    for (int k = 0; k <= n; ++k) {
      F acc = a.c_[k];
      for (int j = 1; j <= k; ++j) acc -= b.c_[j] * r.c_[k - j];
      r.c_[k] = acc / b.c_[0];
    }
    return r;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.c_ == b.c_; }

  // Multiplication by z (the top coefficient falls off).
  TruncatedSeries times_z() const {
    TruncatedSeries r(order());
    for (int k = order(); k >= 1; --k) r.c_[k] = c_[k - 1];
    return r;
  }

  // Division by z; requires a zero constant term and drops one order.
  TruncatedSeries over_z() const {
    if (c_[0] != 0) throw DivisionError("dividing by z needs a zero constant term");
    if (order() == 0) throw DimensionError("dividing an order-0 series by z");
    return TruncatedSeries(std::vector<F>(c_.begin() + 1, c_.end()));
  }

  F sum_of_coeffs() const {
    F s(0);
    for (const auto& x : c_) s += x;
    return s;
  }

  F evaluate(const F& x) const {
    F acc(0);
    for (int k = order(); k >= 0; --k) acc = acc * x + c_[k];
    return acc;
  }

 private:
  static int check(int order) {
    if (order < 0) throw DimensionError("negative series order");
    return order;
  }
  void same_order(const TruncatedSeries& o) const {
    if (o.order() != order())
      throw DimensionError("series orders differ: " + std::to_string(order()) + " vs " + std::to_string(o.order()));
  }

  std::vector<F> c_;
};

enum class SeriesOp { add, sub, mul, div };

template <class F>
TruncatedSeries<F> series_arith(const TruncatedSeries<F>& a, const TruncatedSeries<F>& b, SeriesOp op) {
  switch (op) {
    case SeriesOp::add: return a + b;
    case SeriesOp::sub: return a - b;
    case SeriesOp::mul: return a * b;
    case SeriesOp::div: return a / b;
  }
  return a;
}

// Both series truncated to the smaller of their orders.
template <class F>
std::pair<TruncatedSeries<F>, TruncatedSeries<F>> common_order(const TruncatedSeries<F>& a,
                                                               const TruncatedSeries<F>& b) {
  int n = std::min(a.order(), b.order());
  return {a.truncated(n), b.truncated(n)};
}

// f(g(z)) through the common order.
template <class F>
TruncatedSeries<F> compose(const TruncatedSeries<F>& f, const TruncatedSeries<F>& g) {
  if (g[0] != 0) throw CompositionDomainError("compose: inner series has a nonzero constant term");
  if (f.order() != g.order())
    throw DimensionError("compose: series orders differ: " + std::to_string(f.order()) + " vs " +
                         std::to_string(g.order()));
  int n = f.order();
  TruncatedSeries<F> r = TruncatedSeries<F>::constant(f[n], n);
  for (int k = n - 1; k >= 0; --k) r = r * g + f[k];
  return r;
}

// Compositional inverse.
template <class F>
TruncatedSeries<F> revert(const TruncatedSeries<F>& f) {
  if (f[0] != 0) throw ReversionDomainError("revert: series has a nonzero constant term");
  int n = f.order();
  if (n == 0) return TruncatedSeries<F>(0);
  if (f[1] == 0) throw ReversionDomainError("revert: linear coefficient vanishes");
  TruncatedSeries<F> g(n);
  g[1] = F(1) / f[1];
  for (int k = 2; k <= n; ++k) {
    // coefficient k of f(g) with g_k still zero
    TruncatedSeries<F> gk = g.truncated(k);
    TruncatedSeries<F> fk = f.truncated(k);
    F c = compose(fk, gk)[k];
    g[k] = -c / f[1];
  }
  return g;
}

// D^k: shift coefficients down by k; the order drops to order-k.
template <class F>
TruncatedSeries<F> zero_derivative(const TruncatedSeries<F>& h, int k) {
  if (k < 0 || k > h.order())
    throw DimensionError("zero derivative of order " + std::to_string(k) + " on a series of order " +
                         std::to_string(h.order()));
  const auto& c = h.coeffs();
  return TruncatedSeries<F>(std::vector<F>(c.begin() + k, c.end()));
}

// (h(z) - h(1))/(z - 1) with h(1) supplied by the caller.
template <class F>
TruncatedSeries<F> psi_of_D(const TruncatedSeries<F>& h, const F& h_at_1) {
  TruncatedSeries<F> g(h.order());
  F partial(0);
  for (int j = 0; j <= h.order(); ++j) {
    partial += h[j];
    g[j] = h_at_1 - partial;
  }
  return g;
}

// Coefficientwise agreement through the common valid order.
template <class F>
bool series_near(const TruncatedSeries<F>& a, const TruncatedSeries<F>& b, const Real& tol) {
  int n = std::min(a.order(), b.order());
  for (int k = 0; k <= n; ++k)
    if (!FieldTraits<F>::near(a[k], b[k], tol)) return false;
  return true;
}

template <class F>
Real series_max_delta(const TruncatedSeries<F>& a, const TruncatedSeries<F>& b) {
  int n = std::min(a.order(), b.order());
  Real m(0);
  for (int k = 0; k <= n; ++k) m = std::max(m, FieldTraits<F>::magnitude(a[k] - b[k]));
  return m;
}

template <class F>
std::string series_to_string(const TruncatedSeries<F>& s) {
  std::string out = "[";
  for (int k = 0; k <= s.order(); ++k) {
    if (k) out += ", ";
    out += format(s[k]);
  }
  return out + "]";
}

}  // namespace fck
