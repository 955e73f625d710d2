#pragma once

#include <vector>

#include "fck/scalar.hpp"

namespace fck {

// A polynomial letter: in X, or in Z = X + Y - shift.
template <class F>
struct SumLetter {
  bool on_sum = false;
  std::vector<F> coeffs;
};

// Joint moments of words in X and polynomials of X + Y for free X, Y whose free cumulants
// are geometric: kappa_s(X) = lx ax^s, kappa_s(Y) = ly ay^s (free Poisson laws).
// Polynomial letters are never expanded into words; the evaluator runs a non-crossing
// first-block recursion over the chain graph of the letters, O(L^3) in the total degree L.
template <class F>
class PoissonSumEngine {
 public:
  PoissonSumEngine(F ax, F lx, F ay, F ly, F shift = F(0));

  F moment(const std::vector<SumLetter<F>>& word) const;
  const F& shift() const { return shift_; }

 private:
  F ax_, lx_, ay_, ly_, shift_;
};

// Chebyshev truncation of 1/x on [a, b], 0 < a < b, as monomial coefficients in (x - (a+b)/2).
struct InverseApprox {
  std::vector<Real> coeffs;
  Real centre;
  Real error_bound;  // sup over [a, b] of |1/x - p(x)|
};

InverseApprox chebyshev_inverse(const Real& a, const Real& b, int degree);

}  // namespace fck
