#pragma once

#include <optional>
#include <string>

#include "fck/distributions.hpp"
#include "fck/freeprod.hpp"
#include "fck/functions.hpp"
#include "fck/series.hpp"
#include "fck/subordination.hpp"

namespace fck {

enum class EtaPath { definition, closed_form };

std::string eta_path_name(EtaPath p);
EtaPath parse_eta_path(const std::string& s);

// phi(f(T)): exact for polynomials, certified Neumann expansion otherwise (float only).
template <class F>
Expectation<F> expectation_of(const SpectralDistribution<F>& d, const FunctionDescriptor<F>& f);

// sum_k h_k phi(D^k f(T)) D^k target, for polynomial f. Order drops by the degree of f.
template <class F>
TruncatedSeries<F> phi_D_apply(const TruncatedSeries<F>& H, const FunctionDescriptor<F>& f,
                               const SpectralDistribution<F>& d, const TruncatedSeries<F>& target);

// The same with H = psi. f is a polynomial or N(x)/(1-x); the latter needs target(1).
template <class F>
TruncatedSeries<F> phi_D_psi_apply(const FunctionDescriptor<F>& f, const SpectralDistribution<F>& d,
                                   const TruncatedSeries<F>& target, const std::optional<F>& target_at_1 = {});

// eta(1) and eta'(1) through phi(psi(U)) and phi(U(1-U)^-2).
template <class F>
struct EtaAtOne {
  F value;
  F derivative;
  F inv1m_mean;  // phi((1-U)^-1)
  Real error_bound{0};
};

template <class F>
EtaAtOne<F> eta_at_one(const SpectralDistribution<F>& d);

template <class F>
TruncatedSeries<F> eta_fg_series(const FunctionDescriptor<F>& f, const FunctionDescriptor<F>& g,
                                 const SpectralDistribution<F>& u, int N, EtaPath path);
template <class F>
TruncatedSeries<F> eta_f_series(const FunctionDescriptor<F>& f, const SpectralDistribution<F>& u, int N,
                                EtaPath path);

// z-series of phi(result * V^m).
template <class F>
struct PairingFunction {
  TruncatedSeries<F> scalar_part;
  TruncatedSeries<F> v_coefficient;
  TruncatedSeries<F> omega1;
  SpectralDistribution<F> v;

  TruncatedSeries<F> operator()(int m) const;
};

template <class F>
PairingFunction<F> condexp_pairing(const FunctionDescriptor<F>& f, const FunctionDescriptor<F>& g,
                                   const Subordinator<F>& s, int N);

// sum_{n>=1} z^n phi(f(U) V (UV)^{n-1} g(U) V^m)
template <class F>
TruncatedSeries<F> pairing_oracle(const FunctionDescriptor<F>& f, const FunctionDescriptor<F>& g,
                                  const FreeProductEngine<F>& e, int N, int m);

template <class F>
struct LukacsAB {
  TruncatedSeries<F> A;
  TruncatedSeries<F> B;
  PairingFunction<F> pairing;
  EtaAtOne<F> at_one;
};

template <class F>
LukacsAB<F> lukacs_AB(const Subordinator<F>& s, int N);

// The same word written with the half-powers of U removed by traciality.
template <class F>
TruncatedSeries<F> lukacs_pairing_oracle(const FreeProductEngine<F>& e, int N, int m);

// Grouped Boolean cumulant with a power entry against the stated expansion.
template <class F>
struct PowersIdentity {
  F left;
  F right;
};

template <class F>
PowersIdentity<F> boolean_powers_identity(const SpectralDistribution<F>& u, const FunctionDescriptor<F>& G, int r,
                                          int i);

}  // namespace fck
