#include "fck/condexp.hpp"

#include <map>
#include <mutex>

#include "fck/cumulants.hpp"

namespace fck {

std::string eta_path_name(EtaPath p) { return p == EtaPath::definition ? "definition" : "closed"; }

EtaPath parse_eta_path(const std::string& s) {
  if (s == "definition") return EtaPath::definition;
  if (s == "closed" || s == "closed_form") return EtaPath::closed_form;
  throw ParseError("unknown path '" + s + "' (expected definition or closed)");
}

template <class F>
Expectation<F> expectation_of(const SpectralDistribution<F>& d, const FunctionDescriptor<F>& f) {
  if (f.is_polynomial()) {
    F s(0);
    const auto& c = f.numerator();
    for (std::size_t k = 0; k < c.size(); ++k)
      if (c[k] != 0) s += c[k] * d.moment(static_cast<int>(k));
    return {s, Real(0), f.degree()};
  }
  if constexpr (std::is_same_v<F, Rational>) {
    throw CapabilityError("exact backend cannot evaluate phi(" + f.to_string() + "); use the float backend");
  } else {
    ExpectOptions o;
    o.method = ExpectMethod::neumann;
    return expect_function(d, f, o);
  }
}

namespace {

// Degree by which phi_D(psi, f) lowers the valid order.
template <class F>
int operator_degree(const FunctionDescriptor<F>& f) {
  if (f.is_polynomial()) return f.degree();
  return std::max(0, f.degree() - 1);
}

// f = P(x) + c/(1-x); returns {P, c}.
template <class F>
std::pair<FunctionDescriptor<F>, F> split_pole(const FunctionDescriptor<F>& f) {
  if (f.is_polynomial()) return {f, F(0)};
  if (f.pole() != 1 || f.pole_order() != 1)
    throw CapabilityError("closed forms need a polynomial or N(x)/(1-x); got " + f.to_string());
  const auto& n = f.numerator();
  F c(0);
  for (auto it = n.rbegin(); it != n.rend(); ++it) c = c + *it;
  // N(x) - c = (x - 1) Q(x), P = -Q
  std::vector<F> a(n);
  a[0] -= c;
  std::vector<F> q(a.size() > 1 ? a.size() - 1 : 1, F(0));
  F carry(0);
  for (int k = static_cast<int>(a.size()) - 1; k >= 1; --k) {
    carry = a[k] + carry;
    q[k - 1] = carry;
  }
  for (auto& x : q) x = -x;
  return {FunctionDescriptor<F>::poly(q), c};
}

template <class F>
TruncatedSeries<F> weighted_derivatives(const FunctionDescriptor<F>& p, const SpectralDistribution<F>& d,
                                        const TruncatedSeries<F>& target, int kmin) {
  int K = p.degree();
  if (K > target.order())
    throw DimensionError("target series of order " + std::to_string(target.order()) + " is too short for degree " +
                         std::to_string(K));
  TruncatedSeries<F> out(target.order() - std::max(K, 0));
  for (int k = kmin; k <= K; ++k) {
    F w = expectation_of(d, p.zero_shift(k)).value;
    if (w == 0) continue;
    out += zero_derivative(target, k).truncated(out.order()) * w;
  }
  return out;
}

template <class F>
F function_at_zero(const FunctionDescriptor<F>& f) {
  return f(F(0));
}

// Commutative oracle: argument i is alphabet[i](U).
template <class F>
MomentOracle<F> function_oracle(const SpectralDistribution<F>& d, std::vector<FunctionDescriptor<F>> alphabet) {
  struct Cache {
    std::mutex mutex;
    std::map<std::vector<int>, F> values;
  };
  auto cache = std::make_shared<Cache>();
  return [d, alphabet = std::move(alphabet), cache](std::span<const ArgId> w) {
    std::vector<int> counts(alphabet.size(), 0);
    for (ArgId a : w) ++counts.at(a);
    {
      std::lock_guard lock(cache->mutex);
      auto it = cache->values.find(counts);
      if (it != cache->values.end()) return it->second;
    }
    auto fn = FunctionDescriptor<F>::constant(F(1));
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      for (int k = 0; k < counts[i]; ++k) fn = fn * alphabet[i];
    F v = expectation_of(d, fn).value;
    std::lock_guard lock(cache->mutex);
    cache->values.emplace(counts, v);
    return v;
  };
}

template <class F>
TruncatedSeries<F> eta_series(const SpectralDistribution<F>& d, int N) {
  return transform_series(d, Transform::eta, N);
}

// (phi_D(psi, g) eta)(1)
template <class F>
F psi_apply_at_one(const FunctionDescriptor<F>& g, const SpectralDistribution<F>& d, const TruncatedSeries<F>& eta,
                   const EtaAtOne<F>& at) {
  auto [p, c] = split_pole(g);
  F total(0), head(0);
  for (int k = 1; k <= p.degree(); ++k) {
    head += eta[k - 1];
    F w = expectation_of(d, p.zero_shift(k)).value;
    total += w * (at.value - head);
  }
  if (c != 0) total += c * at.inv1m_mean * at.derivative;
  return total;
}

}  // namespace

template <class F>
TruncatedSeries<F> phi_D_apply(const TruncatedSeries<F>& H, const FunctionDescriptor<F>& f,
                               const SpectralDistribution<F>& d, const TruncatedSeries<F>& target) {
  if (!f.is_polynomial())
    throw CapabilityError("phi_D with a general weight series needs a polynomial function; got " + f.to_string());
  int K = std::min(f.degree(), H.order());
  if (K > target.order()) throw DimensionError("target series too short");
  TruncatedSeries<F> out(target.order() - K);
  for (int k = 0; k <= K; ++k) {
    if (H[k] == 0) continue;
    F w = H[k] * expectation_of(d, f.zero_shift(k)).value;
    if (w == 0) continue;
    out += zero_derivative(target, k).truncated(out.order()) * w;
  }
  return out;
}

template <class F>
TruncatedSeries<F> phi_D_psi_apply(const FunctionDescriptor<F>& f, const SpectralDistribution<F>& d,
                                   const TruncatedSeries<F>& target, const std::optional<F>& target_at_1) {
  auto [p, c] = split_pole(f);
  auto out = weighted_derivatives(p, d, target, 1);
  if (c != 0) {
    F w = c * expectation_of(d, FunctionDescriptor<F>::inv1m()).value;
    if (!target_at_1) throw PreconditionError("phi_D(psi, " + f.to_string() + ") needs the target's value at 1");
    out += psi_of_D(target, *target_at_1).truncated(out.order()) * w;
  }
  return out;
}

template <class F>
EtaAtOne<F> eta_at_one(const SpectralDistribution<F>& d) {
  auto m1 = expectation_of(d, FunctionDescriptor<F>::psi());
  auto mp = expectation_of(d, FunctionDescriptor<F>::rational({F(0), F(1)}, F(1), 2));
  auto inv = expectation_of(d, FunctionDescriptor<F>::inv1m());
  F one = F(1) + m1.value;
  EtaAtOne<F> out{m1.value / one, mp.value / (one * one), inv.value, Real(0)};
  out.error_bound = m1.error_bound * (1 + 2 * FieldTraits<F>::magnitude(mp.value)) + mp.error_bound + inv.error_bound;
  return out;
}

template <class F>
TruncatedSeries<F> eta_fg_series(const FunctionDescriptor<F>& f, const FunctionDescriptor<F>& g,
                                 const SpectralDistribution<F>& u, int N, EtaPath path) {
  if (path == EtaPath::definition) {
    CumulantOptions o;
    o.max_length = std::max(N + 3, kDefaultPartitionCap);
    CumulantEngine<F> e(function_oracle(u, {f, FunctionDescriptor<F>::identity(), g}), o);
    TruncatedSeries<F> out(N);
    ArgWord w{0};
    for (int l = 0; l <= N; ++l) {
      ArgWord full = w;
      full.push_back(2);
      out[l] = e.boolean_cumulant(full);
      w.push_back(1);
    }
    return out;
  }
  int need = N + operator_degree(f) + operator_degree(g);
  auto eta = eta_series(u, need);
  std::optional<EtaAtOne<F>> at;
  if (!f.is_polynomial() || !g.is_polynomial()) at = eta_at_one(u);
  std::optional<F> eta1, inner1;
  if (at) eta1 = at->value;
  auto inner = phi_D_psi_apply(g, u, eta, eta1);
  if (!f.is_polynomial()) inner1 = psi_apply_at_one(g, u, eta, *at);
  return phi_D_psi_apply(f, u, inner, inner1).truncated(N);
}

template <class F>
TruncatedSeries<F> eta_f_series(const FunctionDescriptor<F>& f, const SpectralDistribution<F>& u, int N,
                                EtaPath path) {
  if (path == EtaPath::definition) {
    CumulantOptions o;
    o.max_length = std::max(N + 2, kDefaultPartitionCap);
    CumulantEngine<F> e(function_oracle(u, {f, FunctionDescriptor<F>::identity()}), o);
    TruncatedSeries<F> out(N);
    ArgWord w{0};
    for (int l = 0; l <= N; ++l) {
      out[l] = e.boolean_cumulant(w);
      w.push_back(1);
    }
    return out;
  }
  int need = N + operator_degree(f) + 1;
  auto eta = eta_series(u, need);
  std::optional<F> eta1;
  if (!f.is_polynomial()) eta1 = eta_at_one(u).value;
  // (D eta)(1) = eta(1) since eta(0) = 0
  auto part1 = phi_D_psi_apply(f, u, zero_derivative(eta, 1), eta1).truncated(N).times_z();
  F part0 = phi_D_psi_apply(f, u, eta, eta1)[0];
  return part1 + (part0 + function_at_zero(f));
}

template <class F>
TruncatedSeries<F> PairingFunction<F>::operator()(int m) const {
  int N = scalar_part.order();
  auto out = scalar_part * v.moment(m);
  auto s = TruncatedSeries<F>::constant(v.moment(m + 1), N);
  auto p = omega1;
  for (int k = 1; k <= N; ++k) {
    s += p * v.moment(k + m + 1);
    p = p * omega1;
  }
  return out + v_coefficient * s;
}

template <class F>
PairingFunction<F> condexp_pairing(const FunctionDescriptor<F>& f, const FunctionDescriptor<F>& g,
                                   const Subordinator<F>& s, int N) {
  const auto& om = s.omega(OmegaRoute::boolean_series, N);
  const auto& u = s.left();
  auto efg = eta_fg_series(f, g, u, N, EtaPath::closed_form);
  auto ef = eta_f_series(f, u, N, EtaPath::closed_form);
  auto eg = eta_f_series(g, u, N, EtaPath::closed_form);
  PairingFunction<F> out;
  out.scalar_part = om.omega2 * compose(efg, om.omega2);
  out.v_coefficient = (compose(ef, om.omega2) * compose(eg, om.omega2)).times_z();
  out.omega1 = om.omega1;
  out.v = s.right();
  return out;
}

template <class F>
TruncatedSeries<F> pairing_oracle(const FunctionDescriptor<F>& f, const FunctionDescriptor<F>& g,
                                  const FreeProductEngine<F>& e, int N, int m) {
  TruncatedSeries<F> out(N);
  auto U = power_letter<F>(Tag::left, 1), V = power_letter<F>(Tag::right, 1);
  for (int n = 1; n <= N; ++n) {
    Word<F> w{{Tag::left, f}, V};
    for (int k = 1; k < n; ++k) {
      w.push_back(U);
      w.push_back(V);
    }
    w.push_back({Tag::left, g});
    if (m > 0) w.push_back(power_letter<F>(Tag::right, m));
    out[n] = e.joint_moment(w);
  }
  return out;
}

template <class F>
LukacsAB<F> lukacs_AB(const Subordinator<F>& s, int N) {
  const auto& u = s.left();
  if (!u.support()) throw CapabilityError("law '" + u.label() + "' has no support hint");
  auto [lo, hi] = u.support()->hull();
  if (lo < 0 || hi >= 1) throw CapabilityError("spectrum of U must lie in [0, rho] with rho < 1");
  LukacsAB<F> out;
  out.at_one = eta_at_one(u);
  const auto& at = out.at_one;
  const auto& om = s.omega(OmegaRoute::boolean_series, N);
  auto eta = compose(eta_series(u, N), om.omega2);
  auto w1 = om.omega2 - F(1);
  out.A = (eta - at.value) / w1 * at.inv1m_mean;
  out.B = om.omega2 * (eta - at.value - w1 * at.derivative) / (w1 * w1) * (at.inv1m_mean * at.inv1m_mean);
  out.pairing.scalar_part = out.B;
  out.pairing.v_coefficient = (out.A * out.A).times_z();
  out.pairing.omega1 = om.omega1;
  out.pairing.v = s.right();
  return out;
}

template <class F>
TruncatedSeries<F> lukacs_pairing_oracle(const FreeProductEngine<F>& e, int N, int m) {
  TruncatedSeries<F> out(N);
  auto U = power_letter<F>(Tag::left, 1), V = power_letter<F>(Tag::right, 1);
  Letter<F> R{Tag::left, FunctionDescriptor<F>::inv1m()};
  for (int n = 1; n <= N; ++n) {
    // (1-U)^-1 U^{1/2} (U^{1/2} V U^{1/2})^n U^{1/2} (1-U)^-1 V^m
    Word<F> w{R, U, V};
    for (int k = 1; k < n; ++k) {
      w.push_back(U);
      w.push_back(V);
    }
    w.push_back(U);
    w.push_back(R);
    if (m > 0) w.push_back(power_letter<F>(Tag::right, m));
    out[n] = e.joint_moment(w);
  }
  return out;
}

template <class F>
PowersIdentity<F> boolean_powers_identity(const SpectralDistribution<F>& u, const FunctionDescriptor<F>& G, int r,
                                          int i) {
  if (r < 1 || i < 1) throw DomainError("power identity needs r >= 1 and i >= 1");
  auto oracle = function_oracle(u, {G, FunctionDescriptor<F>::identity()});
  ArgWord args{0};
  for (int k = 1; k < r + i; ++k) args.push_back(1);
  std::vector<std::vector<int>> blocks;
  for (int k = 1; k <= r; ++k) blocks.push_back({k});
  std::vector<int> last;
  for (int k = r + 1; k <= r + i; ++k) last.push_back(k);
  blocks.push_back(last);
  PowersIdentity<F> out{grouped_boolean_cumulant(oracle, args, Partition(r + i, blocks)), F(0)};
  CumulantOptions o;
  o.max_length = std::max(r + i + 1, kDefaultPartitionCap);
  CumulantEngine<F> e(oracle, o);
  for (int m = 1; m <= i; ++m) {
    ArgWord w{0};
    for (int k = 1; k < r + m; ++k) w.push_back(1);
    out.right += e.boolean_cumulant(w) * u.moment(i - m);
  }
  return out;
}

#define FCK_INSTANTIATE(F)                                                                                     \
  template Expectation<F> expectation_of(const SpectralDistribution<F>&, const FunctionDescriptor<F>&);       \
  template TruncatedSeries<F> phi_D_apply(const TruncatedSeries<F>&, const FunctionDescriptor<F>&,            \
                                          const SpectralDistribution<F>&, const TruncatedSeries<F>&);         \
  template TruncatedSeries<F> phi_D_psi_apply(const FunctionDescriptor<F>&, const SpectralDistribution<F>&,   \
                                              const TruncatedSeries<F>&, const std::optional<F>&);            \
  template EtaAtOne<F> eta_at_one(const SpectralDistribution<F>&);                                             \
  template TruncatedSeries<F> eta_fg_series(const FunctionDescriptor<F>&, const FunctionDescriptor<F>&,       \
                                            const SpectralDistribution<F>&, int, EtaPath);                    \
  template TruncatedSeries<F> eta_f_series(const FunctionDescriptor<F>&, const SpectralDistribution<F>&, int, \
                                           EtaPath);                                                          \
  template struct PairingFunction<F>;                                                                          \
  template PairingFunction<F> condexp_pairing(const FunctionDescriptor<F>&, const FunctionDescriptor<F>&,     \
                                              const Subordinator<F>&, int);                                    \
  template TruncatedSeries<F> pairing_oracle(const FunctionDescriptor<F>&, const FunctionDescriptor<F>&,      \
                                             const FreeProductEngine<F>&, int, int);                          \
  template LukacsAB<F> lukacs_AB(const Subordinator<F>&, int);                                                 \
  template TruncatedSeries<F> lukacs_pairing_oracle(const FreeProductEngine<F>&, int, int);                   \
  template PowersIdentity<F> boolean_powers_identity(const SpectralDistribution<F>&, const FunctionDescriptor<F>&, \
                                                     int, int);

FCK_INSTANTIATE(Rational)
FCK_INSTANTIATE(Real)

}  // namespace fck
