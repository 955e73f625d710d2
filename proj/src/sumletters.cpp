#include "fck/sumletters.hpp"

#include "fck/errors.hpp"

namespace fck {

template <class F>
PoissonSumEngine<F>::PoissonSumEngine(F ax, F lx, F ay, F ly, F shift)
    : ax_(std::move(ax)), lx_(std::move(lx)), ay_(std::move(ay)), ly_(std::move(ly)), shift_(std::move(shift)) {}

template <class F>
F PoissonSumEngine<F>::moment(const std::vector<SumLetter<F>>& word) const {
  // chain graph: node 0 is the start; letter of degree D adds nodes a_0..a_D, entered at a_{D-k} with c_k
  struct Node {
    int eps_from = -1;
    F eps_weight{0};
    int atom_to = -1;
    bool sum_atom = false;
  };
  std::vector<Node> g(1);
  F scalar(1);
  int exit = 0;
  for (const auto& l : word) {
    int D = static_cast<int>(l.coeffs.size()) - 1;
    while (D > 0 && l.coeffs[D] == 0) --D;
    if (D < 0) return F(0);
    if (D == 0) {
      scalar *= l.coeffs[0];
      continue;
    }
    int base = static_cast<int>(g.size());
    g.resize(g.size() + D + 1);
    for (int i = 0; i <= D; ++i) {
      int k = D - i;
      if (l.coeffs[k] != 0) {
        g[base + i].eps_from = exit;
        g[base + i].eps_weight = l.coeffs[k];
      }
      if (i < D) {
        g[base + i].atom_to = base + i + 1;
        g[base + i].sum_atom = l.on_sum;
      }
    }
    exit = base + D;
  }
  if (scalar == 0) return F(0);
  const int N = static_cast<int>(g.size());
  auto idx = [N](int u, int v) { return static_cast<std::size_t>(u) * N + v; };

  std::vector<F> eps(static_cast<std::size_t>(N) * N, F(0));
  for (int u = 0; u < N; ++u) {
    eps[idx(u, u)] = 1;
    for (int v = u + 1; v < N; ++v)
      if (g[v].eps_from >= u) eps[idx(u, v)] = eps[idx(u, g[v].eps_from)] * g[v].eps_weight;
  }

  std::vector<F> phi(static_cast<std::size_t>(N) * N, F(0));
  std::vector<F> tx(N), ty(N), tz(N), accx(N), accy(N), close(N);
  for (int u = N - 1; u >= 0; --u) {
    for (int y = 0; y < N; ++y) {
      tx[y] = ty[y] = tz[y] = F(0);
      accx[y] = y >= u ? eps[idx(u, y)] : F(0);
      accy[y] = accx[y];
    }
    for (int y = u; y < N; ++y) {
      if (y > u) {
        if (tx[y] != 0)
          for (int z = y; z < N; ++z) accx[z] += tx[y] * phi[idx(y, z)];
        if (ty[y] != 0)
          for (int z = y; z < N; ++z) accy[z] += ty[y] * phi[idx(y, z)];
      }
      int t = g[y].atom_to;
      if (t < 0) continue;
      tx[t] += accx[y] * ax_;
      if (g[y].sum_atom) {
        ty[t] += accy[y] * ay_;
        // singleton correction for the shift: kappa_1(Z) = kappa_1(X) + kappa_1(Y) - shift
        if (shift_ != 0 && eps[idx(u, y)] != 0) tz[t] -= eps[idx(u, y)] * shift_;
      }
    }
    for (int x = u + 1; x < N; ++x) close[x] = lx_ * tx[x] + ly_ * ty[x] + tz[x];
    for (int v = u; v < N; ++v) {
      F s = eps[idx(u, v)];
      for (int x = u + 1; x <= v; ++x)
        if (close[x] != 0) s += close[x] * phi[idx(x, v)];
      phi[idx(u, v)] = s;
    }
  }
  return scalar * phi[idx(0, exit)];
}

InverseApprox chebyshev_inverse(const Real& a, const Real& b, int degree) {
  if (!(a > 0) || !(b > a)) throw DomainError("inverse approximation needs 0 < a < b");
  if (degree < 0) throw DomainError("negative approximation degree");
  Real m = (a + b) / 2, h = (b - a) / 2, z = m / h;
  Real root = mp::sqrt(z * z - 1);
  Real s = z - root;
  Real scale = 2 / (h * root);
  // 1/x = scale * sum' (-s)^k T_k(t), t = (x - m)/h
  std::vector<Real> cheb(degree + 1);
  Real p(1);
  for (int k = 0; k <= degree; ++k) {
    cheb[k] = scale * p * (k == 0 ? Real(1) / 2 : Real(1));
    p *= -s;
  }
  // monomial coefficients in t via the three-term recurrence
  std::vector<Real> tkm1(degree + 1, Real(0)), tk(degree + 1, Real(0)), mono(degree + 1, Real(0));
  tkm1[0] = 1;
  if (degree >= 1) tk[1] = 1;
  mono[0] += cheb[0];
  if (degree >= 1) mono[1] += cheb[1];
  for (int k = 2; k <= degree; ++k) {
    std::vector<Real> next(degree + 1, Real(0));
    for (int j = 0; j < degree; ++j) next[j + 1] += 2 * tk[j];
    for (int j = 0; j <= degree; ++j) next[j] -= tkm1[j];
    for (int j = 0; j <= degree; ++j) mono[j] += cheb[k] * next[j];
    tkm1 = std::move(tk);
    tk = std::move(next);
  }
  InverseApprox out;
  out.centre = m;
  out.coeffs.resize(degree + 1);
  Real hp(1);
  for (int j = 0; j <= degree; ++j) {
    out.coeffs[j] = mono[j] / hp;
    hp *= h;
  }
  Real mass(0);
  for (const auto& c : mono) mass += mp::abs(c);
  Real rounding = mass * mp::pow(Real(10), -static_cast<int>(Real::default_precision()) + 5);
  out.error_bound = scale * mp::pow(s, degree + 1) / (1 - s) + rounding;
  return out;
}

template class PoissonSumEngine<Rational>;
template class PoissonSumEngine<Real>;

}  // namespace fck
