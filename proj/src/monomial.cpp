#include "cforge/monomial.hpp"

#include <cmath>

namespace cforge {

namespace {

void enumerate_exponents(int n, int remaining, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(remaining);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur.push_back(e);
    enumerate_exponents(n, remaining - e, cur, out);
    cur.pop_back();
  }
}

}  // namespace

MonomialBasis build_basis(int n, int d) {
  if (n < 1 || d < 1) throw InvalidInput("build_basis requires n >= 1, d >= 1");
  Int count = binomial(static_cast<unsigned long>(n + d - 1),
                       static_cast<unsigned long>(d));
  if (count > 10000000)
    throw InvalidInput("basis too large: N = " + count.get_str());
  MonomialBasis basis;
  basis.n = n;
  basis.d = d;
  basis.exponents.reserve(count.get_ui());
  std::vector<int> cur;
  enumerate_exponents(n, d, cur, basis.exponents);
  return basis;
}

CoeffVector::CoeffVector(BasisPtr b, std::vector<Int> e)
    : basis(std::move(b)), entries(std::move(e)) {
  if (!basis || entries.size() != basis->size())
    throw InvalidInput("coefficient vector length does not match basis size");
}

std::vector<Int> veronese(const MonomialBasis& basis, const std::vector<Int>& x) {
  if (x.size() != static_cast<size_t>(basis.n))
    throw InvalidInput("veronese: point has wrong dimension");
  std::vector<Int> out;
  out.reserve(basis.size());
  for (const auto& exps : basis.exponents) {
    Int m = 1;
    for (int j = 0; j < basis.n; ++j)
      if (exps[j] > 0) m *= ipow(x[j], exps[j]);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<double> veronese(const MonomialBasis& basis,
                             const std::vector<double>& x) {
  if (x.size() != static_cast<size_t>(basis.n))
    throw InvalidInput("veronese: point has wrong dimension");
  std::vector<double> out;
  out.reserve(basis.size());
  for (const auto& exps : basis.exponents) {
    double m = 1.0;
    for (int j = 0; j < basis.n; ++j)
      for (int e = 0; e < exps[j]; ++e) m *= x[j];
    out.push_back(m);
  }
  return out;
}

Int evaluate_form(const CoeffVector& a, const std::vector<Int>& x) {
  auto nu = veronese(*a.basis, x);
  Int acc = 0;
  for (size_t i = 0; i < nu.size(); ++i) acc += a.entries[i] * nu[i];
  return acc;
}

double evaluate_form(const CoeffVector& a, const std::vector<double>& x) {
  auto nu = veronese(*a.basis, x);
  double acc = 0;
  for (size_t i = 0; i < nu.size(); ++i) acc += a.entries[i].get_d() * nu[i];
  return acc;
}

std::vector<size_t> pure_power_positions(const MonomialBasis& basis) {
  std::vector<size_t> pos(basis.n, 0);
  for (size_t i = 0; i < basis.size(); ++i) {
    for (int j = 0; j < basis.n; ++j) {
      if (basis.exponents[i][j] == basis.d) {
        pos[j] = i;
        break;
      }
    }
  }
  return pos;
}

CoeffVector merge_split(BasisPtr basis, const SplitCoeff& s) {
  size_t n = basis->n;
  size_t N = basis->size();
  if (s.b.size() != n || s.c.size() != N - n)
    throw InvalidInput("merge_split: split dimensions do not match basis");
  auto pure = pure_power_positions(*basis);
  std::vector<bool> is_pure(N, false);
  for (size_t p : pure) is_pure[p] = true;
  std::vector<Int> entries(N);
  for (size_t i = 0; i < n; ++i) entries[pure[i]] = s.b[i];
  size_t j = 0;
  for (size_t i = 0; i < N; ++i)
    if (!is_pure[i]) entries[i] = s.c[j++];
  return CoeffVector(std::move(basis), std::move(entries));
}

SplitCoeff split_merge(const CoeffVector& a) {
  const auto& basis = *a.basis;
  auto pure = pure_power_positions(basis);
  std::vector<bool> is_pure(basis.size(), false);
  for (size_t p : pure) is_pure[p] = true;
  SplitCoeff s;
  s.b.reserve(basis.n);
  s.c.reserve(basis.size() - basis.n);
  for (size_t p : pure) s.b.push_back(a.entries[p]);
  for (size_t i = 0; i < basis.size(); ++i)
    if (!is_pure[i]) s.c.push_back(a.entries[i]);
  return s;
}

ExperimentParams make_params(int n, int d, int k, double A, double X) {
  if (n < 1 || d < 1 || k < 1) throw InvalidInput("make_params: n, d, k >= 1");
  if (!(A > 0) || !(X > 0)) throw InvalidInput("make_params: A, X > 0");
  ExperimentParams p;
  p.n = n;
  p.d = d;
  p.k = k;
  p.A = A;
  p.X = X;
  p.w = std::log(X);
  p.W = 1;
  if (p.w >= 2) {
    for (long prime : primes_up_to(static_cast<long>(p.w))) {
      Int q = prime;
      // largest prime power p^h <= w
      while (mpz_cmp_d(Int(q * prime).get_mpz_t(), p.w) <= 0) q *= prime;
      p.W *= q;
    }
  }
  p.zeta = p.w > 1 ? std::pow(p.w, -4.0 - 1.0 / (8.0 * d)) : 0.0;
  return p;
}

GateReport hypothesis_gate(const ExperimentParams& p) {
  GateReport g;
  g.N = binomial(static_cast<unsigned long>(p.n + p.d - 1),
                 static_cast<unsigned long>(p.d));
  // n = 8s + r with 1 <= r <= 8
  g.r = (p.n - 1) % 8 + 1;
  g.s = (p.n - g.r) / 8;
  g.s_ge_3d = g.s >= 3L * p.d;
  double logA = std::log(p.A);
  double logX = std::log(p.X);
  g.A_in_range = 2.0 * p.d * logX <= logA &&
                 (g.s - p.d > 0 && logA <= (g.s - p.d) * logX);
  Int moment_bound = Int(200) * p.k * (p.k - 1) * ipow(Int(2), p.k - 1);
  g.N_ge_moment_bound = g.N >= moment_bound;
  Int census_bound = Int(1000) * p.n * p.n * ipow(Int(8), p.k);
  g.N_ge_census_bound = g.N >= census_bound;
  g.corollary_triple = p.d >= 17 && p.k <= p.d && p.n > 24 * p.d;

  // 1000 * 8^d <= 25^{d-2} / d^2, exact
  g.corollary_base = p.d >= 3 && Int(1000) * ipow(Int(8), p.d) * p.d * p.d <=
                                     ipow(Int(25), p.d - 2);

  // 1000 n^2 8^k <= 1000 * 8^d (n+d-1)^2 <= ((n+d-1)/d)^d <= C(n+d-1, d)
  Int m = p.n + p.d - 1;
  Int lhs1 = census_bound;
  Int mid = Int(1000) * ipow(Int(8), p.d) * m * m;
  bool step1 = lhs1 <= mid;
  bool step2 = mid * ipow(Int(p.d), p.d) <= ipow(m, p.d);
  bool step3 = ipow(m, p.d) <= ipow(Int(p.d), p.d) * g.N;
  g.corollary_chain = step1 && step2 && step3;
  return g;
}

}  // namespace cforge
