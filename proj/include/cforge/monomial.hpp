#pragma once

#include <memory>
#include <vector>

#include "cforge/common.hpp"

namespace cforge {

// All degree-d monomials in n variables, listed in strictly decreasing
// lexicographic order of the exponent tuples (x1 most significant), so the
// list starts at x1^d and ends at xn^d.
struct MonomialBasis {
  int n = 0;
  int d = 0;
  std::vector<std::vector<int>> exponents;

  size_t size() const { return exponents.size(); }
};

MonomialBasis build_basis(int n, int d);

using BasisPtr = std::shared_ptr<const MonomialBasis>;

inline BasisPtr shared_basis(int n, int d) {
  return std::make_shared<MonomialBasis>(build_basis(n, d));
}

// Integer coefficient vector over a fixed monomial basis.
struct CoeffVector {
  BasisPtr basis;
  std::vector<Int> entries;

  CoeffVector() = default;
  CoeffVector(BasisPtr b, std::vector<Int> e);
};

// Coefficients in split form: b over the pure powers x_i^d, c over the
// remaining (mixed) monomials in basis order.
struct SplitCoeff {
  std::vector<Int> b;
  std::vector<Int> c;
};

std::vector<Int> veronese(const MonomialBasis& basis, const std::vector<Int>& x);
std::vector<double> veronese(const MonomialBasis& basis, const std::vector<double>& x);

Int evaluate_form(const CoeffVector& a, const std::vector<Int>& x);
double evaluate_form(const CoeffVector& a, const std::vector<double>& x);

// Positions in the basis holding x_i^d, i = 1..n, in basis order.
std::vector<size_t> pure_power_positions(const MonomialBasis& basis);

CoeffVector merge_split(BasisPtr basis, const SplitCoeff& s);
SplitCoeff split_merge(const CoeffVector& a);

// Shared experiment parameters: w = log X, W the product of maximal prime
// powers p^h <= w over p <= w, and the kernel width zeta = w^(-4-1/(8d)).
struct ExperimentParams {
  int n = 0;
  int d = 0;
  int k = 0;
  double A = 0;
  double X = 0;
  double w = 0;
  Int W = 1;
  double zeta = 0;
};

ExperimentParams make_params(int n, int d, int k, double A, double X);

struct GateReport {
  Int N;            // binomial(n+d-1, d)
  long s = 0;       // n = 8s + r with 1 <= r <= 8
  long r = 0;
  bool s_ge_3d = false;
  bool A_in_range = false;        // X^{2d} <= A <= X^{s-d}
  bool N_ge_moment_bound = false; // N >= 200 k (k-1) 2^{k-1}
  bool N_ge_census_bound = false; // N >= 1000 n^2 8^k
  bool corollary_triple = false;  // d >= 17, k <= d, n > 24d
  bool corollary_chain = false;   // exact chain 1000 n^2 8^k <= ... <= N
  bool corollary_base = false;    // 1000 * 8^d <= 25^{d-2} / d^2
};

GateReport hypothesis_gate(const ExperimentParams& p);

}  // namespace cforge
