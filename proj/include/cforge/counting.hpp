#pragma once

#include <array>
#include <functional>
#include <vector>

#include "cforge/monomial.hpp"

namespace cforge {

// Shared parameters for the two-equation shell counts.
struct CountingInstance {
  int s = 1;
  int d = 1;
  long A = 1;
  long X = 1;
  // true: 0 < |a_i| <= A (the two-equation count); false: 0 < |a_i| < A
  // (the one-equation count U_s as stated).
  bool a_inclusive = true;
};

// One solution of the two-equation system, with its dependence tag.
struct ShellTuple {
  int s = 0;
  int d = 0;
  std::vector<long> a, x, y, z, w;
};

// The dyadic shell ceil(X/2) <= |x| <= X over nonzero integers, both signs.
std::vector<long> shell_values(long X);
// Its positive half, used by the congruence count psi.
std::vector<long> shell_values_positive(long X);

// Zeros of f_a in [1,X]^n. `count_I` evaluates both routes and insists they
// agree: a naive full-box scan, and either a meet-in-the-middle join (when no
// monomial straddles the variable split) or a grouped univariate partial
// evaluation otherwise.
Int count_I(const CoeffVector& a, long X, std::int64_t cap = kDefaultCap);
Int count_I_naive(const CoeffVector& a, long X, std::int64_t cap = kDefaultCap);
Int count_I_fast(const CoeffVector& a, long X, std::int64_t cap = kDefaultCap);

// U_s(A,X): solutions of sum a_i (x_i^d - z_i^d) = 0 with 0 < |a_i| < A
// (strict by default, per the stated lemma) and 0 <= |x_i|,|z_i| <= X.
Int count_U(const CountingInstance& inst, std::int64_t cap = kDefaultCap);
Int count_U_naive(const CountingInstance& inst, std::int64_t cap = kDefaultCap);

// Delta_{i,j} for 1-based i < j.
Int delta_minor(const ShellTuple& t, int i, int j);

struct TwoEquationCount {
  Int total;      // N(A,X)
  Int dependent;  // N_1: all Delta_{i,j} = 0
  Int independent;
};

// N(A,X) with the dependent/independent split. Internally cross-checks
// total against sum_a c(a)^2 computed by a hash-join over partial sums.
TwoEquationCount count_N(const CountingInstance& inst,
                         std::int64_t cap = kDefaultCap);
// Direct from the definition; test oracle.
TwoEquationCount count_N_naive(const CountingInstance& inst,
                               std::int64_t cap = kDefaultCap);

enum class PsiVariant {
  FullPairwise,   // all pairs 1 <= i < j <= s (the definition)
  AgainstThird,   // only pairs {3, j}, j != 3 (the proof's relaxed system)
};

// psi_s(X,D; anchors): solutions x_3..x_s, y_3.., z_3.., w_3.. in the
// positive shell to the congruence system mod D. anchors holds the eight
// fixed values x1,x2,y1,y2,z1,z2,w1,w2.
Int count_psi(int s, int d, long X, const Int& D,
              const std::array<long, 8>& anchor,
              PsiVariant variant = PsiVariant::FullPairwise,
              std::int64_t cap = kDefaultCap);

// m(x,y,z,w) = min over gcds (D, x_i^d - z_i^d), (D, y_j^d - w_j^d),
// with gcd(D, 0) := D.
Int m_value(const Int& D, const std::vector<Int>& xz_diffs,
            const std::vector<Int>& yw_diffs);

// Xi_d(X) = sum of 1/Delta_{1,2} over signed shell tuples with Delta >= 1.
Rat xi_sum(int d, long X, std::int64_t cap = kDefaultCap);
// Same sum accumulated in double; used by the exponent probe where the exact
// rational would need an astronomically large common denominator.
double xi_sum_double(int d, long X);

// Sparse homogeneous constraint polynomial P in N variables of degree k.
struct ThinSetSpec {
  int num_vars = 0;
  int degree = 0;
  std::vector<std::pair<std::vector<int>, Int>> terms;

  void validate() const;  // homogeneity, exponent shapes
  bool is_diagonal() const;
  Int eval(const std::vector<Int>& point) const;
};

// Integer points on P = 0 in the box ||a||_inf <= A, ascending lex order.
// Diagonal P uses a meet-in-the-middle join over split halves; the general
// path scans the box. Both appear below so tests can compare them.
std::vector<std::vector<Int>> enumerate_thin_set(const ThinSetSpec& spec,
                                                 long A,
                                                 std::int64_t cap = kDefaultCap);
std::vector<std::vector<Int>> enumerate_thin_set_naive(
    const ThinSetSpec& spec, long A, std::int64_t cap = kDefaultCap);

void enumerate_thin_set_stream(
    const ThinSetSpec& spec, long A,
    const std::function<bool(const std::vector<Int>&)>& sink,
    std::int64_t cap = kDefaultCap);

}  // namespace cforge
