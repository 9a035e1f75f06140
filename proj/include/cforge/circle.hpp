#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "cforge/monomial.hpp"

namespace cforge {

using Cplx = std::complex<double>;

// e(theta) = exp(2*pi*i*theta) with the argument reduced mod 1 in exact
// rational arithmetic, so complete sums carry no phase drift.
Cplx unit_phase(const Rat& theta);

// Fixed-order pairwise (tree) summation; reproducible across runs.
Cplx pairwise_sum(std::vector<Cplx> terms);

struct Arc {
  long q = 1;
  long a = 0;
  Rat lo, hi;  // subinterval of [0,1), exact endpoints
};

// Major arcs M(B) for parameters (B, A, X, d); half-width B/(A X^d).
struct ArcDecomposition {
  Rat B, A, X;
  int d = 1;
  Rat half_width;
  std::vector<Arc> arcs;  // sorted by center a/q
};

ArcDecomposition build_arcs(const Rat& B, const Rat& A, const Rat& X, int d);

// Exact Lebesgue measure of the union of arcs.
Rat arc_measure(const ArcDecomposition& arcs);

struct ArcClass {
  bool major = false;
  long q = 0;
  long a = 0;
};

// Nearest fraction p/q to alpha with q <= qmax, via continued-fraction
// convergents and the terminal semiconvergent.
std::pair<Int, Int> best_rational_approx(const Rat& alpha, const Int& qmax);

ArcClass classify(const Rat& alpha, const ArcDecomposition& arcs);
// Linear scan over the arc list; oracle for classify.
ArcClass classify_scan(const Rat& alpha, const ArcDecomposition& arcs);

// S(q, a) = sum_{x=1}^{q} e(a x^d / q).
Cplx gauss_sum(long q, long a, int d);

// Residue distribution of f_a mod q over [1,q]^n: out[t] = #{r : f_a(r) = t mod q}.
std::vector<Int> residue_counts(const CoeffVector& a, long q,
                                std::int64_t cap = kDefaultCap);

// S_a(q) = q^{-n} sum_{(b,q)=1} sum_{r in [1,q]^n} e(b f_a(r) / q).
Cplx local_exp_sum(const CoeffVector& a, long q, std::int64_t cap = kDefaultCap);
// Same value through Ramanujan sums; exactly rational (and real).
Rat local_exp_sum_exact(const CoeffVector& a, long q,
                        std::int64_t cap = kDefaultCap);

// sigma(a; L) = L^{-(n-1)} #{g in [1,L]^n : f_a(g) = 0 mod L}, computed
// factor by factor through the CRT.
Rat local_density(const CoeffVector& a, const Int& L,
                  std::int64_t cap = kDefaultCap);

// Truncated singular series S*_a = sigma(a; W). With check=true the value is
// cross-checked against the product of partial sums of S_a(p^h) (independent
// route through Ramanujan sums), to 1e-8 relative.
Rat truncated_singular_series(const CoeffVector& a, const ExperimentParams& p,
                              std::int64_t cap = kDefaultCap, bool check = true);

struct TailTerms {
  std::vector<Int> q_set;  // Q = {q in (w, W] : p^h || q implies p^h <= w}
  Rat e_exact;             // E_a = sum_{q in Q} S_a(q)
  Cplx e_value;
};

// Enumerates Q and E_a; verifies sum_{q<=w} S_a(q) = S*_a - E_a (1e-8 abs).
TailTerms tail_terms(const CoeffVector& a, const ExperimentParams& p,
                     std::int64_t cap = kDefaultCap);

// W(alpha1, alpha2) = sum_{|l|<=2A} |sum_x e(alpha1 l x^d)|^2 |sum_y e(alpha2 l y^d)|^2.
double weyl_product(const Rat& alpha1, const Rat& alpha2, long A, long X, int d,
                    std::int64_t cap = kDefaultCap);

// T(alpha) = sum_{|b|<=A} |sum_{x<=X} e(b alpha x^d)|^2.
double t_sum(const Rat& alpha, long A, long X, int d,
             std::int64_t cap = kDefaultCap);

// Exact value of the s-th moment of W over [0,1)^2 via the representation
// count sum_l c(l)^2; the naive expansion is the test oracle.
Int moment_count(int s, long A, long X, int d, std::int64_t cap = kDefaultCap);
Int moment_count_naive(int s, long A, long X, int d,
                       std::int64_t cap = kDefaultCap);

struct MajorArcApprox {
  Cplx direct;
  Cplx approx;
  double error = 0;
};

// Compares sum_{x<=X} e(b alpha x^d) with (1/q~) S(q~, a b~) v(beta), where
// q~ = q/(q,b), b~ = b/(q,b), beta = b alpha - a b~/q~ and
// v(beta) = int_0^X e(beta t^d) dt (adaptive quadrature to 1e-8).
MajorArcApprox major_arc_approx(long b, const Rat& alpha, long q, long a,
                                long X, int d);

// I_a(X, B): Riemann evaluation of the arc-restricted count at M equispaced
// points j/M restricted to the region (a union of subintervals of [0,1)).
double arc_restricted_count(const CoeffVector& a, long X,
                            const std::vector<std::pair<Rat, Rat>>& region,
                            long M, std::int64_t cap = kDefaultCap);

}  // namespace cforge
