#pragma once

#include <vector>

#include "cforge/common.hpp"

namespace cforge {

using IntMatrix = std::vector<std::vector<Int>>;

// Exact determinant of a square integer matrix (Bareiss fraction-free).
Int det_exact(IntMatrix m);

// Sublattice of Z^n of rank r, rows of `basis` are the basis vectors.
// Construction verifies rational linear independence (Gram determinant > 0).
class IntegerLattice {
 public:
  IntegerLattice(int ambient_dim, IntMatrix basis);

  int ambient_dim() const { return ambient_dim_; }
  int rank() const { return static_cast<int>(basis_.size()); }
  const IntMatrix& basis() const { return basis_; }
  bool empty() const { return basis_.empty(); }

  // Marker for the rank-0 lattice {0} (returned by orthogonal_lattice when
  // r = n). Not constructible through the validating constructor.
  static IntegerLattice zero(int ambient_dim);

 private:
  IntegerLattice() = default;
  int ambient_dim_ = 0;
  IntMatrix basis_;
};

// d(Lambda)^2, computed both as the Cauchy-Binet sum of squared r x r minors
// and as det(B B^T); the two must agree exactly.
Int det_squared(const IntegerLattice& L);

// G(Lambda) = gcd of |det B_I| over all r x r minors, zero minors ignored.
Int minor_gcd(const IntegerLattice& L);

// Basis of {x in Z^n : <x, b_i> = 0 for all i}. Postcondition (checked):
// det_squared(perp) * minor_gcd(L)^2 == det_squared(L). Returns the zero
// marker when r = n.
IntegerLattice orthogonal_lattice(const IntegerLattice& L);

// Exact number of lattice points v with ||v||_inf <= A (zero included).
// Coefficient bounds come from the rational Gram inverse, rounded outward.
Int count_points_in_box(const IntegerLattice& L, const Int& A,
                        std::int64_t cap = kDefaultCap);

}  // namespace cforge
