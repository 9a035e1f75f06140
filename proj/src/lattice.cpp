#include "cforge/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

namespace cforge {

namespace {

// Gram matrix B B^T of an r x n matrix.
IntMatrix gram(const IntMatrix& b) {
  size_t r = b.size();
  IntMatrix g(r, std::vector<Int>(r));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = i; j < r; ++j) {
      Int acc = 0;
      for (size_t k = 0; k < b[i].size(); ++k) acc += b[i][k] * b[j][k];
      g[i][j] = acc;
      g[j][i] = acc;
    }
  return g;
}

// Visit all r-element subsets of {0..n-1}.
void for_each_subset(int n, int r,
                     const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

int cmp_abs(const Int& a, const Int& b) {
  return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}

Int minor_det(const IntMatrix& b, const std::vector<int>& cols) {
  size_t r = b.size();
  IntMatrix m(r, std::vector<Int>(r));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) m[i][j] = b[i][cols[j]];
  return det_exact(std::move(m));
}

}  // namespace

Int det_exact(IntMatrix m) {
  size_t n = m.size();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : Int(-m[n - 1][n - 1]);
}

IntegerLattice::IntegerLattice(int ambient_dim, IntMatrix basis) {
  if (ambient_dim < 1) throw InvalidInput("lattice: ambient dimension >= 1");
  if (basis.empty() || basis.size() > static_cast<size_t>(ambient_dim))
    throw InvalidInput("lattice: rank must satisfy 1 <= r <= n");
  for (const auto& row : basis)
    if (row.size() != static_cast<size_t>(ambient_dim))
      throw InvalidInput("lattice: basis row has wrong length");
  if (det_exact(gram(basis)) == 0)
    throw InvalidInput("lattice: basis rows are linearly dependent");
  ambient_dim_ = ambient_dim;
  basis_ = std::move(basis);
}

IntegerLattice IntegerLattice::zero(int ambient_dim) {
  IntegerLattice L;
  L.ambient_dim_ = ambient_dim;
  return L;
}

Int det_squared(const IntegerLattice& L) {
  if (L.empty()) return 1;
  Int cauchy_binet = 0;
  for_each_subset(L.ambient_dim(), L.rank(), [&](const std::vector<int>& cols) {
    Int d = minor_det(L.basis(), cols);
    cauchy_binet += d * d;
  });
  Int gram_det = det_exact(gram(L.basis()));
  if (cauchy_binet != gram_det)
    throw std::logic_error("det_squared: Cauchy-Binet and Gram routes differ");
  return gram_det;
}

Int minor_gcd(const IntegerLattice& L) {
  if (L.empty()) return 1;
  Int g = 0;
  for_each_subset(L.ambient_dim(), L.rank(), [&](const std::vector<int>& cols) {
    Int d = minor_det(L.basis(), cols);
    if (d != 0) g = igcd(g, d);
  });
  return g;
}

IntegerLattice orthogonal_lattice(const IntegerLattice& L) {
  int n = L.ambient_dim();
  int r = L.rank();
  if (r == n) return IntegerLattice::zero(n);

  // Integer row reduction of M = B^T (n x r) with the unimodular transform
  // tracked in U; rows of U facing zero rows of M span the kernel.
  IntMatrix m(n, std::vector<Int>(r));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) m[i][j] = L.basis()[j][i];
  IntMatrix u(n, std::vector<Int>(n, 0));
  for (int i = 0; i < n; ++i) u[i][i] = 1;

  int row = 0;
  for (int col = 0; col < r && row < n; ++col) {
    while (true) {
      int pivot = -1;
      for (int i = row; i < n; ++i)
        if (m[i][col] != 0 &&
            (pivot < 0 || cmp_abs(m[i][col], m[pivot][col]) < 0))
          pivot = i;
      if (pivot < 0) break;
      bool reduced = true;
      for (int i = row; i < n; ++i) {
        if (i == pivot || m[i][col] == 0) continue;
        Int q = m[i][col] / m[pivot][col];  // truncated division
        if (q != 0) {
          for (int j = 0; j < r; ++j) m[i][j] -= q * m[pivot][j];
          for (int j = 0; j < n; ++j) u[i][j] -= q * u[pivot][j];
        }
        if (m[i][col] != 0) reduced = false;
      }
      if (reduced) {
        std::swap(m[pivot], m[row]);
        std::swap(u[pivot], u[row]);
        ++row;
        break;
      }
    }
  }

  IntMatrix kernel;
  for (int i = row; i < n; ++i) kernel.push_back(u[i]);
  if (kernel.size() != static_cast<size_t>(n - r))
    throw std::logic_error("orthogonal_lattice: unexpected kernel rank");
  IntegerLattice perp(n, std::move(kernel));

  Int g = minor_gcd(L);
  if (det_squared(perp) * g * g != det_squared(L))
    throw std::logic_error("orthogonal_lattice: d(perp)^2 G^2 != d(L)^2");
  return perp;
}

Int count_points_in_box(const IntegerLattice& L, const Int& A,
                        std::int64_t cap) {
  if (A < 0) throw InvalidInput("count_points_in_box: A >= 0");
  if (L.empty()) return 1;
  int n = L.ambient_dim();
  int r = L.rank();
  const IntMatrix& b = L.basis();

  // v = c B and ||v||_inf <= A give c_i = <v, row_i(G^{-1} B)>, so
  // |c_i| <= A * sum_j |(adj(G) B)_{ij}| / det(G), rounded outward.
  IntMatrix g = gram(b);
  Int det_g = det_exact(g);
  IntMatrix adj(r, std::vector<Int>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      IntMatrix sub;
      for (int p = 0; p < r; ++p) {
        if (p == j) continue;
        std::vector<Int> srow;
        for (int q = 0; q < r; ++q)
          if (q != i) srow.push_back(g[p][q]);
        sub.push_back(std::move(srow));
      }
      Int c = det_exact(std::move(sub));
      adj[i][j] = ((i + j) % 2 == 0) ? c : Int(-c);
    }

  Int abs_det = abs(det_g);
  std::vector<Int> bound(r);
  Int grid = 1;
  for (int i = 0; i < r; ++i) {
    Int rowsum = 0;
    for (int j = 0; j < n; ++j) {
      Int acc = 0;
      for (int k = 0; k < r; ++k) acc += adj[i][k] * b[k][j];
      rowsum += abs(acc);
    }
    // ceil(A * rowsum / |det|)
    Int num = A * rowsum;
    mpz_cdiv_q(bound[i].get_mpz_t(), num.get_mpz_t(), abs_det.get_mpz_t());
    grid *= 2 * bound[i] + 1;
  }
  if (grid > cap) throw CapExceeded("count_points_in_box: grid too large", grid);

  // Odometer over c in prod [-bound_i, bound_i], with incremental row sums.
  std::vector<Int> c(r), point(n, 0);
  for (int i = 0; i < r; ++i) {
    c[i] = -bound[i];
    for (int j = 0; j < n; ++j) point[j] += c[i] * b[i][j];
  }
  Int count = 0;
  while (true) {
    bool inside = true;
    for (int j = 0; j < n && inside; ++j)
      if (cmp_abs(point[j], A) > 0) inside = false;
    if (inside) ++count;
    int i = r - 1;
    while (i >= 0 && c[i] == bound[i]) {
      for (int j = 0; j < n; ++j) point[j] -= (c[i] + bound[i]) * b[i][j];
      c[i] = -bound[i];
      --i;
    }
    if (i < 0) break;
    c[i] += 1;
    for (int j = 0; j < n; ++j) point[j] += b[i][j];
  }
  return count;
}

}  // namespace cforge
