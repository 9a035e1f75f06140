#include "cforge/counting.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cforge {

namespace {

Int lpow(long base, int e) { return ipow(Int(base), e); }

// Signed coefficient range: 0 < |a| <= A (inclusive) or 0 < |a| < A.
std::vector<long> coeff_values(long A, bool inclusive) {
  long hi = inclusive ? A : A - 1;
  std::vector<long> out;
  for (long a = 1; a <= hi; ++a) {
    out.push_back(-a);
    out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_cap(const Int& estimate, std::int64_t cap, const char* where) {
  if (estimate > cap) throw CapExceeded(where, estimate);
}

// Odometer over idx in [0, sizes[i]) per position; returns false at wrap.
bool advance(std::vector<size_t>& idx, const std::vector<size_t>& sizes) {
  for (size_t i = idx.size(); i-- > 0;) {
    if (++idx[i] < sizes[i]) return true;
    idx[i] = 0;
  }
  return false;
}

}  // namespace

std::vector<long> shell_values(long X) {
  if (X < 1) throw InvalidInput("shell_values: X >= 1");
  long lo = (X + 1) / 2;
  std::vector<long> out;
  for (long v = -X; v <= -lo; ++v) out.push_back(v);
  for (long v = lo; v <= X; ++v) out.push_back(v);
  return out;
}

std::vector<long> shell_values_positive(long X) {
  if (X < 1) throw InvalidInput("shell_values_positive: X >= 1");
  std::vector<long> out;
  for (long v = (X + 1) / 2; v <= X; ++v) out.push_back(v);
  return out;
}

Int count_I_naive(const CoeffVector& a, long X, std::int64_t cap) {
  int n = a.basis->n;
  check_cap(ipow(Int(X), n), cap, "count_I_naive");
  std::vector<size_t> idx(n, 0), sizes(n, X);
  Int count = 0;
  do {
    std::vector<Int> x(n);
    for (int i = 0; i < n; ++i) x[i] = static_cast<long>(idx[i]) + 1;
    if (evaluate_form(a, x) == 0) ++count;
  } while (advance(idx, sizes));
  return count;
}

namespace {

// True when no monomial with nonzero coefficient uses variables on both
// sides of the split at `mid`.
bool separable_at(const CoeffVector& a, int mid) {
  const auto& basis = *a.basis;
  for (size_t i = 0; i < basis.size(); ++i) {
    if (a.entries[i] == 0) continue;
    bool left = false, right = false;
    for (int j = 0; j < basis.n; ++j)
      if (basis.exponents[i][j] > 0) (j < mid ? left : right) = true;
    if (left && right) return false;
  }
  return true;
}

Int count_I_mitm(const CoeffVector& a, long X, int mid, std::int64_t cap) {
  const auto& basis = *a.basis;
  int n = basis.n;
  check_cap(Int(2) * ipow(Int(X), std::max(mid, n - mid)), cap, "count_I_fast");

  auto half_sum = [&](const std::vector<size_t>& idx, int lo, int hi) {
    std::vector<Int> x(n, 1);
    for (int i = lo; i < hi; ++i) x[i] = static_cast<long>(idx[i - lo]) + 1;
    Int acc = 0;
    for (size_t t = 0; t < basis.size(); ++t) {
      if (a.entries[t] == 0) continue;
      bool mine = true;
      Int m = 1;
      for (int j = 0; j < n; ++j) {
        if (basis.exponents[t][j] == 0) continue;
        if (j < lo || j >= hi) {
          mine = false;
          break;
        }
        m *= ipow(x[j], basis.exponents[t][j]);
      }
      if (mine) acc += a.entries[t] * m;
    }
    return acc;
  };

  std::map<Int, Int> left;
  {
    std::vector<size_t> idx(mid, 0), sizes(mid, X);
    do {
      left[half_sum(idx, 0, mid)] += 1;
    } while (advance(idx, sizes));
  }
  Int count = 0;
  {
    std::vector<size_t> idx(n - mid, 0), sizes(n - mid, X);
    do {
      Int need = -half_sum(idx, mid, n);
      auto it = left.find(need);
      if (it != left.end()) count += it->second;
    } while (advance(idx, sizes));
  }
  return count;
}

// Partial evaluation: fix the prefix x_1..x_{n-1}, reduce to a univariate
// polynomial in x_n, and scan its values.
Int count_I_grouped(const CoeffVector& a, long X, std::int64_t cap) {
  const auto& basis = *a.basis;
  int n = basis.n;
  int d = basis.d;
  check_cap(ipow(Int(X), n), cap, "count_I_fast");

  std::vector<size_t> idx(n - 1, 0), sizes(n - 1, X);
  Int count = 0;
  do {
    std::vector<Int> prefix(n - 1);
    for (int i = 0; i < n - 1; ++i) prefix[i] = static_cast<long>(idx[i]) + 1;
    std::vector<Int> poly(d + 1, Int(0));  // coefficients in x_n
    for (size_t t = 0; t < basis.size(); ++t) {
      if (a.entries[t] == 0) continue;
      Int m = a.entries[t];
      for (int j = 0; j < n - 1; ++j)
        if (basis.exponents[t][j] > 0) m *= ipow(prefix[j], basis.exponents[t][j]);
      poly[basis.exponents[t][n - 1]] += m;
    }
    for (long xn = 1; xn <= X; ++xn) {
      Int val = 0;
      for (int e = d; e >= 0; --e) val = val * xn + poly[e];
      if (val == 0) ++count;
    }
  } while (n > 1 ? advance(idx, sizes) : false);
  return count;
}

}  // namespace

Int count_I_fast(const CoeffVector& a, long X, std::int64_t cap) {
  int n = a.basis->n;
  if (n >= 2) {
    int mid = n / 2;
    if (separable_at(a, mid)) return count_I_mitm(a, X, mid, cap);
  }
  return count_I_grouped(a, X, cap);
}

Int count_I(const CoeffVector& a, long X, std::int64_t cap) {
  Int fast = count_I_fast(a, X, cap);
  Int naive = count_I_naive(a, X, cap);
  if (fast != naive) throw std::logic_error("count_I: counting routes differ");
  return fast;
}

Int count_U_naive(const CountingInstance& inst, std::int64_t cap) {
  auto as = coeff_values(inst.A, inst.a_inclusive);
  long per_index = static_cast<long>(as.size()) * (2 * inst.X + 1) * (2 * inst.X + 1);
  check_cap(ipow(Int(per_index), inst.s), cap, "count_U_naive");

  Int count = 0;
  std::function<void(int, const Int&)> rec = [&](int i, const Int& sum) {
    if (i == inst.s) {
      if (sum == 0) ++count;
      return;
    }
    for (long ai : as)
      for (long x = -inst.X; x <= inst.X; ++x)
        for (long z = -inst.X; z <= inst.X; ++z)
          rec(i + 1, Int(sum + ai * (lpow(x, inst.d) - lpow(z, inst.d))));
  };
  rec(0, Int(0));
  return count;
}

namespace {

// Distribution of a*(x^d - z^d) over one index of U_s.
std::map<Int, Int> u_term_dist(const CountingInstance& inst) {
  std::map<Int, Int> dist;
  for (long ai : coeff_values(inst.A, inst.a_inclusive))
    for (long x = -inst.X; x <= inst.X; ++x)
      for (long z = -inst.X; z <= inst.X; ++z)
        dist[Int(ai) * (lpow(x, inst.d) - lpow(z, inst.d))] += 1;
  return dist;
}

std::map<Int, Int> convolve(const std::map<Int, Int>& a,
                            const std::map<Int, Int>& b) {
  std::map<Int, Int> out;
  for (const auto& [va, ca] : a)
    for (const auto& [vb, cb] : b) out[va + vb] += ca * cb;
  return out;
}

std::map<Int, Int> convolve_power(const std::map<Int, Int>& dist, int k) {
  std::map<Int, Int> acc{{Int(0), Int(1)}};
  for (int i = 0; i < k; ++i) acc = convolve(acc, dist);
  return acc;
}

}  // namespace

Int count_U(const CountingInstance& inst, std::int64_t cap) {
  auto dist = u_term_dist(inst);
  Int sz = dist.size();
  check_cap(ipow(sz, (inst.s + 1) / 2) * ipow(sz, inst.s / 2), cap, "count_U");
  auto left = convolve_power(dist, (inst.s + 1) / 2);
  auto right = convolve_power(dist, inst.s / 2);
  Int count = 0;
  for (const auto& [v, c] : left) {
    auto it = right.find(Int(-v));
    if (it != right.end()) count += c * it->second;
  }
  return count;
}

Int delta_minor(const ShellTuple& t, int i, int j) {
  if (i < 1 || j <= i || j > t.s) throw InvalidInput("delta_minor: 1 <= i < j <= s");
  Int ui = lpow(t.x[i - 1], t.d) - lpow(t.z[i - 1], t.d);
  Int vi = lpow(t.y[i - 1], t.d) - lpow(t.w[i - 1], t.d);
  Int uj = lpow(t.x[j - 1], t.d) - lpow(t.z[j - 1], t.d);
  Int vj = lpow(t.y[j - 1], t.d) - lpow(t.w[j - 1], t.d);
  return ui * vj - uj * vi;
}

namespace {

using DiffVec = std::vector<Int>;

bool all_minors_zero(const DiffVec& u, const DiffVec& v) {
  for (size_t i = 0; i < u.size(); ++i)
    for (size_t j = i + 1; j < u.size(); ++j)
      if (u[i] * v[j] != u[j] * v[i]) return false;
  return true;
}

// For a fixed coefficient vector, the multiset of difference vectors
// (x_1^d - z_1^d, ..., x_s^d - z_s^d) over shell solutions of
// sum a_i (x_i^d - z_i^d) = 0, grouped with multiplicities.
std::vector<std::pair<DiffVec, Int>> solution_diff_groups(
    const std::vector<long>& a, int d, const std::vector<long>& shell) {
  int s = static_cast<int>(a.size());
  std::map<DiffVec, Int> groups;
  std::vector<size_t> idx(2 * s, 0), sizes(2 * s, shell.size());
  do {
    Int sum = 0;
    DiffVec u(s);
    for (int i = 0; i < s; ++i) {
      u[i] = lpow(shell[idx[2 * i]], d) - lpow(shell[idx[2 * i + 1]], d);
      sum += a[i] * u[i];
    }
    if (sum == 0) groups[u] += 1;
  } while (advance(idx, sizes));
  return {groups.begin(), groups.end()};
}

// c(a) recomputed independently: hash-join over the first/second halves of
// the index range.
Int solution_count_mitm(const std::vector<long>& a, int d,
                        const std::vector<long>& shell) {
  int s = static_cast<int>(a.size());
  int h = (s + 1) / 2;
  auto half = [&](int lo, int hi) {
    std::map<Int, Int> out{{Int(0), Int(1)}};
    for (int i = lo; i < hi; ++i) {
      std::map<Int, Int> term;
      for (long x : shell)
        for (long z : shell) term[Int(a[i]) * (lpow(x, d) - lpow(z, d))] += 1;
      out = convolve(out, term);
    }
    return out;
  };
  auto left = half(0, h);
  auto right = half(h, s);
  Int c = 0;
  for (const auto& [v, cnt] : left) {
    auto it = right.find(Int(-v));
    if (it != right.end()) c += cnt * it->second;
  }
  return c;
}

void for_each_coeff(const CountingInstance& inst,
                    const std::function<void(const std::vector<long>&)>& fn) {
  auto as = coeff_values(inst.A, inst.a_inclusive);
  std::vector<size_t> idx(inst.s, 0), sizes(inst.s, as.size());
  do {
    std::vector<long> a(inst.s);
    for (int i = 0; i < inst.s; ++i) a[i] = as[idx[i]];
    fn(a);
  } while (advance(idx, sizes));
}

}  // namespace

TwoEquationCount count_N(const CountingInstance& inst, std::int64_t cap) {
  auto shell = shell_values(inst.X);
  Int per_a = ipow(Int(shell.size()), 2 * inst.s);
  Int na = ipow(Int(coeff_values(inst.A, inst.a_inclusive).size()), inst.s);
  check_cap(na * per_a, cap, "count_N");

  TwoEquationCount out{0, 0, 0};
  for_each_coeff(inst, [&](const std::vector<long>& a) {
    auto groups = solution_diff_groups(a, inst.d, shell);
    Int c = 0;
    for (const auto& [u, m] : groups) c += m;
    Int c_check = solution_count_mitm(a, inst.d, shell);
    if (c != c_check)
      throw std::logic_error("count_N: per-coefficient counts differ");
    out.total += c * c;
    for (const auto& [u, mu] : groups)
      for (const auto& [v, mv] : groups)
        if (all_minors_zero(u, v)) out.dependent += mu * mv;
  });
  out.independent = out.total - out.dependent;
  return out;
}

TwoEquationCount count_N_naive(const CountingInstance& inst, std::int64_t cap) {
  auto shell = shell_values(inst.X);
  Int per_a = ipow(Int(shell.size()), 4 * inst.s);
  Int na = ipow(Int(coeff_values(inst.A, inst.a_inclusive).size()), inst.s);
  check_cap(na * per_a, cap, "count_N_naive");

  TwoEquationCount out{0, 0, 0};
  for_each_coeff(inst, [&](const std::vector<long>& a) {
    std::vector<size_t> idx(4 * inst.s, 0), sizes(4 * inst.s, shell.size());
    do {
      Int sum1 = 0, sum2 = 0;
      DiffVec u(inst.s), v(inst.s);
      for (int i = 0; i < inst.s; ++i) {
        u[i] = lpow(shell[idx[4 * i]], inst.d) - lpow(shell[idx[4 * i + 1]], inst.d);
        v[i] = lpow(shell[idx[4 * i + 2]], inst.d) - lpow(shell[idx[4 * i + 3]], inst.d);
        sum1 += a[i] * u[i];
        sum2 += a[i] * v[i];
      }
      if (sum1 == 0 && sum2 == 0) {
        out.total += 1;
        if (all_minors_zero(u, v)) out.dependent += 1;
      }
    } while (advance(idx, sizes));
  });
  out.independent = out.total - out.dependent;
  return out;
}

Int count_psi(int s, int d, long X, const Int& D,
              const std::array<long, 8>& anchor, PsiVariant variant,
              std::int64_t cap) {
  if (s < 3) throw InvalidInput("count_psi: s >= 3");
  if (D < 1) throw InvalidInput("count_psi: D >= 1");
  auto vals = shell_values_positive(X);
  int free_vars = 4 * (s - 2);
  check_cap(ipow(Int(vals.size()), free_vars), cap, "count_psi");

  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= s; ++i)
    for (int j = i + 1; j <= s; ++j) {
      if (variant == PsiVariant::AgainstThird && i != 3 && j != 3) continue;
      pairs.emplace_back(i, j);
    }

  // x, y, z, w indexed 1..s; slots 1,2 hold the anchors.
  std::vector<long> x(s + 1), y(s + 1), z(s + 1), w(s + 1);
  x[1] = anchor[0]; x[2] = anchor[1];
  y[1] = anchor[2]; y[2] = anchor[3];
  z[1] = anchor[4]; z[2] = anchor[5];
  w[1] = anchor[6]; w[2] = anchor[7];

  std::vector<size_t> idx(free_vars, 0), sizes(free_vars, vals.size());
  Int count = 0;
  do {
    for (int i = 3; i <= s; ++i) {
      x[i] = vals[idx[4 * (i - 3)]];
      y[i] = vals[idx[4 * (i - 3) + 1]];
      z[i] = vals[idx[4 * (i - 3) + 2]];
      w[i] = vals[idx[4 * (i - 3) + 3]];
    }
    bool ok = true;
    for (auto [i, j] : pairs) {
      Int lhs = (lpow(x[i], d) - lpow(z[i], d)) * (lpow(y[j], d) - lpow(w[j], d));
      Int rhs = (lpow(x[j], d) - lpow(z[j], d)) * (lpow(y[i], d) - lpow(w[i], d));
      if ((lhs - rhs) % D != 0) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  } while (advance(idx, sizes));
  return count;
}

Int m_value(const Int& D, const std::vector<Int>& xz_diffs,
            const std::vector<Int>& yw_diffs) {
  if (D < 1) throw InvalidInput("m_value: D >= 1");
  Int m = D;  // gcd(D, 0) = D is the maximum attainable
  for (const auto& u : xz_diffs) m = std::min(m, u == 0 ? D : igcd(D, u));
  for (const auto& v : yw_diffs) m = std::min(m, v == 0 ? D : igcd(D, v));
  return m;
}

namespace {

// Distribution of x^d - z^d over signed shell pairs, and of the product of
// two independent copies.
std::map<Int, Int> diff_dist(int d, long X) {
  std::map<Int, Int> out;
  auto shell = shell_values(X);
  for (long x : shell)
    for (long z : shell) out[lpow(x, d) - lpow(z, d)] += 1;
  return out;
}

std::map<Int, Int> product_dist(const std::map<Int, Int>& dist) {
  std::map<Int, Int> out;
  for (const auto& [u, cu] : dist)
    for (const auto& [v, cv] : dist) out[u * v] += cu * cv;
  return out;
}

}  // namespace

Rat xi_sum(int d, long X, std::int64_t cap) {
  auto prod = product_dist(diff_dist(d, X));
  check_cap(Int(prod.size()) * Int(prod.size()), cap, "xi_sum");
  Rat xi = 0;
  for (const auto& [p1, c1] : prod)
    for (const auto& [p2, c2] : prod) {
      Int delta = p1 - p2;
      if (delta >= 1) {
        Rat term(c1 * c2, delta);
        term.canonicalize();
        xi += term;
      }
    }
  return xi;
}

double xi_sum_double(int d, long X) {
  auto prod = product_dist(diff_dist(d, X));
  // Flatten to doubles: every product here is an exact integer well below
  // 2^53, so the pair loop stays exact until the final divisions.
  std::vector<double> val, cnt;
  val.reserve(prod.size());
  cnt.reserve(prod.size());
  for (const auto& [p, c] : prod) {
    val.push_back(p.get_d());
    cnt.push_back(c.get_d());
  }
  double xi = 0;
  for (size_t i = 0; i < val.size(); ++i)
    for (size_t j = 0; j < val.size(); ++j) {
      double delta = val[i] - val[j];
      if (delta >= 1) xi += cnt[i] * cnt[j] / delta;
    }
  return xi;
}

void ThinSetSpec::validate() const {
  if (num_vars < 1) throw InvalidInput("thin set: num_vars >= 1");
  if (degree < 1) throw InvalidInput("thin set: degree >= 1");
  if (terms.empty()) throw InvalidInput("thin set: P must have terms");
  for (const auto& [exps, coef] : terms) {
    if (static_cast<int>(exps.size()) != num_vars)
      throw InvalidInput("thin set: exponent tuple has wrong length");
    int total = 0;
    for (int e : exps) {
      if (e < 0) throw InvalidInput("thin set: negative exponent");
      total += e;
    }
    if (total != degree)
      throw InvalidInput("thin set: P is not homogeneous of the stated degree");
    if (coef == 0) throw InvalidInput("thin set: zero coefficient term");
  }
}

bool ThinSetSpec::is_diagonal() const {
  std::vector<bool> seen(num_vars, false);
  for (const auto& [exps, coef] : terms) {
    int var = -1;
    for (int j = 0; j < num_vars; ++j) {
      if (exps[j] == 0) continue;
      if (var >= 0 || exps[j] != degree) return false;
      var = j;
    }
    if (var < 0 || seen[var]) return false;
    seen[var] = true;
  }
  return true;
}

Int ThinSetSpec::eval(const std::vector<Int>& point) const {
  Int acc = 0;
  for (const auto& [exps, coef] : terms) {
    Int m = coef;
    for (int j = 0; j < num_vars; ++j)
      if (exps[j] > 0) m *= ipow(point[j], exps[j]);
    acc += m;
  }
  return acc;
}

namespace {

void thin_set_naive_stream(const ThinSetSpec& spec, long A,
                           const std::function<bool(const std::vector<Int>&)>& sink,
                           std::int64_t cap) {
  check_cap(ipow(Int(2 * A + 1), spec.num_vars), cap, "enumerate_thin_set");
  std::vector<size_t> idx(spec.num_vars, 0), sizes(spec.num_vars, 2 * A + 1);
  do {
    std::vector<Int> a(spec.num_vars);
    for (int i = 0; i < spec.num_vars; ++i)
      a[i] = static_cast<long>(idx[i]) - A;
    if (spec.eval(a) == 0)
      if (!sink(a)) return;
  } while (advance(idx, sizes));
}

void thin_set_diagonal_stream(
    const ThinSetSpec& spec, long A,
    const std::function<bool(const std::vector<Int>&)>& sink,
    std::int64_t cap) {
  int N = spec.num_vars;
  int h = N / 2;  // first h variables scanned, rest joined through a table
  check_cap(ipow(Int(2 * A + 1), std::max(h, N - h)), cap, "enumerate_thin_set");

  std::vector<Int> diag(N);
  for (const auto& [exps, coef] : spec.terms)
    for (int j = 0; j < N; ++j)
      if (exps[j] == spec.degree) diag[j] = coef;

  auto part_sum = [&](const std::vector<size_t>& idx, int lo) {
    Int acc = 0;
    for (size_t i = 0; i < idx.size(); ++i)
      acc += diag[lo + i] * ipow(Int(static_cast<long>(idx[i]) - A), spec.degree);
    return acc;
  };

  // Tail tuples grouped by partial sum, each list in ascending lex order.
  std::map<Int, std::vector<std::vector<Int>>> tail;
  {
    std::vector<size_t> idx(N - h, 0), sizes(N - h, 2 * A + 1);
    do {
      std::vector<Int> v(N - h);
      for (int i = 0; i < N - h; ++i) v[i] = static_cast<long>(idx[i]) - A;
      tail[part_sum(idx, h)].push_back(std::move(v));
    } while (advance(idx, sizes));
  }
  std::vector<size_t> idx(h, 0), sizes(h, 2 * A + 1);
  do {
    auto it = tail.find(Int(-part_sum(idx, 0)));
    if (it == tail.end()) continue;
    std::vector<Int> a(N);
    for (int i = 0; i < h; ++i) a[i] = static_cast<long>(idx[i]) - A;
    for (const auto& v : it->second) {
      std::copy(v.begin(), v.end(), a.begin() + h);
      if (!sink(a)) return;
    }
  } while (advance(idx, sizes));
}

}  // namespace

void enumerate_thin_set_stream(
    const ThinSetSpec& spec, long A,
    const std::function<bool(const std::vector<Int>&)>& sink,
    std::int64_t cap) {
  spec.validate();
  if (A < 1) throw InvalidInput("enumerate_thin_set: A >= 1");
  if (spec.is_diagonal() && spec.num_vars >= 2)
    thin_set_diagonal_stream(spec, A, sink, cap);
  else
    thin_set_naive_stream(spec, A, sink, cap);
}

std::vector<std::vector<Int>> enumerate_thin_set(const ThinSetSpec& spec,
                                                 long A, std::int64_t cap) {
  std::vector<std::vector<Int>> out;
  enumerate_thin_set_stream(
      spec, A,
      [&](const std::vector<Int>& a) {
        out.push_back(a);
        return true;
      },
      cap);
  return out;
}

std::vector<std::vector<Int>> enumerate_thin_set_naive(const ThinSetSpec& spec,
                                                       long A,
                                                       std::int64_t cap) {
  spec.validate();
  std::vector<std::vector<Int>> out;
  thin_set_naive_stream(
      spec, A,
      [&](const std::vector<Int>& a) {
        out.push_back(a);
        return true;
      },
      cap);
  return out;
}

}  // namespace cforge
