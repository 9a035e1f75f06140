#include "cforge/circle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>

namespace cforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_cap(const Int& estimate, std::int64_t cap, const char* where) {
  if (estimate > cap) throw CapExceeded(where, estimate);
}

std::vector<std::pair<Int, int>> factorize(Int n) {
  std::vector<std::pair<Int, int>> out;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int moebius(long n) {
  int m = 1;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    m = -m;
  }
  if (n > 1) m = -m;
  return m;
}

bool next_tuple(std::vector<size_t>& idx, size_t radix) {
  for (size_t i = idx.size(); i-- > 0;) {
    if (++idx[i] < radix) return true;
    idx[i] = 0;
  }
  return false;
}

// Ramanujan sum c_q(t) = sum_{g | (t,q)} g * mu(q/g).
Int ramanujan_sum(long q, const Int& t) {
  Int g = igcd(Int(q), t);
  Int acc = 0;
  for (Int d = 1; d <= g; ++d)
    if (g % d == 0) acc += d * moebius(Int(Int(q) / d).get_si());
  return acc;
}

}  // namespace

Cplx unit_phase(const Rat& theta) {
  Int num = theta.get_num(), den = theta.get_den();
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());  // in [0, den)
  return std::polar(1.0, kTwoPi * Rat(r, den).get_d());
}

Cplx pairwise_sum(std::vector<Cplx> terms) {
  if (terms.empty()) return {0.0, 0.0};
  size_t n = terms.size();
  while (n > 1) {
    size_t half = (n + 1) / 2;
    for (size_t i = 0; i + half < n; ++i) terms[i] += terms[i + half];
    n = half;
  }
  return terms[0];
}

ArcDecomposition build_arcs(const Rat& B, const Rat& A, const Rat& X, int d) {
  if (B < 1) throw InvalidInput("build_arcs: B >= 1");
  if (A <= 0 || X <= 0 || d < 1) throw InvalidInput("build_arcs: A, X > 0, d >= 1");
  ArcDecomposition dec;
  dec.B = B;
  dec.A = A;
  dec.X = X;
  dec.d = d;
  Rat xd(ipow(X.get_num(), d), ipow(X.get_den(), d));
  dec.half_width = B / (A * xd);

  Int qmax_z = B.get_num() / B.get_den();  // floor(B), B >= 1
  long qmax = qmax_z.get_si();
  for (long q = 1; q <= qmax; ++q) {
    for (long a = (q == 1 ? 0 : 1); a <= (q == 1 ? 1 : q - 1); ++a) {
      if (std::gcd(q, a) != 1) continue;
      Rat center(a, q);
      Arc arc;
      arc.q = q;
      arc.a = a;
      arc.lo = std::max(Rat(0), Rat(center - dec.half_width));
      arc.hi = std::min(Rat(1), Rat(center + dec.half_width));
      dec.arcs.push_back(std::move(arc));
    }
  }
  std::sort(dec.arcs.begin(), dec.arcs.end(),
            [](const Arc& x, const Arc& y) { return Rat(x.a, x.q) < Rat(y.a, y.q); });

  // Adjacent centers a/q, a'/q' are at least 1/(qq') >= 1/B^2 apart, and each
  // arc has total width 2B/(AX^d), so the arcs are pairwise disjoint whenever
  // 2B^3 < AX^d.  (The weaker bound 2B^2 < AX^d does not suffice: B = 5,
  // A = 7, X = 4, d = 2 satisfies it, yet the arcs at 1/4 and 1/5 overlap.)
  if (2 * B * B * B < A * xd) {
    for (size_t i = 0; i + 1 < dec.arcs.size(); ++i)
      if (dec.arcs[i].hi > dec.arcs[i + 1].lo)
        throw std::logic_error("build_arcs: arcs overlap under 2B^3 < AX^d");
  }
  return dec;
}

Rat arc_measure(const ArcDecomposition& dec) {
  std::vector<std::pair<Rat, Rat>> iv;
  iv.reserve(dec.arcs.size());
  for (const auto& a : dec.arcs) iv.emplace_back(a.lo, a.hi);
  std::sort(iv.begin(), iv.end());
  Rat total = 0;
  Rat cur_lo = 0, cur_hi = -1;
  bool open = false;
  for (const auto& [lo, hi] : iv) {
    if (!open) {
      cur_lo = lo;
      cur_hi = hi;
      open = true;
    } else if (lo <= cur_hi) {
      cur_hi = std::max(cur_hi, hi);
    } else {
      total += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    }
  }
  if (open) total += cur_hi - cur_lo;
  return total;
}

std::pair<Int, Int> best_rational_approx(const Rat& alpha, const Int& qmax) {
  if (qmax < 1) throw InvalidInput("best_rational_approx: qmax >= 1");
  Int p_prev = 1, q_prev = 0;  // h_{-1}/k_{-1}
  Rat x = alpha;
  x.canonicalize();  // callers may hand over a raw numerator/denominator pair
  Int a;
  mpz_fdiv_q(a.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  Int p_cur = a, q_cur = 1;
  Rat frac = x - Rat(a);
  while (true) {
    if (frac == 0) return {p_cur, q_cur};  // alpha reached exactly
    x = 1 / frac;
    mpz_fdiv_q(a.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    frac = x - Rat(a);
    Int p_next = a * p_cur + p_prev;
    Int q_next = a * q_cur + q_prev;
    if (q_next > qmax) {
      Int t = (qmax - q_prev) / q_cur;
      Int ps = p_prev + t * p_cur, qs = q_prev + t * q_cur;
      if (qs < 1) return {p_cur, q_cur};
      Rat d_conv = abs(alpha - Rat(p_cur, q_cur));
      Rat d_semi = abs(alpha - Rat(ps, qs));
      return d_semi < d_conv ? std::make_pair(ps, qs)
                             : std::make_pair(p_cur, q_cur);
    }
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
  }
}

ArcClass classify(const Rat& alpha_in, const ArcDecomposition& dec) {
  Rat alpha = alpha_in;
  alpha.canonicalize();  // callers may hand over a raw num/den pair
  if (alpha < 0 || alpha >= 1) throw InvalidInput("classify: alpha in [0,1)");
  Int qmax = dec.B.get_num() / dec.B.get_den();
  auto [p, q] = best_rational_approx(alpha, qmax);
  Rat pq(p, q);
  pq.canonicalize();
  if (abs(alpha - pq) <= dec.half_width) {
    return {true, static_cast<long>(pq.get_den().get_si()),
            static_cast<long>(pq.get_num().get_si())};
  }
  return {false, 0, 0};
}

ArcClass classify_scan(const Rat& alpha_in, const ArcDecomposition& dec) {
  Rat alpha = alpha_in;
  alpha.canonicalize();
  for (const auto& arc : dec.arcs)
    if (arc.lo <= alpha && alpha <= arc.hi) return {true, arc.q, arc.a};
  return {false, 0, 0};
}

Cplx gauss_sum(long q, long a, int d) {
  if (q < 1) throw InvalidInput("gauss_sum: q >= 1");
  std::vector<Cplx> terms;
  terms.reserve(q);
  for (long x = 1; x <= q; ++x) {
    Int r = (Int(a) * ipow(Int(x), d)) % q;
    terms.push_back(unit_phase(Rat(r, q)));
  }
  return pairwise_sum(std::move(terms));
}

std::vector<Int> residue_counts(const CoeffVector& a, long q, std::int64_t cap) {
  int n = a.basis->n;
  check_cap(ipow(Int(q), n), cap, "residue_counts");
  std::vector<Int> cnt(q, Int(0));
  std::vector<size_t> idx(n, 0);
  std::vector<Int> r(n);
  do {
    for (int i = 0; i < n; ++i) r[i] = static_cast<long>(idx[i]) + 1;
    Int v = evaluate_form(a, r) % q;
    if (v < 0) v += q;
    cnt[v.get_ui()] += 1;
  } while (next_tuple(idx, q));
  return cnt;
}

Cplx local_exp_sum(const CoeffVector& a, long q, std::int64_t cap) {
  auto cnt = residue_counts(a, q, cap);
  int n = a.basis->n;
  std::vector<Cplx> terms;
  for (long b = 1; b <= q; ++b) {
    if (std::gcd(b, q) != 1) continue;
    for (long t = 0; t < q; ++t)
      if (cnt[t] != 0)
        terms.push_back(cnt[t].get_d() * unit_phase(Rat(b * t, q)));
  }
  Cplx s = pairwise_sum(std::move(terms));
  double scale = std::pow(static_cast<double>(q), -n);
  return s * scale;
}

Rat local_exp_sum_exact(const CoeffVector& a, long q, std::int64_t cap) {
  auto cnt = residue_counts(a, q, cap);
  int n = a.basis->n;
  Int acc = 0;
  for (long t = 0; t < q; ++t)
    if (cnt[t] != 0) acc += cnt[t] * ramanujan_sum(q, Int(t));
  Rat r(acc, ipow(Int(q), n));
  r.canonicalize();
  return r;
}

Rat local_density(const CoeffVector& a, const Int& L, std::int64_t cap) {
  if (L < 1) throw InvalidInput("local_density: L >= 1");
  int n = a.basis->n;
  Rat sigma = 1;
  for (const auto& [p, e] : factorize(L)) {
    Int pr = ipow(p, e);
    if (!pr.fits_slong_p())
      throw CapExceeded("local_density: prime power too large", pr);
    long q = pr.get_si();
    auto cnt = residue_counts(a, q, cap);
    Rat factor(cnt[0], ipow(pr, n - 1));
    factor.canonicalize();
    sigma *= factor;
  }
  return sigma;
}

Rat truncated_singular_series(const CoeffVector& a, const ExperimentParams& p,
                              std::int64_t cap, bool check) {
  Rat sigma = local_density(a, p.W, cap);
  if (check && p.W > 1) {
    // Independent route: product over p <= w of sum_{p^h <= w} S_a(p^h),
    // each summand via Ramanujan sums.
    Rat product = 1;
    for (const auto& [prime, e] : factorize(p.W)) {
      Rat partial = 0;
      Int ph = 1;
      for (int h = 0; h <= e; ++h) {
        partial += local_exp_sum_exact(a, Int(ph).get_si(), cap);
        ph *= prime;
      }
      product *= partial;
    }
    double lhs = sigma.get_d(), rhs = product.get_d();
    if (std::abs(lhs - rhs) > 1e-8 * std::max(1.0, std::abs(lhs)))
      throw std::logic_error("singular series: counting and S_a routes differ");
  }
  return sigma;
}

TailTerms tail_terms(const CoeffVector& a, const ExperimentParams& p,
                     std::int64_t cap) {
  TailTerms out;
  out.e_exact = 0;
  // Q is exactly the set of divisors of W exceeding w.
  std::vector<Int> divisors{1};
  for (const auto& [prime, e] : factorize(p.W)) {
    size_t base = divisors.size();
    Int ph = 1;
    for (int h = 1; h <= e; ++h) {
      ph *= prime;
      for (size_t i = 0; i < base; ++i) divisors.push_back(divisors[i] * ph);
    }
  }
  std::sort(divisors.begin(), divisors.end());
  for (const Int& q : divisors) {
    if (mpz_cmp_d(q.get_mpz_t(), p.w) <= 0) continue;
    out.q_set.push_back(q);
    out.e_exact += local_exp_sum_exact(a, q.get_si(), cap);
  }
  out.e_value = Cplx(out.e_exact.get_d(), 0.0);

  // Identity (6.2): sum_{1 <= q <= w} S_a(q) = S*_a - E_a.
  Rat head = 0;
  for (long q = 1; q <= static_cast<long>(p.w); ++q)
    head += local_exp_sum_exact(a, q, cap);
  Rat series = truncated_singular_series(a, p, cap, false);
  if (std::abs(Rat(head - (series - out.e_exact)).get_d()) > 1e-8)
    throw std::logic_error("tail_terms: identity S*_a - E_a failed");
  return out;
}

namespace {

// |sum_{x=1}^{X} e(theta x^d)|^2 for rational theta.
double power_sum_sq(const Rat& theta, long X, int d) {
  std::vector<Cplx> terms;
  terms.reserve(X);
  for (long x = 1; x <= X; ++x) {
    Rat t = theta * Rat(ipow(Int(x), d));
    terms.push_back(unit_phase(t));
  }
  Cplx s = pairwise_sum(std::move(terms));
  return std::norm(s);
}

}  // namespace

double weyl_product(const Rat& alpha1, const Rat& alpha2, long A, long X, int d,
                    std::int64_t cap) {
  check_cap(Int(4 * A + 1) * X * 2, cap, "weyl_product");
  double acc = 0;
  for (long l = -2 * A; l <= 2 * A; ++l) {
    double s1 = power_sum_sq(Rat(l) * alpha1, X, d);
    double s2 = power_sum_sq(Rat(l) * alpha2, X, d);
    acc += s1 * s2;
  }
  return acc;
}

double t_sum(const Rat& alpha, long A, long X, int d, std::int64_t cap) {
  check_cap(Int(2 * A + 1) * X, cap, "t_sum");
  double acc = 0;
  for (long b = -A; b <= A; ++b) acc += power_sum_sq(Rat(b) * alpha, X, d);
  return acc;
}

Int moment_count(int s, long A, long X, int d, std::int64_t cap) {
  if (s < 1) throw InvalidInput("moment_count: s >= 1");
  std::map<Int, Int> diff;  // x^d - z^d over [1,X]^2
  for (long x = 1; x <= X; ++x)
    for (long z = 1; z <= X; ++z) diff[ipow(Int(x), d) - ipow(Int(z), d)] += 1;
  check_cap(ipow(Int(4 * A + 1), s) * Int(diff.size()) * Int(diff.size()),
            cap, "moment_count");

  std::vector<size_t> idx(s, 0);
  Int moment = 0;
  do {
    std::map<Int, Int> partial{{Int(0), Int(1)}};
    for (int i = 0; i < s; ++i) {
      long l = static_cast<long>(idx[i]) - 2 * A;
      std::map<Int, Int> next;
      for (const auto& [v, c] : partial)
        for (const auto& [u, cu] : diff) next[v + l * u] += c * cu;
      partial = std::move(next);
    }
    auto it = partial.find(Int(0));
    if (it != partial.end()) moment += it->second * it->second;
  } while (next_tuple(idx, 4 * A + 1));
  return moment;
}

Int moment_count_naive(int s, long A, long X, int d, std::int64_t cap) {
  check_cap(ipow(Int(4 * A + 1), s) * ipow(Int(X), 4 * s), cap,
            "moment_count_naive");
  std::vector<size_t> lidx(s, 0);
  Int moment = 0;
  do {
    std::vector<long> l(s);
    for (int i = 0; i < s; ++i) l[i] = static_cast<long>(lidx[i]) - 2 * A;
    std::vector<size_t> v(4 * s, 0);
    do {
      Int s1 = 0, s2 = 0;
      for (int i = 0; i < s; ++i) {
        Int xd = ipow(Int(static_cast<long>(v[4 * i]) + 1), d);
        Int zd = ipow(Int(static_cast<long>(v[4 * i + 1]) + 1), d);
        Int yd = ipow(Int(static_cast<long>(v[4 * i + 2]) + 1), d);
        Int wd = ipow(Int(static_cast<long>(v[4 * i + 3]) + 1), d);
        s1 += l[i] * (xd - zd);
        s2 += l[i] * (yd - wd);
      }
      if (s1 == 0 && s2 == 0) ++moment;
    } while (next_tuple(v, X));
  } while (next_tuple(lidx, 4 * A + 1));
  return moment;
}

namespace {

Cplx adaptive_simpson(const std::function<Cplx(double)>& f, double lo,
                      double hi, Cplx flo, Cplx fmid, Cplx fhi, Cplx whole,
                      double tol, int depth) {
  double mid = 0.5 * (lo + hi);
  double lq = 0.5 * (lo + mid), rq = 0.5 * (mid + hi);
  Cplx flq = f(lq), frq = f(rq);
  Cplx left = (mid - lo) / 6.0 * (flo + 4.0 * flq + fmid);
  Cplx right = (hi - mid) / 6.0 * (fmid + 4.0 * frq + fhi);
  Cplx delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, lo, mid, flo, flq, fmid, left, tol / 2, depth - 1) +
         adaptive_simpson(f, mid, hi, fmid, frq, fhi, right, tol / 2, depth - 1);
}

Cplx integrate(const std::function<Cplx(double)>& f, double lo, double hi,
               double tol) {
  double mid = 0.5 * (lo + hi);
  Cplx flo = f(lo), fmid = f(mid), fhi = f(hi);
  Cplx whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 48);
}

}  // namespace

MajorArcApprox major_arc_approx(long b, const Rat& alpha, long q, long a,
                                long X, int d) {
  if (q < 1 || std::gcd(q, a) != 1)
    throw InvalidInput("major_arc_approx: need q >= 1, gcd(q,a) = 1");
  MajorArcApprox out;
  std::vector<Cplx> terms;
  terms.reserve(X);
  for (long x = 1; x <= X; ++x)
    terms.push_back(unit_phase(Rat(b) * alpha * Rat(ipow(Int(x), d))));
  out.direct = pairwise_sum(std::move(terms));

  long l = b == 0 ? q : std::gcd(q, std::labs(b));
  long q_t = q / l;
  long b_t = b / l;
  Rat center(a * b_t, q_t);
  center.canonicalize();
  Rat beta = Rat(b) * alpha - center;
  double beta_d = beta.get_d();
  auto integrand = [&](double t) {
    return std::polar(1.0, kTwoPi * beta_d * std::pow(t, d));
  };
  Cplx v = integrate(integrand, 0.0, static_cast<double>(X), 1e-8);
  long ab = ((a * b_t) % q_t + q_t) % q_t;
  out.approx = gauss_sum(q_t, ab, d) * v / static_cast<double>(q_t);
  out.error = std::abs(out.direct - out.approx);
  return out;
}

double arc_restricted_count(const CoeffVector& a, long X,
                            const std::vector<std::pair<Rat, Rat>>& region,
                            long M, std::int64_t cap) {
  if (M < 1) throw InvalidInput("arc_restricted_count: M >= 1");
  for (const auto& [lo, hi] : region)
    if (lo < 0 || hi > 1 || lo > hi)
      throw InvalidInput("arc_restricted_count: region must lie in [0,1)");

  // Residues of f_a over the box, then the Riemann sum over grid points in
  // the region. Grid membership decided in exact rational arithmetic.
  int n = a.basis->n;
  check_cap(ipow(Int(X), n) + Int(M) * M, cap, "arc_restricted_count");
  std::map<Int, Int> cnt;
  {
    std::vector<size_t> idx(n, 0);
    std::vector<Int> x(n);
    do {
      for (int i = 0; i < n; ++i) x[i] = static_cast<long>(idx[i]) + 1;
      Int v = evaluate_form(a, x) % M;
      if (v < 0) v += M;
      cnt[v] += 1;
    } while (next_tuple(idx, X));
  }

  std::vector<bool> in_region(M, false);
  for (const auto& [lo, hi] : region) {
    for (long j = 0; j < M; ++j) {
      Rat p(j, M);
      if (lo <= p && p <= hi) in_region[j] = true;
    }
  }

  std::vector<Cplx> outer;
  for (long j = 0; j < M; ++j) {
    if (!in_region[j]) continue;
    std::vector<Cplx> inner;
    inner.reserve(cnt.size());
    for (const auto& [t, c] : cnt)
      inner.push_back(c.get_d() * unit_phase(Rat(j * t, M)));
    outer.push_back(pairwise_sum(std::move(inner)));
  }
  Cplx total = pairwise_sum(std::move(outer));
  return total.real() / static_cast<double>(M);
}

}  // namespace cforge
