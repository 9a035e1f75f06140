#include "cforge/quadrature.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cforge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kBlocks = 8;

double sinc(double t) {
  // sin(t)/t; series below 1e-4 keeps full double accuracy.
  if (std::abs(t) < 1e-4) {
    double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

// sin(2 pi w u) / (pi u), the collapsed inner beta integral; 2w at u = 0.
double dirichlet(double u, double w) {
  if (std::abs(u) < 1e-8) return 2.0 * w;
  return std::sin(2.0 * kPi * w * u) / (kPi * u);
}

double prefactor(const ExperimentParams& p) {
  return std::pow(p.X, p.n - p.d) / p.A;
}

std::vector<double> coeff_doubles(const CoeffVector& a) {
  std::vector<double> c(a.entries.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.entries[i].get_d();
  return c;
}

double eval_double(const CoeffVector& a, const std::vector<double>& c,
                   const std::vector<double>& g) {
  double acc = 0;
  const auto& exps = a.basis->exponents;
  for (size_t i = 0; i < exps.size(); ++i) {
    double m = c[i];
    if (m == 0) continue;
    for (int j = 0; j < a.basis->n; ++j)
      for (int e = 0; e < exps[i][j]; ++e) m *= g[j];
    acc += m;
  }
  return acc;
}

// Mean over a shifted Halton point set with block-wise error bars. The block
// accumulators are reduced in fixed index order, so the result depends only
// on (seed, samples).
QuadratureResult halton_mean(int dim, long samples, std::uint64_t seed,
                             const std::function<double(const double*)>& f) {
  if (samples < 1000) throw InvalidInput("quadrature: samples >= 1000");
  HaltonSequence seq(dim, seed);
  std::vector<double> g(dim);
  double block_sum[kBlocks] = {0};
  long block_n[kBlocks] = {0};
  for (long i = 0; i < samples; ++i) {
    seq.next(g.data());
    int b = static_cast<int>((static_cast<long long>(i) * kBlocks) / samples);
    block_sum[b] += f(g.data());
    block_n[b] += 1;
  }
  double mean = 0;
  for (int b = 0; b < kBlocks; ++b) mean += block_sum[b];
  mean /= static_cast<double>(samples);
  double var = 0;
  for (int b = 0; b < kBlocks; ++b) {
    double bm = block_sum[b] / static_cast<double>(block_n[b]);
    var += (bm - mean) * (bm - mean);
  }
  var /= kBlocks * (kBlocks - 1);
  QuadratureResult r;
  r.value = mean;
  r.std_error = std::sqrt(var);
  r.samples = samples;
  r.method = "low-discrepancy";
  return r;
}

}  // namespace

double fejer_weight(double beta, double zeta) {
  if (zeta <= 0) throw InvalidInput("fejer_weight: zeta > 0");
  double s = sinc(kPi * zeta * beta);
  return zeta * s * s;
}

double fejer_hat(double xi, double zeta) {
  if (zeta <= 0) throw InvalidInput("fejer_hat: zeta > 0");
  return std::max(0.0, 1.0 - std::abs(xi) / zeta);
}

double zeta_of(const ExperimentParams& params) {
  if (params.w <= 1) throw InvalidInput("zeta_of: requires w > 1");
  if (params.d < 1) throw InvalidInput("zeta_of: requires d >= 1");
  return std::pow(params.w, -4.0 - 1.0 / (8.0 * params.d));
}

HaltonSequence::HaltonSequence(int dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidInput("HaltonSequence: dim >= 1");
  auto primes = primes_up_to(std::max(3, dim * 8));
  while (primes.size() < static_cast<size_t>(dim))
    primes = primes_up_to(static_cast<long>(primes.empty() ? 16 : 2 * primes.back()));
  bases_.assign(primes.begin(), primes.begin() + dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  shift_.resize(dim);
  for (int j = 0; j < dim; ++j) shift_[j] = unif(rng);
}

void HaltonSequence::next(double* out) {
  ++index_;
  for (size_t j = 0; j < bases_.size(); ++j) {
    long b = bases_[j];
    double inv = 1.0 / b, f = inv, x = 0;
    for (long i = index_; i > 0; i /= b) {
      x += (i % b) * f;
      f *= inv;
    }
    x += shift_[j];
    out[j] = x - std::floor(x);
  }
}

QuadratureResult singular_integral_star(const CoeffVector& a,
                                        const ExperimentParams& params,
                                        long samples, std::uint64_t seed) {
  double zeta = params.zeta > 0 ? params.zeta : zeta_of(params);
  auto c = coeff_doubles(a);
  int n = a.basis->n;
  std::vector<double> g(n);
  auto integrand = [&](const double* pt) {
    std::vector<double> gv(pt, pt + n);
    double u = eval_double(a, c, gv) / params.A;
    return fejer_hat(u, zeta) / zeta;
  };
  QuadratureResult r = halton_mean(n, samples, seed, integrand);
  double pre = prefactor(params);
  r.value *= pre;
  r.std_error *= pre;
  return r;
}

QuadratureResult singular_integral_w_kernel(const CoeffVector& a,
                                            const ExperimentParams& params,
                                            long samples, std::uint64_t seed) {
  auto c = coeff_doubles(a);
  int n = a.basis->n;
  auto integrand = [&](const double* pt) {
    std::vector<double> gv(pt, pt + n);
    double u = eval_double(a, c, gv) / params.A;
    return dirichlet(u, params.w);
  };
  QuadratureResult r = halton_mean(n, samples, seed, integrand);
  double pre = prefactor(params);
  r.value *= pre;
  r.std_error *= pre;
  return r;
}

QuadratureResult singular_integral_w_tensor(const CoeffVector& a,
                                            const ExperimentParams& params,
                                            long samples) {
  int n = a.basis->n;
  if (n > 2)
    throw InvalidInput("singular_integral_w_tensor: only n <= 2 supported");
  if (samples < 1000) throw InvalidInput("quadrature: samples >= 1000");
  auto c = coeff_doubles(a);

  // Midpoint product grid over beta in [-w, w] and g in [0,1]^n, sized so the
  // total point count stays near `samples`.
  long per_axis = std::max<long>(
      8, static_cast<long>(std::llround(std::pow(
             static_cast<double>(samples), 1.0 / (n + 1)))));
  long beta_axis = 4 * per_axis;  // the oscillatory axis needs the most points
  double acc = 0;
  std::vector<double> g(n);
  std::vector<long> idx(n, 0);
  while (true) {
    for (int j = 0; j < n; ++j) g[j] = (idx[j] + 0.5) / per_axis;
    double u = eval_double(a, c, g) / params.A;
    double inner = 0;
    for (long bi = 0; bi < beta_axis; ++bi) {
      double beta = -params.w + (2.0 * params.w) * (bi + 0.5) / beta_axis;
      inner += std::cos(2.0 * kPi * beta * u);
    }
    acc += inner * (2.0 * params.w / beta_axis);
    int j = n - 1;
    while (j >= 0 && ++idx[j] == per_axis) idx[j--] = 0;
    if (j < 0) break;
  }
  double cell = 1.0;
  for (int j = 0; j < n; ++j) cell /= per_axis;
  QuadratureResult r;
  r.value = prefactor(params) * acc * cell;
  r.std_error = 0;
  r.samples = beta_axis;
  for (int j = 0; j < n; ++j) r.samples *= per_axis;
  r.method = "tensor-grid";
  return r;
}

QuadratureResult singular_integral_w(const CoeffVector& a,
                                     const ExperimentParams& params,
                                     long samples, std::uint64_t seed) {
  QuadratureResult k = singular_integral_w_kernel(a, params, samples, seed);
  if (a.basis->n <= 2) {
    QuadratureResult t = singular_integral_w_tensor(a, params, samples);
    double tol = 3.0 * (k.std_error + t.std_error) +
                 1e-3 * std::max(1.0, std::abs(k.value));
    if (std::abs(k.value - t.value) > tol)
      throw std::logic_error("singular_integral_w: kernel and tensor routes differ");
  }
  return k;
}

}  // namespace cforge
