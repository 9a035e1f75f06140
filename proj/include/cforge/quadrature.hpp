#pragma once

#include <cstdint>
#include <string>

#include "cforge/monomial.hpp"

namespace cforge {

struct QuadratureResult {
  double value = 0;
  double std_error = 0;
  long samples = 0;
  std::string method;  // "low-discrepancy", "tensor-grid", "closed-form"
};

// w_zeta(beta) = zeta * (sin(pi zeta beta) / (pi zeta beta))^2, with the
// removable singularity at beta = 0 handled by a Taylor series for
// |pi zeta beta| < 1e-4.
double fejer_weight(double beta, double zeta);

// Fourier transform of w_zeta: the tent max{0, 1 - |xi|/zeta}.
double fejer_hat(double xi, double zeta);

// zeta = w^{-4 - 1/(8d)}. Chosen differently from earlier treatments, which
// tie the mollifier width to a power of X rather than of w = log X.
double zeta_of(const ExperimentParams& params);

// J*_a = A^{-1} X^{n-d} int_{[0,1]^n} zeta^{-1} what_zeta(A^{-1} f_a(g)) dg,
// estimated on a shifted Halton point set; std_error from 8 sample blocks.
QuadratureResult singular_integral_star(const CoeffVector& a,
                                        const ExperimentParams& params,
                                        long samples,
                                        std::uint64_t seed = 0);

// J_a(w) = X^{n-d} A^{-1} int_{|beta|<=w} int_{[0,1]^n} e(beta A^{-1} f_a(g)) dg dbeta.
// Kernel route: the inner beta integral collapses to sin(2 pi w u)/(pi u)
// with u = A^{-1} f_a(g) (value 2w when |u| < 1e-8), leaving an n-dimensional
// quadrature. The tensor route evaluates the (1+n)-dimensional integral on a
// product grid; only available for n <= 2.
QuadratureResult singular_integral_w_kernel(const CoeffVector& a,
                                            const ExperimentParams& params,
                                            long samples,
                                            std::uint64_t seed = 0);
QuadratureResult singular_integral_w_tensor(const CoeffVector& a,
                                            const ExperimentParams& params,
                                            long samples);

// Kernel route, cross-checked against the tensor route when n <= 2; the two
// must agree within combined error bars plus a 1e-3 relative allowance.
QuadratureResult singular_integral_w(const CoeffVector& a,
                                     const ExperimentParams& params,
                                     long samples,
                                     std::uint64_t seed = 0);

// Shifted Halton sequence in dim coordinates; point index starts at 1. The
// shift is drawn once from the seed (Cranley-Patterson rotation).
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t seed);
  // Fills out[0..dim) with the next point, each coordinate in [0,1).
  void next(double* out);

 private:
  std::vector<long> bases_;
  std::vector<double> shift_;
  long index_ = 0;
};

}  // namespace cforge
