#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cforge/counting.hpp"
#include "cforge/quadrature.hpp"

namespace cforge {

struct ExperimentConfig {
  ExperimentParams params;
  ThinSetSpec thin_set;
  long sample_limit = 1;
  std::uint64_t seed = 0;
  long p_max = 2;
  long quadrature_samples = 1000;
  std::vector<double> delta_probe;  // also the eta grid for the census
  int threads = 1;
  std::int64_t cap = kDefaultCap;

  void validate() const;
};

// Parses the config JSON text (schema: n, d, k, A, X, P{terms[{exps,coef}]},
// p_max, quadrature_samples, delta_probe, sample_limit).
ExperimentConfig parse_config(const std::string& json_text);

enum class PlaceVerdict { soluble, insoluble, undetermined };

// A smooth zero of f_a mod p^depth whose gradient survives Hensel lifting:
// f(x) = 0 mod p^depth, min_i v_p(d_i f(x)) = t, depth > 2t. When exact_zero
// is set the point is an exact integer zero (primitive), which certifies
// solubility at every prime without a gradient condition.
struct HenselCertificate {
  long p = 0;
  int depth = 0;
  std::vector<long> x;
  int grad_coord = -1;
  int grad_valuation = 0;
  bool exact_zero = false;
};

struct SolubilityVerdict {
  PlaceVerdict real_place = PlaceVerdict::undetermined;
  std::map<long, PlaceVerdict> per_prime;
  std::map<long, HenselCertificate> certificates;
  PlaceVerdict overall = PlaceVerdict::undetermined;
};

// Real place by sign analysis, each p <= p_max by primitive-residue search
// with Hensel lifting up to lift_depth.
SolubilityVerdict check_local_solubility(const CoeffVector& a, long p_max,
                                         int lift_depth = 4,
                                         std::int64_t cap = kDefaultCap);

// Independent re-check of a certificate against the form.
bool verify_certificate(const CoeffVector& a, const HenselCertificate& cert);

struct VarianceRecord {
  std::vector<Int> a;
  Int i_value;
  Rat s_star;
  QuadratureResult j_star;
  double residual = 0;  // |I - S* J*|^2
};

struct VarianceReport {
  std::vector<VarianceRecord> records;
  bool complete = true;        // whole thin set enumerated
  Int thin_set_size;           // points seen in the enumeration stream
  double sampling_fraction = 1.0;
  double aggregate = 0;        // sum of residuals (sampled: over the sample)
  double comparator = 0;       // A^{N-4} X^{2n-2d}
  double ratio = 0;
  // ratio against comparator * (log A)^{-delta} for each probe exponent
  std::vector<std::pair<double, double>> delta_curve;
  GateReport gate;
};

VarianceReport run_variance_experiment(const ExperimentConfig& cfg);

struct CensusReport {
  Int thin_set_size;
  Int locally_soluble;
  bool complete = true;
  // eta -> #{a in A^loc : S*_a J*_a <= X^{n-d} A^{-1} (log A)^{-eta}}
  std::vector<std::pair<double, Int>> predictor_below;
  // #{a in A^loc : I_a(X) < A^{-1} X^{n-d} (log A)^{-1/5}}
  Int true_below;
};

CensusReport run_threshold_census(const ExperimentConfig& cfg);

}  // namespace cforge
