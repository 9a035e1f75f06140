#include "cforge/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "cforge/circle.hpp"
#include "json.hpp"

namespace cforge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

long p_valuation(Int v, long p) {
  if (v == 0) return std::numeric_limits<long>::max();
  long t = 0;
  while (v % p == 0) {
    v /= p;
    ++t;
  }
  return t;
}

std::vector<Int> gradient(const CoeffVector& a, const std::vector<Int>& x) {
  int n = a.basis->n;
  std::vector<Int> grad(n, Int(0));
  const auto& exps = a.basis->exponents;
  for (size_t m = 0; m < exps.size(); ++m) {
    if (a.entries[m] == 0) continue;
    for (int i = 0; i < n; ++i) {
      if (exps[m][i] == 0) continue;
      Int term = a.entries[m] * exps[m][i];
      for (int j = 0; j < n; ++j) {
        int e = exps[m][j] - (j == i ? 1 : 0);
        for (int r = 0; r < e; ++r) term *= x[j];
      }
      grad[i] += term;
    }
  }
  return grad;
}

PlaceVerdict real_place_verdict(const CoeffVector& a) {
  if (a.basis->d % 2 == 1) return PlaceVerdict::soluble;

  // Diagonal forms are decidable outright for even degree.
  auto pure = pure_power_positions(*a.basis);
  std::vector<bool> is_pure(a.entries.size(), false);
  for (size_t p : pure) is_pure[p] = true;
  bool diagonal = true;
  for (size_t i = 0; i < a.entries.size(); ++i)
    if (!is_pure[i] && a.entries[i] != 0) diagonal = false;
  if (diagonal) {
    bool pos = false, neg = false, zero = false;
    for (size_t p : pure) {
      if (a.entries[p] > 0) pos = true;
      else if (a.entries[p] < 0) neg = true;
      else zero = true;
    }
    if (zero || (pos && neg)) return PlaceVerdict::soluble;
    return PlaceVerdict::insoluble;  // definite diagonal form
  }

  // General even degree: deterministic sphere sampling plus sign analysis.
  int n = a.basis->n;
  HaltonSequence seq(n, 0x5eed);
  std::vector<double> g(n), x(n);
  bool pos = false, neg = false;
  for (int it = 0; it < 4096; ++it) {
    seq.next(g.data());
    double norm = 0;
    for (int j = 0; j < n; ++j) {
      x[j] = 2.0 * g[j] - 1.0;
      norm += x[j] * x[j];
    }
    if (norm < 1e-6) continue;
    norm = std::sqrt(norm);
    for (int j = 0; j < n; ++j) x[j] /= norm;
    double v = evaluate_form(a, x);
    if (v > 0) pos = true;
    if (v < 0) neg = true;
    if (v == 0 || (pos && neg)) return PlaceVerdict::soluble;
  }
  return PlaceVerdict::undetermined;
}

struct PrimeResult {
  PlaceVerdict verdict = PlaceVerdict::undetermined;
  std::optional<HenselCertificate> cert;
};

// Primitive zeros of f_a mod p^j, lifted level by level; a zero with gradient
// valuation t < j/2 certifies p-adic solubility, an empty level certifies
// insolubility (a nontrivial p-adic zero scales to a primitive integral one).
PrimeResult prime_verdict(const CoeffVector& a, long p, int lift_depth,
                          std::int64_t cap) {
  int n = a.basis->n;
  PrimeResult out;
  Int pn = ipow(Int(p), n);
  if (pn > cap) throw CapExceeded("check_local_solubility: p^n residues", pn);

  std::vector<std::vector<long>> zeros;
  std::optional<HenselCertificate> exact;
  Int mod = 1;
  for (int j = 1; j <= lift_depth; ++j) {
    Int prev_mod = mod;
    mod *= p;
    std::vector<std::vector<long>> next;
    auto consider = [&](const std::vector<long>& x) {
      bool primitive = false;
      std::vector<Int> xi(n);
      for (int i = 0; i < n; ++i) {
        xi[i] = x[i];
        if (x[i] % p != 0) primitive = true;
      }
      if (!primitive) return;
      Int v = evaluate_form(a, xi);
      if (v == 0 && !exact) {
        HenselCertificate cert;
        cert.p = p;
        cert.depth = j;
        cert.x = x;
        cert.exact_zero = true;
        exact = cert;
      }
      if (v % mod != 0) return;
      next.push_back(x);
    };
    if (j == 1) {
      std::vector<long> x(n, 0);
      while (true) {
        consider(x);
        int i = n - 1;
        while (i >= 0 && ++x[i] == p) x[i--] = 0;
        if (i < 0) break;
      }
    } else {
      Int work = Int(zeros.size()) * pn;
      if (work > cap)
        throw CapExceeded("check_local_solubility: lift frontier", work);
      long step = prev_mod.get_si();
      for (const auto& z : zeros) {
        std::vector<long> delta(n, 0);
        while (true) {
          std::vector<long> x(n);
          for (int i = 0; i < n; ++i) x[i] = z[i] + step * delta[i];
          consider(x);
          int i = n - 1;
          while (i >= 0 && ++delta[i] == p) delta[i--] = 0;
          if (i < 0) break;
        }
      }
    }
    if (exact) {
      out.verdict = PlaceVerdict::soluble;
      out.cert = exact;
      return out;
    }
    if (next.empty()) {
      out.verdict = PlaceVerdict::insoluble;
      return out;
    }
    for (const auto& z : next) {
      std::vector<Int> xi(z.begin(), z.end());
      auto grad = gradient(a, xi);
      long t = std::numeric_limits<long>::max();
      int coord = -1;
      for (int i = 0; i < n; ++i) {
        long v = p_valuation(grad[i] % mod, p);
        if (v < t) {
          t = v;
          coord = i;
        }
      }
      if (coord >= 0 && t < std::numeric_limits<long>::max() && j > 2 * t) {
        HenselCertificate cert;
        cert.p = p;
        cert.depth = j;
        cert.x = z;
        cert.grad_coord = coord;
        cert.grad_valuation = static_cast<int>(t);
        out.verdict = PlaceVerdict::soluble;
        out.cert = cert;
        return out;
      }
    }
    zeros = std::move(next);
  }
  return out;  // undetermined: zeros persist but none is smooth enough
}

struct ThinSample {
  std::vector<std::pair<long, std::vector<Int>>> kept;  // (stream index, a)
  Int total = 0;
  bool complete = true;
};

ThinSample sample_thin_set(const ExperimentConfig& cfg) {
  ThinSample s;
  long A = std::llround(cfg.params.A);
  std::mt19937_64 rng(cfg.seed);
  long idx = 0;
  enumerate_thin_set_stream(
      cfg.thin_set, A,
      [&](const std::vector<Int>& a) {
        if (idx < cfg.sample_limit) {
          s.kept.emplace_back(idx, a);
        } else {
          s.complete = false;
          std::uniform_int_distribution<long> pick(0, idx);
          long j = pick(rng);
          if (j < cfg.sample_limit) s.kept[j] = {idx, a};
        }
        ++idx;
        return true;
      },
      cfg.cap);
  s.total = idx;
  std::sort(s.kept.begin(), s.kept.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return s;
}

// Runs fn(i) for i in [0, count) across cfg.threads workers; results land in
// index order, so the output is independent of the worker count.
template <typename Fn>
void parallel_for(int threads, long count, Fn fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count < 2) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (long i = t; i < count; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (sample_limit < 1) throw InvalidInput("config: sample_limit >= 1");
  if (p_max < 2) throw InvalidInput("config: p_max >= 2");
  if (quadrature_samples < 1000)
    throw InvalidInput("config: quadrature_samples >= 1000");
  thin_set.validate();
  Int N = binomial(params.n + params.d - 1, params.d);
  if (Int(thin_set.num_vars) != N)
    throw InvalidInput("config: P must have N = C(n+d-1,d) variables");
}

ExperimentConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    int n = j.at("n").get<int>();
    int d = j.at("d").get<int>();
    int k = j.value("k", d);
    double A = j.at("A").get<double>();
    double X = j.at("X").get<double>();
    cfg.params = make_params(n, d, k, A, X);
    cfg.thin_set.num_vars =
        static_cast<int>(binomial(n + d - 1, d).get_si());
    cfg.thin_set.degree = k;
    for (const auto& term : j.at("P").at("terms")) {
      std::vector<int> exps = term.at("exps").get<std::vector<int>>();
      Int coef = parse_int(term.at("coef").get<std::string>());
      cfg.thin_set.terms.emplace_back(std::move(exps), std::move(coef));
    }
    cfg.p_max = j.value("p_max", 5L);
    cfg.quadrature_samples = j.value("quadrature_samples", 2000L);
    cfg.sample_limit = j.at("sample_limit").get<long>();
    if (j.contains("delta_probe"))
      cfg.delta_probe = j.at("delta_probe").get<std::vector<double>>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

SolubilityVerdict check_local_solubility(const CoeffVector& a, long p_max,
                                         int lift_depth, std::int64_t cap) {
  SolubilityVerdict v;
  v.real_place = real_place_verdict(a);
  bool all_soluble = v.real_place == PlaceVerdict::soluble;
  bool obstructed = v.real_place == PlaceVerdict::insoluble;
  for (long p : primes_up_to(p_max)) {
    PrimeResult r = prime_verdict(a, p, lift_depth, cap);
    v.per_prime[p] = r.verdict;
    if (r.cert) v.certificates[p] = *r.cert;
    if (r.verdict != PlaceVerdict::soluble) all_soluble = false;
    if (r.verdict == PlaceVerdict::insoluble) obstructed = true;
  }
  v.overall = obstructed ? PlaceVerdict::insoluble
              : all_soluble ? PlaceVerdict::soluble
                            : PlaceVerdict::undetermined;
  return v;
}

bool verify_certificate(const CoeffVector& a, const HenselCertificate& cert) {
  int n = a.basis->n;
  if (cert.p < 2 || static_cast<int>(cert.x.size()) != n) return false;
  bool primitive = false;
  std::vector<Int> xi(n);
  for (int i = 0; i < n; ++i) {
    xi[i] = cert.x[i];
    if (cert.x[i] % cert.p != 0) primitive = true;
  }
  if (!primitive) return false;
  if (cert.exact_zero) return evaluate_form(a, xi) == 0;
  if (cert.depth < 1 || cert.grad_coord < 0 || cert.grad_coord >= n)
    return false;
  if (cert.depth <= 2 * cert.grad_valuation) return false;
  Int mod = ipow(Int(cert.p), cert.depth);
  if (evaluate_form(a, xi) % mod != 0) return false;
  Int g = gradient(a, xi)[cert.grad_coord] % mod;
  return p_valuation(g, cert.p) == cert.grad_valuation;
}

VarianceReport run_variance_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  VarianceReport rep;
  rep.gate = hypothesis_gate(cfg.params);

  ThinSample sample = sample_thin_set(cfg);
  rep.complete = sample.complete;
  rep.thin_set_size = sample.total;
  rep.sampling_fraction =
      sample.total == 0
          ? 1.0
          : static_cast<double>(sample.kept.size()) / sample.total.get_d();

  long X = std::llround(cfg.params.X);
  auto basis = shared_basis(cfg.params.n, cfg.params.d);
  long count = static_cast<long>(sample.kept.size());
  rep.records.resize(count);
  parallel_for(cfg.threads, count, [&](long i) {
    const auto& [stream_idx, entries] = sample.kept[i];
    CoeffVector a(basis, entries);
    VarianceRecord rec;
    rec.a = entries;
    rec.i_value = count_I(a, X, cfg.cap);
    rec.s_star = truncated_singular_series(a, cfg.params, cfg.cap);
    rec.j_star = singular_integral_star(
        a, cfg.params, cfg.quadrature_samples,
        splitmix64(cfg.seed + static_cast<std::uint64_t>(stream_idx)));
    double diff = rec.i_value.get_d() - rec.s_star.get_d() * rec.j_star.value;
    rec.residual = diff * diff;
    rep.records[i] = std::move(rec);
  });

  for (const auto& r : rep.records) rep.aggregate += r.residual;
  int n = cfg.params.n, d = cfg.params.d;
  double N = binomial(n + d - 1, d).get_d();
  rep.comparator = std::pow(cfg.params.A, N - 4.0) *
                   std::pow(cfg.params.X, 2.0 * n - 2.0 * d);
  rep.ratio = rep.aggregate / rep.comparator;
  for (double delta : cfg.delta_probe)
    rep.delta_curve.emplace_back(
        delta,
        rep.aggregate /
            (rep.comparator * std::pow(std::log(cfg.params.A), -delta)));
  return rep;
}

CensusReport run_threshold_census(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.params.A <= 1)
    throw InvalidInput("census: requires A > 1 (thresholds use log A)");
  CensusReport rep;

  ThinSample sample = sample_thin_set(cfg);
  rep.complete = sample.complete;
  rep.thin_set_size = sample.total;

  long X = std::llround(cfg.params.X);
  auto basis = shared_basis(cfg.params.n, cfg.params.d);
  double base = std::pow(cfg.params.X, cfg.params.n - cfg.params.d) /
                cfg.params.A;
  double log_a = std::log(cfg.params.A);

  long count = static_cast<long>(sample.kept.size());
  std::vector<char> soluble(count, 0);
  std::vector<double> predictor(count, 0);
  std::vector<Int> i_val(count);
  parallel_for(cfg.threads, count, [&](long i) {
    const auto& [stream_idx, entries] = sample.kept[i];
    CoeffVector a(basis, entries);
    auto verdict = check_local_solubility(a, cfg.p_max, 4, cfg.cap);
    if (verdict.overall != PlaceVerdict::soluble) return;
    soluble[i] = 1;
    Rat s_star = truncated_singular_series(a, cfg.params, cfg.cap);
    QuadratureResult j_star = singular_integral_star(
        a, cfg.params, cfg.quadrature_samples,
        splitmix64(cfg.seed + static_cast<std::uint64_t>(stream_idx)));
    predictor[i] = s_star.get_d() * j_star.value;
    i_val[i] = count_I(a, X, cfg.cap);
  });

  rep.locally_soluble = 0;
  rep.true_below = 0;
  std::vector<double> etas = cfg.delta_probe;
  if (etas.empty()) etas.push_back(0.0);
  for (double eta : etas) rep.predictor_below.emplace_back(eta, Int(0));
  double true_threshold = base * std::pow(log_a, -0.2);
  for (long i = 0; i < count; ++i) {
    if (!soluble[i]) continue;
    rep.locally_soluble += 1;
    for (auto& [eta, tally] : rep.predictor_below)
      if (predictor[i] <= base * std::pow(log_a, -eta)) tally += 1;
    if (i_val[i].get_d() < true_threshold) rep.true_below += 1;
  }
  return rep;
}

}  // namespace cforge
