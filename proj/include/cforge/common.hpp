#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cforge {

using Int = mpz_class;
using Rat = mpq_class;

// Thrown when an enumeration would exceed the configured iteration cap.
// Carries the estimate so callers can report what was refused.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, const Int& estimate)
      : std::runtime_error(what + " (estimated " + estimate.get_str() +
                           " elementary iterations)"),
        estimate_(estimate) {}
  const Int& estimate() const { return estimate_; }

 private:
  Int estimate_;
};

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::int64_t kDefaultCap = 1000000000;  // 10^9

inline Int binomial(unsigned long n, unsigned long k) {
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Int ipow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Int igcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Primes up to limit (inclusive) by a plain sieve.
std::vector<long> primes_up_to(long limit);

// Parse a decimal integer string; throws InvalidInput on garbage.
Int parse_int(const std::string& s);

// Parse "p/q" or a plain/decimal string ("0.25", "3") into an exact rational.
Rat parse_rat(const std::string& s);

}  // namespace cforge
