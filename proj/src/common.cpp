#include "cforge/common.hpp"

#include <cctype>

namespace cforge {

std::vector<long> primes_up_to(long limit) {
  std::vector<long> out;
  if (limit < 2) return out;
  std::vector<bool> composite(static_cast<size_t>(limit) + 1, false);
  for (long p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (long q = p * p; q >= 0 && q <= limit; q += p) composite[q] = true;
  }
  return out;
}

Int parse_int(const std::string& s) {
  if (s.empty()) throw InvalidInput("empty integer literal");
  Int r;
  if (mpz_set_str(r.get_mpz_t(), s.c_str(), 10) != 0)
    throw InvalidInput("bad integer literal: " + s);
  return r;
}

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw InvalidInput("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (den == 0) throw InvalidInput("zero denominator: " + s);
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(parse_int(s));
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  size_t frac_len = s.size() - dot - 1;
  Int num = parse_int(digits);
  Rat r(num, ipow(Int(10), frac_len));
  r.canonicalize();
  return r;
}

}  // namespace cforge
