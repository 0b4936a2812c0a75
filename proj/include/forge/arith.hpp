#pragma once

#include <cstdint>
#include <vector>

namespace forge {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
};

inline std::vector<PrimePower> factorize(std::uint64_t n) {
  std::vector<PrimePower> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (const auto& pp : factorize(n)) out.push_back(pp.prime);
  return out;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline bool is_prime_power(std::uint64_t n) {
  return n > 1 && factorize(n).size() == 1;
}

// Largest divisor of n whose prime factors all lie in pi.
inline std::uint64_t pi_part(std::uint64_t n, const std::vector<std::uint64_t>& pi) {
  std::uint64_t part = 1;
  for (const auto& pp : factorize(n)) {
    for (std::uint64_t p : pi) {
      if (pp.prime == p) {
        for (unsigned i = 0; i < pp.exponent; ++i) part *= pp.prime;
        break;
      }
    }
  }
  return part;
}

inline std::uint64_t p_part(std::uint64_t n, std::uint64_t p) { return pi_part(n, {p}); }

// True when every prime factor of n lies in pi (so 1 is a pi-number).
inline bool is_pi_number(std::uint64_t n, const std::vector<std::uint64_t>& pi) {
  return pi_part(n, pi) == n;
}

}  // namespace forge
