// Shared exact-arithmetic types and small number-theory helpers.
#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace towerlab {

// Exact integers, exact rationals, and 50-decimal-digit reals. Class numbers
// and divisor counts outgrow machine integers quickly, so everything that can
// be exact stays exact; real-valued evaluators carry 50 digits.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Real = boost::multiprecision::cpp_dec_float_50;

inline Int int_pow(Int base, std::uint64_t e) {
  Int r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

inline Real to_real(const Int& v) { return Real(v); }
inline Real to_real(const Rat& v) { return Real(v); }

inline bool is_prime_u64(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

// Distinct prime factors by trial division; fine for the < 2^63 orders we see.
inline std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

// q = p^r with p prime; returns {p, r} or throws.
inline std::pair<std::uint32_t, unsigned> prime_power_decompose(std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("prime power expected, got " + std::to_string(q));
  std::uint64_t p = q;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  unsigned r = 0;
  std::uint64_t v = q;
  while (v > 1) {
    if (v % p != 0) throw std::invalid_argument(std::to_string(q) + " is not a prime power");
    v /= p;
    ++r;
  }
  return {static_cast<std::uint32_t>(p), r};
}

inline std::vector<unsigned> divisors_of(unsigned m) {
  std::vector<unsigned> out;
  for (unsigned d = 1; d <= m; ++d)
    if (m % d == 0) out.push_back(d);
  return out;
}

inline int mobius(unsigned m) {
  if (m == 0) throw std::invalid_argument("mobius(0)");
  int sign = 1;
  for (unsigned d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      m /= d;
      if (m % d == 0) return 0;
      sign = -sign;
    }
  }
  if (m > 1) sign = -sign;
  return sign;
}

}  // namespace towerlab
