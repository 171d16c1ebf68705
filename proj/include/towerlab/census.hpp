// Place censuses: Moebius inversion from point counts N_m to place counts B_m,
// and the gcd splitting rule for censuses under constant-field extension.
#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "towerlab/numeric.hpp"

namespace towerlab::census {

enum class Provenance { exact, lower_bound };

inline const char* to_string(Provenance p) {
  return p == Provenance::exact ? "exact" : "lower_bound";
}

// Census of one tower level over its constant field of order q. N holds only
// certified total counts; lower-bound data stays out of N (inversion on
// under-counts silently produces garbage) and is carried by provenance.
struct LevelCensus {
  Int q = 0;
  std::optional<unsigned> genus;
  std::map<unsigned, Int> N;
  std::map<unsigned, Int> B;
  std::map<unsigned, Provenance> provenance;
};

// B_m = (1/m) sum_{d|m} mu(m/d) N_d for m = 1..M, exact. Throws if a required
// N_d is missing or the inversion is non-integral or negative (the signature
// of an uncertified count, e.g. a missing infinity correction).
inline std::map<unsigned, Int> places_from_counts(const std::map<unsigned, Int>& N, unsigned M) {
  std::map<unsigned, Int> B;
  for (unsigned m = 1; m <= M; ++m) {
    Int acc = 0;
    for (unsigned d = 1; d <= m; ++d) {
      if (m % d) continue;
      auto it = N.find(d);
      if (it == N.end())
        throw std::invalid_argument("places_from_counts: N_" + std::to_string(d) +
                                    " is required for B_" + std::to_string(m));
      acc += Int(mobius(m / d)) * it->second;
    }
    if (acc < 0 || acc % m != 0)
      throw std::domain_error("places_from_counts: B_" + std::to_string(m) +
                              " is not a nonnegative integer; counts are not certified totals");
    B[m] = acc / m;
  }
  return B;
}

// Roundtrip direction: N_m = sum_{d|m} d B_d.
inline Int counts_from_places(const std::map<unsigned, Int>& B, unsigned m) {
  Int acc = 0;
  for (unsigned d = 1; d <= m; ++d) {
    if (m % d) continue;
    auto it = B.find(d);
    if (it == B.end())
      throw std::invalid_argument("counts_from_places: B_" + std::to_string(d) + " missing");
    acc += Int(d) * it->second;
  }
  return acc;
}

// Census transformation under constant-field extension of degree i: a place of
// degree r' splits into gcd(r', i) places of degree r'/gcd(r', i). The degree-n
// output aggregates the set {r' : lcm(r', i) = n i} with weight r'/n. Output
// degrees whose contributor set is not fully covered by the input are reported
// as indeterminate rather than under-counted.
struct ExtendResult {
  std::map<unsigned, Int> B;
  std::set<unsigned> indeterminate;
};

inline std::vector<unsigned> extend_contributors(unsigned n, unsigned i) {
  std::vector<unsigned> rs;
  for (unsigned d = 1; d <= i; ++d) {
    if (i % d) continue;
    const unsigned rp = n * d;
    if (std::lcm(rp, i) == static_cast<unsigned long long>(n) * i) rs.push_back(rp);
  }
  return rs;
}

inline ExtendResult extend_census(const std::map<unsigned, Int>& B, unsigned i) {
  if (i < 1) throw std::invalid_argument("extension exponent must be >= 1");
  ExtendResult out;
  if (B.empty()) return out;
  const unsigned M = B.rbegin()->first;
  for (unsigned n = 1; n * i <= M; ++n) {
    Int acc = 0;
    bool complete = true;
    for (unsigned rp : extend_contributors(n, i)) {
      auto it = B.find(rp);
      if (it == B.end()) {
        complete = false;
        break;
      }
      acc += Int(rp / n) * it->second;
    }
    if (complete)
      out.B[n] = acc;
    else
      out.indeterminate.insert(n);
  }
  return out;
}

// B_1(F/F_{q^r}) = sum_{i|r} i B_i(F/F_q), exactly.
inline bool degree_one_identity_check(const std::map<unsigned, Int>& B, unsigned r,
                                      const Int& b1_ext) {
  Int acc = 0;
  for (unsigned i = 1; i <= r; ++i) {
    if (r % i) continue;
    auto it = B.find(i);
    if (it == B.end())
      throw std::invalid_argument("degree_one_identity_check: B_" + std::to_string(i) + " missing");
    acc += Int(i) * it->second;
  }
  return acc == b1_ext;
}

}  // namespace towerlab::census
