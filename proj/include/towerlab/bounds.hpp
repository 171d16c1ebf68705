// Lachaud - Martin-Deschamps lower bounds L1/L2/L3 on the class number, the
// h > q^g comparison, and exact ratio tables h/L_i with degeneracy handling.
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "towerlab/numeric.hpp"

namespace towerlab::bounds {

inline bool is_square(const Int& v) {
  if (v < 0) return false;
  const Int s = boost::multiprecision::sqrt(v);
  return s * s == v;
}

// L2 involves (sqrt(q)-1)^2: exact rational when q is a square, otherwise a
// 50-digit real carrying an explicit inexactness flag.
struct L2Value {
  bool exact = false;
  Rat exact_value = 0;  // valid iff exact
  Real value = 0;

  bool is_zero() const { return exact ? exact_value == 0 : value == 0; }
};

struct LmdBounds {
  Rat L1 = 0;
  L2Value L2;
  std::optional<Rat> L3;  // present only when g > sqrt(q)/2 and B_1 >= 1
};

// L1 = q^{g-1} (q-1)^2 / ((q+1)(g+1))
// L2 = (sqrt(q)-1)^2 (q^{g-1}-1)/g * (B_1+q-1)/(q-1)
// L3 = (q^g-1)(q-1)/(q+g+gq), when g > sqrt(q)/2 and B_1 >= 1
inline LmdBounds lmd_bounds(const Int& q, unsigned g, const Int& B1) {
  if (g == 0) throw std::domain_error("LMD bounds are not meaningful at genus 0");
  if (q < 2) throw std::invalid_argument("field order must be >= 2");
  if (B1 < 0) throw std::invalid_argument("B_1 must be nonnegative");
  LmdBounds out;
  out.L1 = Rat(int_pow(q, g - 1) * (q - 1) * (q - 1), (q + 1) * (Int(g) + 1));
  const Rat rest = Rat(int_pow(q, g - 1) - 1, g) * Rat(B1 + q - 1, q - 1);
  if (is_square(q)) {
    const Int s = boost::multiprecision::sqrt(q);
    out.L2.exact = true;
    out.L2.exact_value = Rat((s - 1) * (s - 1)) * rest;
    out.L2.value = to_real(out.L2.exact_value);
  } else {
    const Real sq = boost::multiprecision::sqrt(to_real(q));
    out.L2.exact = false;
    out.L2.value = (sq - 1) * (sq - 1) * to_real(rest);
  }
  if (Int(4) * g * g > q && B1 >= 1)  // g > sqrt(q)/2, compared exactly
    out.L3 = Rat((int_pow(q, g) - 1) * (q - 1), q + g + Int(g) * q);
  return out;
}

inline bool corollary_check(const Int& h, const Int& q, unsigned g) {
  if (g == 0) throw std::domain_error("h > q^g is not evaluated at genus 0");
  return h > int_pow(q, g);
}

struct BoundsReport {
  Int q = 0;
  unsigned g = 0;
  Int B1 = 0;
  Int h = 0;
  LmdBounds L;
  std::optional<Rat> h_over_L1;
  std::optional<Rat> h_over_L2;  // exact ratio, when L2 is exact and nonzero
  std::optional<Real> h_over_L2_real;
  std::optional<Rat> h_over_L3;
  bool h_gt_qg = false;
  std::optional<bool> hL2_ge_2;  // absent when L2 degenerates to 0
};

inline BoundsReport make_report(const Int& q, unsigned g, const Int& B1, const Int& h) {
  BoundsReport r;
  r.q = q;
  r.g = g;
  r.B1 = B1;
  r.h = h;
  r.L = lmd_bounds(q, g, B1);
  if (r.L.L1 != 0) r.h_over_L1 = Rat(h) / r.L.L1;
  if (!r.L.L2.is_zero()) {
    if (r.L.L2.exact) {
      r.h_over_L2 = Rat(h) / r.L.L2.exact_value;
      r.h_over_L2_real = to_real(*r.h_over_L2);
      r.hL2_ge_2 = (*r.h_over_L2 >= 2);
    } else {
      r.h_over_L2_real = to_real(h) / r.L.L2.value;
      r.hL2_ge_2 = (*r.h_over_L2_real >= 2);
    }
  }
  if (r.L.L3 && *r.L.L3 != 0) r.h_over_L3 = Rat(h) / *r.L.L3;
  r.h_gt_qg = corollary_check(h, q, g);
  return r;
}

// Ratio table over reports ordered by genus: exact ratios with degenerate
// bounds marked not-applicable, plus a trend mark against the previous row
// ('+', '-', '=', or '?' when either side is undefined). Trends are reported,
// never asserted; the limits themselves are out of reach at finite level.
struct RatioRow {
  unsigned g = 0;
  Int q = 0;
  std::optional<Rat> h_over_L1;
  std::optional<Rat> h_over_L2;
  std::optional<Real> h_over_L2_real;
  std::optional<Rat> h_over_L3;
  std::optional<bool> hL2_ge_2;
  char trend_L1 = '?';
  char trend_L2 = '?';
};

inline std::vector<RatioRow> ratio_table(const std::vector<BoundsReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("ratio_table needs at least one report");
  std::vector<RatioRow> rows;
  for (const auto& rep : reports) {
    RatioRow row;
    row.g = rep.g;
    row.q = rep.q;
    row.h_over_L1 = rep.h_over_L1;
    row.h_over_L2 = rep.h_over_L2;
    row.h_over_L2_real = rep.h_over_L2_real;
    row.h_over_L3 = rep.h_over_L3;
    row.hL2_ge_2 = rep.hL2_ge_2;
    if (!rows.empty()) {
      const RatioRow& prev = rows.back();
      if (prev.h_over_L1 && row.h_over_L1)
        row.trend_L1 = *row.h_over_L1 > *prev.h_over_L1   ? '+'
                       : *row.h_over_L1 < *prev.h_over_L1 ? '-'
                                                          : '=';
      if (prev.h_over_L2_real && row.h_over_L2_real)
        row.trend_L2 = *row.h_over_L2_real > *prev.h_over_L2_real   ? '+'
                       : *row.h_over_L2_real < *prev.h_over_L2_real ? '-'
                                                                    : '=';
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Constant from the r = 1 ratio argument: 2(q+1-2 sqrt(q)) / ((q-1) sqrt(q)),
// strictly below 0.4 for every q >= 2.
inline Real l2_proof_constant(const Int& q) {
  const Real sq = boost::multiprecision::sqrt(to_real(q));
  return 2 * (to_real(q) + 1 - 2 * sq) / ((to_real(q) - 1) * sq);
}

}  // namespace towerlab::bounds
