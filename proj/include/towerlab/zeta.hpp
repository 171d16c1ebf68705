// From exact point counts to the zeta numerator: genus inference, the
// L-polynomial via Newton's identities and the Weil functional equation, the
// class number h = L(1), and effective-divisor counts A_n from the zeta series.
#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "towerlab/numeric.hpp"

namespace towerlab::zeta {

// Numerator of the zeta function: L(t) = sum a_j t^j, degree 2g, a_0 = 1,
// functional equation a_{2g-i} = q^{g-i} a_i, reciprocal roots of modulus
// sqrt(q), L(1) = h > 0.
struct LPolynomial {
  Int q = 2;
  unsigned g = 0;
  std::vector<Int> a;  // size 2g+1
};

// Power sums P_m = q^m + 1 - N_m of the reciprocal roots, extended through the
// Newton recurrence P_j = -j a_j - sum_{m<j} P_m a_{j-m} (a_j = 0 past degree).
namespace detail {

inline std::vector<Int> power_sums_from_counts(const std::vector<Int>& N, const Int& q) {
  std::vector<Int> P(N.size() + 1);
  for (std::size_t m = 1; m <= N.size(); ++m) P[m] = int_pow(q, m) + 1 - N[m - 1];
  return P;
}

}  // namespace detail

inline void validate(const LPolynomial& L) {
  if (L.a.size() != 2 * L.g + 1) throw std::invalid_argument("L-polynomial has wrong degree");
  if (L.a[0] != 1) throw std::invalid_argument("L-polynomial must have a_0 = 1");
  for (unsigned i = 0; i <= L.g; ++i)
    if (L.a[2 * L.g - i] != int_pow(L.q, L.g - i) * L.a[i])
      throw std::domain_error("functional equation a_{2g-i} = q^{g-i} a_i fails at i=" +
                              std::to_string(i));
  Int h = 0;
  for (const auto& c : L.a) h += c;
  if (h <= 0) throw std::domain_error("L(1) must be positive");
}

// Coefficients a_1..a_2g from N_1..N_2g via Newton's identities
// j a_j = -sum_{m=1..j} P_m a_{j-m}. Throws when the counts are inconsistent
// (non-integral Newton step or broken functional equation).
inline LPolynomial lpoly_from_counts(const std::vector<Int>& N, const Int& q, unsigned g) {
  if (N.size() < 2 * g)
    throw std::invalid_argument("need N_1..N_" + std::to_string(2 * g) + " for genus " +
                                std::to_string(g));
  const std::vector<Int> P = detail::power_sums_from_counts(N, q);
  LPolynomial L;
  L.q = q;
  L.g = g;
  L.a.assign(2 * g + 1, 0);
  L.a[0] = 1;
  for (unsigned j = 1; j <= 2 * g; ++j) {
    Int acc = 0;
    for (unsigned m = 1; m <= j; ++m) acc += P[m] * L.a[j - m];
    if (acc % j != 0)
      throw std::domain_error("Newton identity gives a non-integral coefficient a_" +
                              std::to_string(j));
    L.a[j] = -acc / j;
  }
  validate(L);
  return L;
}

// N_1..N_M predicted by an L-polynomial.
inline std::vector<Int> predicted_counts(const LPolynomial& L, unsigned M) {
  std::vector<Int> P(M + 1), N(M);
  for (unsigned j = 1; j <= M; ++j) {
    Int acc = (j <= 2 * L.g) ? Int(j) * L.a[j] : Int(0);
    for (unsigned m = 1; m < j; ++m)
      if (j - m <= 2 * L.g) acc += P[m] * L.a[j - m];
    P[j] = -acc;
    N[j - 1] = int_pow(L.q, j) + 1 - P[j];
  }
  return N;
}

// Smallest g >= 0 whose L-polynomial (built from N_1..N_2g) satisfies the
// functional equation exactly and predicts every remaining count, including at
// least N_{2g+1} and N_{2g+2}. Throws when no genus <= (M-2)/2 is consistent.
inline unsigned infer_genus(const std::vector<Int>& N, const Int& q) {
  const unsigned M = static_cast<unsigned>(N.size());
  if (M < 2) throw std::invalid_argument("genus inference needs at least N_1, N_2");
  for (unsigned g = 0; 2 * g + 2 <= M; ++g) {
    LPolynomial L;
    try {
      L = lpoly_from_counts(std::vector<Int>(N.begin(), N.begin() + 2 * g), q, g);
    } catch (const std::domain_error&) {
      continue;
    }
    const std::vector<Int> pred = predicted_counts(L, M);
    bool ok = true;
    for (unsigned m = 2 * g + 1; m <= M && ok; ++m) ok = (pred[m - 1] == N[m - 1]);
    if (ok) return g;
  }
  throw std::domain_error(
      "no genus <= " + std::to_string((M - 2) / 2) +
      " is consistent with the counts; need more extension degrees or counts are uncertified");
}

// h = L(1), the class number.
inline Int class_number(const LPolynomial& L) {
  Int h = 0;
  for (const auto& c : L.a) h += c;
  return h;
}

// A_n = [t^n] L(t) / ((1-t)(1-qt)) for n = 0..n_max, exact: the cofactor
// series is sum_n s(n) t^n with s(n) = (q^{n+1}-1)/(q-1).
inline std::vector<Int> effective_divisors(const LPolynomial& L, unsigned n_max) {
  std::vector<Int> geom(n_max + 1);  // geom[t] = 1 + q + ... + q^t
  Int acc = 0, pw = 1;
  for (unsigned t = 0; t <= n_max; ++t) {
    acc += pw;
    geom[t] = acc;
    pw *= L.q;
  }
  std::vector<Int> A(n_max + 1, 0);
  for (unsigned n = 0; n <= n_max; ++n) {
    Int s = 0;
    const unsigned jmax = std::min<unsigned>(n, 2 * L.g);
    for (unsigned j = 0; j <= jmax; ++j) s += L.a[j] * geom[n - j];
    A[n] = s;
  }
  return A;
}

// Closed tail A_n = h (q^{n-g+1} - 1)/(q - 1), valid for n > 2g - 2.
inline Int tail_formula(const LPolynomial& L, unsigned n) {
  if (n + 2 <= 2 * L.g) throw std::invalid_argument("tail formula needs n > 2g-2");
  Int geom = 0, pw = 1;
  for (unsigned t = 0; t <= n - L.g; ++t) {
    geom += pw;
    pw *= L.q;
  }
  return class_number(L) * geom;
}

namespace detail {

// Exact polynomial helpers over Q, ascending coefficients, used to strip root
// multiplicities before the numeric root check. Degrees here are tiny.
using RatPoly = std::vector<Rat>;

inline void rp_trim(RatPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline RatPoly rp_divide_exact(const RatPoly& a, const RatPoly& b) {
  RatPoly rem = a, q(a.size() > b.size() ? a.size() - b.size() + 1 : 1, Rat(0));
  while (rem.size() >= b.size() && !rem.empty()) {
    const Rat coef = rem.back() / b.back();
    const std::size_t shift = rem.size() - b.size();
    q[shift] = coef;
    for (std::size_t i = 0; i < b.size(); ++i) rem[shift + i] -= coef * b[i];
    rp_trim(rem);
  }
  if (!rem.empty()) throw std::logic_error("polynomial division was expected to be exact");
  rp_trim(q);
  return q;
}

inline RatPoly rp_gcd(RatPoly a, RatPoly b) {
  rp_trim(a);
  rp_trim(b);
  while (!b.empty()) {
    // a mod b
    while (a.size() >= b.size() && !a.empty()) {
      const Rat coef = a.back() / b.back();
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= coef * b[i];
      rp_trim(a);
    }
    std::swap(a, b);
  }
  if (!a.empty()) {
    const Rat lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

inline RatPoly rp_squarefree_part(const RatPoly& f) {
  RatPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(Rat(Int(i)) * f[i]);
  RatPoly g = rp_gcd(f, d);
  if (g.size() <= 1) return f;
  return rp_divide_exact(f, g);
}

}  // namespace detail

// Numeric sanity layer: largest deviation of a reciprocal-root modulus from
// sqrt(q). Root multiplicities are stripped exactly first (maximal curves have
// fully repeated roots), then Durand-Kerner runs on the squarefree part.
// Exactness rests on the functional equation; this only guards gross errors.
inline double max_root_modulus_deviation(const LPolynomial& L) {
  const unsigned d = 2 * L.g;
  if (d == 0) return 0.0;
  detail::RatPoly R(d + 1);
  for (unsigned i = 0; i <= d; ++i) R[i] = Rat(L.a[d - i]);  // roots = reciprocal roots of L
  detail::RatPoly S = detail::rp_squarefree_part(R);
  const unsigned ds = static_cast<unsigned>(S.size() - 1);
  std::vector<std::complex<double>> c(ds + 1);
  for (unsigned i = 0; i <= ds; ++i) c[i] = static_cast<double>(Real(S[i] / S.back()));
  auto eval = [&](std::complex<double> z) {
    std::complex<double> acc = c[ds];
    for (unsigned i = ds; i-- > 0;) acc = acc * z + c[i];
    return acc;
  };
  const double rq = std::sqrt(static_cast<double>(L.q));
  std::vector<std::complex<double>> z(ds);
  for (unsigned k = 0; k < ds; ++k) {
    const double th = 2.0 * 3.141592653589793 * (k + 0.25) / ds;
    z[k] = std::polar(rq * 1.1, th);
  }
  for (int iter = 0; iter < 500; ++iter) {
    double moved = 0.0;
    for (unsigned k = 0; k < ds; ++k) {
      std::complex<double> denom = 1.0;
      for (unsigned j = 0; j < ds; ++j)
        if (j != k) denom *= (z[k] - z[j]);
      const std::complex<double> delta = eval(z[k]) / denom;
      z[k] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-14) break;
  }
  double worst = 0.0;
  for (unsigned k = 0; k < ds; ++k) worst = std::max(worst, std::abs(std::abs(z[k]) - rq));
  return worst;
}

}  // namespace towerlab::zeta
