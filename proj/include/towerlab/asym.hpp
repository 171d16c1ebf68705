// Closed-form evaluators for the asymptotic invariants of one-hot type
// families (type vector, H, mu0, Delta(mu), density targets) and the
// finite-level estimators that converge to them.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "towerlab/census.hpp"
#include "towerlab/numeric.hpp"

namespace towerlab::asym {

inline bool qr_is_square(const Int& q, unsigned r) {
  const Int v = int_pow(q, r);
  const Int s = boost::multiprecision::sqrt(v);
  return s * s == v;
}

// Exact q^{r/2}; the Drinfeld-Vladut constraint makes q^r a square for every
// family of this type, so this either returns an integer or refuses.
inline Int half_power(const Int& q, unsigned r) {
  if (r == 0) throw std::invalid_argument("r must be >= 1");
  if (!qr_is_square(q, r))
    throw std::domain_error("q^r must be a perfect square (Drinfeld-Vladut constraint)");
  return boost::multiprecision::sqrt(int_pow(q, r));
}

// beta_r = (q^{r/2} - 1)/r; all other entries of the type vector vanish.
inline Rat beta_value(const Int& q, unsigned r) { return Rat(half_power(q, r) - 1, r); }

inline Rat mu0(const Int& q, unsigned r) {
  return Rat(half_power(q, r) - 1, int_pow(q, r) - 1);  // equals 1/(q^{r/2}+1)
}

// H = log( q^{q^{r/2}} / (q^r-1)^{(q^{r/2}-1)/r} ), evaluated literally.
inline Real h_limit_closed(const Int& q, unsigned r) {
  const Int A = half_power(q, r);
  const Real num = boost::multiprecision::pow(to_real(q), to_real(Int(A)));
  const Real den =
      boost::multiprecision::pow(to_real(Int(int_pow(q, r) - 1)), to_real(Rat(A - 1, r)));
  return boost::multiprecision::log(num / den);
}

// Series route: H = log q + beta_r log(q^r / (q^r - 1)) for the one-hot type.
inline Real h_limit_series(const Int& q, unsigned r) {
  const Int qr = int_pow(q, r);
  return boost::multiprecision::log(to_real(q)) +
         to_real(beta_value(q, r)) *
             (boost::multiprecision::log(to_real(qr)) -
              boost::multiprecision::log(to_real(Int(qr - 1))));
}

inline Real h_limit(const Int& q, unsigned r) {
  const Real a = h_limit_closed(q, r);
  const Real b = h_limit_series(q, r);
  if (boost::multiprecision::abs(a - b) > Real("1e-12"))
    throw std::logic_error("H evaluation routes disagree beyond tolerance");
  return a;
}

// Delta(mu) for mu >= mu0: H - (1 - mu) log q.
inline Real delta_upper_branch(const Int& q, unsigned r, const Real& mu) {
  return h_limit_closed(q, r) - (1 - mu) * boost::multiprecision::log(to_real(q));
}

// Delta(mu) for 0 < mu <= mu0, the logarithm of the limit of A_{mu g}^{1/g}:
// ((mu+a) log(mu+a) - mu log mu - a log a) / r with a = q^{r/2} - 1.
inline Real delta_product_form(const Int& q, unsigned r, const Real& mu) {
  using boost::multiprecision::log;
  const Real a = to_real(Int(half_power(q, r) - 1));
  return ((mu + a) * log(mu + a) - mu * log(mu) - a * log(a)) / r;
}

inline Real delta(const Int& q, unsigned r, const Real& mu) {
  if (mu <= 0) throw std::domain_error("Delta(mu) requires mu > 0");
  const Real m0 = to_real(mu0(q, r));
  return mu >= m0 ? delta_upper_branch(q, r, mu) : delta_product_form(q, r, mu);
}

// One-hot type vector (beta_1, ..., beta_M).
inline std::vector<Rat> type_vector(const Int& q, unsigned r, unsigned M) {
  std::vector<Rat> beta(M, Rat(0));
  const Rat b = beta_value(q, r);
  if (r >= 1 && r <= M) beta[r - 1] = b;
  return beta;
}

// Constant-field extension by i | r maps the type one-hot at r to one-hot at
// r/i with value i (q^{r/2} - 1) / r.
inline std::pair<unsigned, Rat> extend_type(const Int& q, unsigned r, unsigned i) {
  if (i < 1 || r % i != 0) throw std::invalid_argument("extension exponent must divide r");
  return {r / i, Rat(Int(i) * (half_power(q, r) - 1), r)};
}

struct AsymptoticProfile {
  Int q = 0;
  unsigned r = 1;
  Int q_r_half = 0;
  Rat beta_r = 0;
  Real H = 0;
  Rat mu0 = 0;
  std::optional<Rat> density_target;
};

inline AsymptoticProfile make_profile(const Int& q, unsigned r,
                                      std::optional<Rat> density_target = {}) {
  AsymptoticProfile p;
  p.q = q;
  p.r = r;
  p.q_r_half = half_power(q, r);
  p.beta_r = beta_value(q, r);
  p.H = h_limit(q, r);
  p.mu0 = mu0(q, r);
  p.density_target = std::move(density_target);
  // H > log q strictly; this is exactly why h_k > q^{g_k} holds eventually
  if (!(p.H > boost::multiprecision::log(to_real(q))))
    throw std::logic_error("H <= log q; profile construction is inconsistent");
  return p;
}

// Finite-level estimators: beta-hat = B_m/g, H-hat = log(h)/g,
// Delta-hat = log(A_{round(mu g)})/g, d-hat = g/g_next, and the diagnostic sum
// (1/g) sum_{m<=s} m B_m / (q^{m/2} - 1). The sum may exceed 1 at small genus;
// it is reported, never asserted.
struct FiniteLevelEstimate {
  unsigned genus = 0;
  std::map<unsigned, Rat> beta_hat;
  std::optional<Real> H_hat;
  std::optional<unsigned> delta_index;
  std::optional<Real> delta_hat;
  std::optional<Rat> d_hat;
  std::optional<Real> diagnostic_sum;
  unsigned diagnostic_cutoff = 0;
};

inline FiniteLevelEstimate finite_estimates(const census::LevelCensus& c,
                                            const std::optional<Int>& h,
                                            const std::vector<Int>* A,
                                            const std::optional<Real>& mu,
                                            std::optional<unsigned> next_genus,
                                            std::optional<unsigned> s_cutoff = {}) {
  if (!c.genus || *c.genus == 0)
    throw std::domain_error("finite-level estimates are undefined at genus 0");
  const unsigned g = *c.genus;
  FiniteLevelEstimate est;
  est.genus = g;
  for (const auto& [m, Bm] : c.B) est.beta_hat[m] = Rat(Bm, g);
  if (h) est.H_hat = boost::multiprecision::log(to_real(*h)) / g;
  if (A && mu) {
    // index is the nearest integer to mu*g, round-half-up
    const Real t = *mu * g + Real(1) / 2;
    const unsigned idx = static_cast<unsigned>(boost::multiprecision::floor(t).convert_to<long>());
    if (idx < A->size() && (*A)[idx] > 0) {
      est.delta_index = idx;
      est.delta_hat = boost::multiprecision::log(to_real((*A)[idx])) / g;
    }
  }
  if (next_genus && *next_genus > 0) est.d_hat = Rat(g, *next_genus);
  if (!c.B.empty()) {
    const unsigned s = s_cutoff.value_or(c.B.rbegin()->first);
    Real sum = 0;
    for (const auto& [m, Bm] : c.B) {
      if (m > s) continue;
      const Real qm2 = boost::multiprecision::pow(to_real(c.q), Real(m) / 2);
      sum += Real(m) * to_real(Bm) / (qm2 - 1);
    }
    est.diagnostic_sum = sum / g;
    est.diagnostic_cutoff = s;
  }
  return est;
}

}  // namespace towerlab::asym
