// Declarative recursive Artin-Schreier tower specifications (the T0/T1/T2/T3
// family) and exact enumeration of solution chains over constant-field
// extensions, yielding the point counts N_m per tower level.
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <future>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "towerlab/gf.hpp"
#include "towerlab/numeric.hpp"

namespace towerlab::tower {

// One generator step: adjoin z with z^Q + z = x^E, where x is the current
// ratio variable. ratio_rule says whether a new ratio x' = z / x is introduced
// after the step (true for main tower steps, false for sublevel steps).
struct StepDef {
  std::uint64_t Q = 2;
  unsigned rhs_exp = 3;
  bool ratio_rule = true;

  friend bool operator==(const StepDef& a, const StepDef& b) {
    return a.Q == b.Q && a.rhs_exp == b.rhs_exp && a.ratio_rule == b.ratio_rule;
  }
};

// A tower: characteristic p, parameter q = p^r, constant field F_{p^c},
// the repeated main step (steps[0]) and optional sublevel steps (steps[1..]).
struct TowerSpec {
  std::string name;
  std::uint32_t p = 2;
  std::uint64_t q = 2;
  unsigned r = 1;  // q = p^r
  unsigned constant_field_degree = 1;
  std::vector<StepDef> steps;
  unsigned densification = 0;  // sublevels between consecutive main levels
};

// Position (k, s) in a tower: k-th main level, s-th sublevel above it.
// (k, 0) is a main step; ordering is lexicographic and matches inclusion.
struct LevelId {
  unsigned k = 1;
  unsigned s = 0;

  friend bool operator==(const LevelId& a, const LevelId& b) { return a.k == b.k && a.s == b.s; }
  friend bool operator<(const LevelId& a, const LevelId& b) {
    return a.k != b.k ? a.k < b.k : a.s < b.s;
  }
  std::string str() const { return std::to_string(k) + "," + std::to_string(s); }
};

struct PointCountRecord {
  LevelId level;
  unsigned m = 1;  // constant-field extension degree counted over
  Int field_order = 0;
  Int n_affine = 0;
  std::optional<Int> infinity_correction;  // present only when certified
  std::optional<Int> n_total;              // n_affine + correction when certified

  bool certified() const { return n_total.has_value(); }
};

// Raised when a requested enumeration would need a field beyond the cap.
struct cap_error : std::runtime_error {
  Int required_order;
  explicit cap_error(Int required)
      : std::runtime_error("enumeration cap exceeded: requires a field of order " + required.str()),
        required_order(std::move(required)) {}
};

struct CountOptions {
  Int cap = Int(1) << 26;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Hard ceiling on enumeration-based operations, independent of the
// configurable cap: fields beyond 2^40 elements are refused outright.
inline const Int& enumeration_ceiling() {
  static const Int ceiling = Int(1) << 40;
  return ceiling;
}

inline unsigned power_of_p_exponent(std::uint64_t Q, std::uint32_t p) {
  unsigned e = 0;
  std::uint64_t v = Q;
  while (v > 1) {
    if (v % p != 0)
      throw std::invalid_argument("step exponent " + std::to_string(Q) + " is not a power of " +
                                  std::to_string(p));
    v /= p;
    ++e;
  }
  if (e == 0) throw std::invalid_argument("step exponent must be a positive power of p");
  return e;
}

inline void validate_spec(const TowerSpec& s) {
  if (!is_prime_u64(s.p)) throw std::invalid_argument("tower characteristic must be prime");
  auto [p, r] = prime_power_decompose(s.q);
  if (p != s.p || r != s.r) throw std::invalid_argument("tower q must equal p^r");
  if (s.constant_field_degree < 1) throw std::invalid_argument("constant field degree must be >= 1");
  if (s.steps.empty()) throw std::invalid_argument("tower needs at least the main step");
  if (s.densification + 1 != s.steps.size())
    throw std::invalid_argument("densification must match the number of sublevel step definitions");
  if (s.densification > 1)
    throw std::invalid_argument("only densification <= 1 has explicit sublevel equations");
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    power_of_p_exponent(s.steps[i].Q, s.p);
    if (s.steps[i].rhs_exp < 1) throw std::invalid_argument("step right-hand exponent must be >= 1");
    if (i == 0 && !s.steps[i].ratio_rule)
      throw std::invalid_argument("the main step must introduce the ratio variable");
    if (i > 0 && s.steps[i].ratio_rule)
      throw std::invalid_argument("sublevel steps do not introduce ratio variables");
  }
}

inline void validate_level(const TowerSpec& spec, LevelId lv) {
  if (lv.k < 1) throw std::invalid_argument("level index k must be >= 1");
  if (lv.s > spec.densification)
    throw std::invalid_argument("sublevel " + std::to_string(lv.s) + " exceeds densification " +
                                std::to_string(spec.densification));
}

// ---- builtin towers -------------------------------------------------------

// Garcia-Stichtenoth tower over F_{q^2}: z^q + z = x^{q+1}, x' = z/x.
inline TowerSpec make_T0(std::uint64_t q) {
  auto [p, r] = prime_power_decompose(q);
  TowerSpec s;
  s.name = "T0";
  s.p = p;
  s.q = q;
  s.r = r;
  s.constant_field_degree = 2 * r;
  s.steps = {StepDef{q, static_cast<unsigned>(q + 1), true}};
  s.densification = 0;
  validate_spec(s);
  return s;
}

// Densified tower over F_{q^2}. For prime q there are no intermediate steps;
// for q = 4 the sublevel adjoins t with t^2 + t = x^5. Other composite q have
// no explicit sublevel equations and are refused.
inline TowerSpec make_T1(std::uint64_t q) {
  TowerSpec s = make_T0(q);
  s.name = "T1";
  if (s.r >= 2) {
    if (!(s.p == 2 && q == 4))
      throw std::invalid_argument("densified sublevels are only instantiated for p=2, q=4");
    s.densification = 1;
    s.steps.push_back(StepDef{2, 5, false});
  }
  validate_spec(s);
  return s;
}

// Descent of T1 to the constant field F_q; step equations are unchanged.
inline TowerSpec make_T2(std::uint64_t q) {
  TowerSpec s = make_T1(q);
  s.name = "T2";
  s.constant_field_degree = s.r;
  validate_spec(s);
  return s;
}

// Descent to F_p; only the p=2, q=4 instance exists. Main steps adjoin z with
// z^4 + z = x^5, sublevels adjoin t with t^2 + t = x^5.
inline TowerSpec make_T3() {
  TowerSpec s = make_T2(4);
  s.name = "T3";
  s.constant_field_degree = 1;
  validate_spec(s);
  return s;
}

inline TowerSpec builtin_spec(const std::string& name, std::uint64_t q = 0) {
  auto need_q = [&]() {
    if (q < 2) throw std::invalid_argument("builtin tower " + name + " needs a prime power q >= 2");
    return q;
  };
  if (name == "T0") return make_T0(need_q());
  if (name == "T1") return make_T1(need_q());
  if (name == "T2") return make_T2(need_q());
  if (name == "T3") {
    if (q != 0 && q != 4)
      throw std::invalid_argument("unsupported (p, q) combination for T3: defined for p=2, q=4 only");
    return make_T3();
  }
  throw std::invalid_argument("unknown builtin tower: " + name);
}

// ---- counting -------------------------------------------------------------

namespace detail {

struct PlanStep {
  unsigned e;        // Q = p^e
  unsigned rhs_exp;  // E in x^E
};

// Equations solved at level (k, s): k-1 main steps, then the sublevel step.
inline std::vector<PlanStep> build_plan(const TowerSpec& spec, LevelId lv) {
  std::vector<PlanStep> plan;
  const StepDef& main = spec.steps.front();
  const unsigned e_main = power_of_p_exponent(main.Q, spec.p);
  for (unsigned i = 1; i < lv.k; ++i) plan.push_back({e_main, main.rhs_exp});
  if (lv.s >= 1) {
    const StepDef& sub = spec.steps.at(lv.s);
    plan.push_back({power_of_p_exponent(sub.Q, spec.p), sub.rhs_exp});
  }
  return plan;
}

// Carry-less GF(2^n) arithmetic on packed bit vectors; n <= 62.
struct Gf2Packed {
  unsigned n;
  std::uint64_t mod;

  explicit Gf2Packed(const gf::Field& F) : n(F.degree()), mod(0) {
    for (unsigned i = 0; i <= n; ++i)
      if (F.modulus()[i]) mod |= (1ull << i);
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t r = 0;
    while (b) {
      if (b & 1) r ^= a;
      b >>= 1;
      a <<= 1;
      if (a & (1ull << n)) a ^= mod;
    }
    return r;
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
};

// Echelonized xor-basis of a GF(2)-subspace of bit vectors.
struct XorBasis {
  std::array<std::uint64_t, 64> row{};
  unsigned rank = 0;

  void insert(std::uint64_t v) {
    while (v) {
      const unsigned b = 63u - static_cast<unsigned>(std::countl_zero(v));
      if (!row[b]) {
        row[b] = v;
        ++rank;
        return;
      }
      v ^= row[b];
    }
  }
  bool contains(std::uint64_t v) const {
    while (v) {
      const unsigned b = 63u - static_cast<unsigned>(std::countl_zero(v));
      if (!row[b]) return false;
      v ^= row[b];
    }
    return true;
  }
};

inline std::uint64_t packed_generator(const Gf2Packed& K) {
  const std::uint64_t ord = (1ull << K.n) - 1;
  if (ord == 1) return 1;
  const auto primes = distinct_prime_factors(ord);
  for (std::uint64_t cand = 2; cand <= ord; ++cand) {
    bool ok = true;
    for (std::uint64_t ell : primes)
      if (K.pow(cand, ord / ell) == 1) {
        ok = false;
        break;
      }
    if (ok) return cand;
  }
  throw std::logic_error("no multiplicative generator found");
}

inline unsigned effective_threads(unsigned requested) {
  if (requested) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// #{(x, z) : z^{p^e} + z = x^E} for a single equation over the whole field.
// The solution count above a solvable x equals the kernel size, so this walks
// x^E through the multiplicative group and tests membership in the image of
// the additive map.
inline Int count_single_step(const gf::FieldPtr& F, unsigned e, unsigned E, unsigned threads) {
  if (F->characteristic() == 2 && F->degree() <= 62) {
    const Gf2Packed K(*F);
    XorBasis image;
    for (unsigned j = 0; j < K.n; ++j) {
      const std::uint64_t v = 1ull << j;
      image.insert(K.pow(v, 1ull << e) ^ v);
    }
    const std::uint64_t kappa = 1ull << (K.n - image.rank);
    const std::uint64_t ord = (1ull << K.n) - 1;
    const std::uint64_t g = packed_generator(K);
    const std::uint64_t gE = K.pow(g, E);

    auto run = [&](std::uint64_t lo, std::uint64_t hi) {
      const std::uint64_t start = static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(E) * lo) % ord);
      std::uint64_t y = K.pow(g, start);
      std::uint64_t cnt = 0;
      for (std::uint64_t j = lo; j < hi; ++j) {
        if (image.contains(y)) ++cnt;
        y = K.mul(y, gE);
      }
      return cnt;
    };

    std::uint64_t solvable_x = 1;  // x = 0: rhs 0 is always in the image
    const unsigned T = effective_threads(threads);
    if (ord >= (1u << 18) && T > 1) {
      std::vector<std::future<std::uint64_t>> futs;
      const std::uint64_t block = (ord + T - 1) / T;
      for (unsigned t = 0; t < T; ++t) {
        const std::uint64_t lo = t * block, hi = std::min<std::uint64_t>(ord, lo + block);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, run, lo, hi));
      }
      for (auto& f : futs) solvable_x += f.get();
    } else {
      solvable_x += run(0, ord);
    }
    return Int(kappa) * Int(solvable_x);
  }

  // generic path: fields here are small, iterate directly
  const gf::AdditiveSolver S(F, e);
  Int solvable_x = 0;
  for (Int i = 0; i < F->order(); ++i) {
    if (S.solvable(F->from_index(i).pow(E))) ++solvable_x;
  }
  return Int(S.kernel_size()) * solvable_x;
}

// Depth-first chain extension for multi-step levels.
struct ChainDfs {
  const std::vector<PlanStep>& plan;
  const std::map<unsigned, gf::AdditiveSolver>& solvers;

  Int run(std::size_t i, const gf::Element& x) const {
    const PlanStep& st = plan[i];
    const bool last = (i + 1 == plan.size());
    if (!last && x.is_zero()) return 0;  // the next ratio z/x would divide by zero
    auto sols = solvers.at(st.e).solve(x.pow(st.rhs_exp));
    if (last) return Int(sols.size());
    Int acc = 0;
    const gf::Element xinv = x.inv();
    for (const auto& z : sols) acc += run(i + 1, z * xinv);
    return acc;
  }
};

inline Int count_chains_dfs(const gf::FieldPtr& F, const std::vector<PlanStep>& plan,
                            unsigned threads) {
  std::map<unsigned, gf::AdditiveSolver> solvers;
  for (const auto& st : plan)
    if (!solvers.count(st.e)) solvers.emplace(st.e, gf::AdditiveSolver(F, st.e));
  const ChainDfs dfs{plan, solvers};

  auto run_range = [&](Int lo, Int hi) {
    Int acc = 0;
    for (Int i = lo; i < hi; ++i) acc += dfs.run(0, F->from_index(i));
    return acc;
  };

  const unsigned T = effective_threads(threads);
  if (F->order() >= 4096 && T > 1) {
    std::vector<std::future<Int>> futs;
    const Int block = (F->order() + T - 1) / T;
    for (unsigned t = 0; t < T; ++t) {
      const Int lo = block * t;
      const Int hi = std::min(F->order(), Int(lo + block));
      if (lo >= hi) break;
      futs.push_back(std::async(std::launch::async, run_range, lo, hi));
    }
    Int acc = 0;
    for (auto& f : futs) acc += f.get();
    return acc;
  }
  return run_range(0, F->order());
}

}  // namespace detail

// Counts solution chains of `spec` at `level` over the given field, which must
// be the degree-m constant-field extension. The infinity correction is
// certified only for the rational level and for single-step levels whose
// right-hand degree is coprime to Q (one totally ramified place at infinity).
inline PointCountRecord count_chains_in_field(const TowerSpec& spec, LevelId lv, unsigned m,
                                              const gf::FieldPtr& F,
                                              const CountOptions& opt = {}) {
  validate_spec(spec);
  validate_level(spec, lv);
  if (m < 1) throw std::invalid_argument("extension degree m must be >= 1");
  if (!F || F->characteristic() != spec.p ||
      F->degree() != spec.constant_field_degree * m)
    throw std::invalid_argument("field does not match the level's constant-field extension");
  if (F->order() > opt.cap || F->order() > enumeration_ceiling()) throw cap_error(F->order());

  const auto plan = detail::build_plan(spec, lv);
  PointCountRecord rec;
  rec.level = lv;
  rec.m = m;
  rec.field_order = F->order();

  if (plan.empty()) {
    rec.n_affine = F->order();
  } else if (plan.size() == 1) {
    rec.n_affine = detail::count_single_step(F, plan[0].e, plan[0].rhs_exp, opt.threads);
  } else {
    rec.n_affine = detail::count_chains_dfs(F, plan, opt.threads);
  }

  const bool certified =
      plan.empty() || (plan.size() == 1 && plan[0].rhs_exp % spec.p != 0);
  if (certified) {
    rec.infinity_correction = 1;
    rec.n_total = rec.n_affine + 1;
  }
  return rec;
}

inline PointCountRecord count_chains(const TowerSpec& spec, LevelId lv, unsigned m,
                                     const CountOptions& opt = {}) {
  validate_spec(spec);
  validate_level(spec, lv);
  if (m < 1) throw std::invalid_argument("extension degree m must be >= 1");
  const unsigned deg = spec.constant_field_degree * m;
  const Int order = int_pow(spec.p, deg);
  if (order > opt.cap || order > enumeration_ceiling()) throw cap_error(order);
  if (deg > gf::Field::kMaxDegree) throw cap_error(order);
  return count_chains_in_field(spec, lv, m, gf::Field::make(spec.p, deg), opt);
}

// Lower bound (q^2 - 1) q^{k-1} p^s on the degree-one mass of the level's
// census over F_{q^2}.
inline Int census_lower_bound(const TowerSpec& spec, LevelId lv) {
  validate_spec(spec);
  validate_level(spec, lv);
  return (Int(spec.q) * spec.q - 1) * int_pow(spec.q, lv.k - 1) * int_pow(spec.p, lv.s);
}

// Genus upper bound (q^{k+1} + q^k) / p^{r-s} + 1.
inline Rat genus_bound(const TowerSpec& spec, LevelId lv) {
  validate_spec(spec);
  validate_level(spec, lv);
  if (lv.s > spec.r) throw std::invalid_argument("sublevel exceeds r");
  return Rat(int_pow(spec.q, lv.k + 1) + int_pow(spec.q, lv.k), int_pow(spec.p, spec.r - lv.s)) + 1;
}

}  // namespace towerlab::tower
