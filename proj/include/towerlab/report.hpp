// Pipeline driver: per-level reports combining counts, censuses, zeta data,
// class-number bounds, the census-mass inequality, and finite-level
// estimators. The CLI and the acceptance suite both build on this.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "towerlab/asym.hpp"
#include "towerlab/bounds.hpp"
#include "towerlab/census.hpp"
#include "towerlab/tower.hpp"
#include "towerlab/zeta.hpp"

namespace towerlab::report {

struct Options {
  unsigned m_max = 4;
  tower::CountOptions count;
  unsigned a_extra = 10;   // A-series computed through 2g + a_extra
  std::optional<Real> mu;  // requests a delta-hat column
};

struct LevelReport {
  std::string spec_name;
  tower::LevelId level;
  Int q0 = 0;  // constant field order
  std::vector<tower::PointCountRecord> counts;
  bool cap_hit = false;
  Int cap_required = 0;
  bool certified = false;
  census::LevelCensus cens;
  std::optional<unsigned> genus;
  std::optional<zeta::LPolynomial> lpoly;
  std::optional<Int> h;
  std::vector<Int> A;
  std::optional<bounds::BoundsReport> bound;
  std::optional<Rat> genus_upper_bound;
  // census-mass inequality at the extension degree realizing F_{q^2}
  std::optional<unsigned> mass_m;
  std::optional<Int> mass_affine;
  std::optional<Int> mass_total;
  std::optional<Int> mass_bound;
  std::optional<bool> mass_ok;
  std::optional<asym::FiniteLevelEstimate> estimate;
};

inline LevelReport build_level_report(const tower::TowerSpec& spec, tower::LevelId lv,
                                      const Options& opt = {}) {
  tower::validate_spec(spec);
  tower::validate_level(spec, lv);
  LevelReport R;
  R.spec_name = spec.name;
  R.level = lv;
  R.q0 = int_pow(spec.p, spec.constant_field_degree);
  R.genus_upper_bound = tower::genus_bound(spec, lv);

  for (unsigned m = 1; m <= opt.m_max; ++m) {
    try {
      R.counts.push_back(tower::count_chains(spec, lv, m, opt.count));
    } catch (const tower::cap_error& e) {
      R.cap_hit = true;
      R.cap_required = e.required_order;
      break;
    }
  }
  if (R.counts.empty()) throw tower::cap_error(R.cap_required);

  R.certified = true;
  for (const auto& rec : R.counts) R.certified = R.certified && rec.certified();

  R.cens.q = R.q0;
  for (const auto& rec : R.counts)
    R.cens.provenance[rec.m] =
        rec.certified() ? census::Provenance::exact : census::Provenance::lower_bound;

  if (R.certified) {
    std::vector<Int> Nv;
    for (const auto& rec : R.counts) {
      R.cens.N[rec.m] = *rec.n_total;
      Nv.push_back(*rec.n_total);
    }
    R.cens.B = census::places_from_counts(R.cens.N, static_cast<unsigned>(Nv.size()));
    try {
      R.genus = zeta::infer_genus(Nv, R.q0);
    } catch (const std::exception&) {
      R.genus.reset();  // not enough extension degrees; censuses stay valid
    }
    if (R.genus) {
      R.cens.genus = R.genus;
      const unsigned g = *R.genus;
      R.lpoly = zeta::lpoly_from_counts(std::vector<Int>(Nv.begin(), Nv.begin() + 2 * g), R.q0, g);
      zeta::validate(*R.lpoly);
      R.h = zeta::class_number(*R.lpoly);
      R.A = zeta::effective_divisors(*R.lpoly, 2 * g + opt.a_extra);
      if (g >= 1) {
        R.bound = bounds::make_report(R.q0, g, R.cens.B.at(1), *R.h);
        R.estimate = asym::finite_estimates(R.cens, R.h, &R.A, opt.mu, std::nullopt);
      }
    }
  }

  // Census-mass inequality: the degree-one mass of the census over
  // F_{q^2}, i.e. the point count at extension degree 2r/c, is at least
  // (q^2-1) q^{k-1} p^s. The affine count alone already suffices.
  if ((2 * spec.r) % spec.constant_field_degree == 0) {
    const unsigned mstar = 2 * spec.r / spec.constant_field_degree;
    std::optional<tower::PointCountRecord> rec;
    if (mstar >= 1 && mstar <= R.counts.size()) {
      rec = R.counts[mstar - 1];
    } else {
      try {
        rec = tower::count_chains(spec, lv, mstar, opt.count);
      } catch (const tower::cap_error&) {
      }
    }
    if (rec) {
      R.mass_m = mstar;
      R.mass_affine = rec->n_affine;
      R.mass_total = rec->n_total;
      R.mass_bound = tower::census_lower_bound(spec, lv);
      R.mass_ok = (rec->n_affine >= *R.mass_bound);
    }
  }
  return R;
}

// Genus-ratio estimator d-hat = g_i / g_{i+1} across consecutive rows with
// exact genus, in the order given.
inline void link_genus_ratios(std::vector<LevelReport>& rows) {
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (!rows[i].genus || !rows[i + 1].genus) continue;
    if (*rows[i].genus == 0 || *rows[i + 1].genus == 0) continue;
    if (!rows[i].estimate) continue;
    rows[i].estimate->d_hat = Rat(*rows[i].genus, *rows[i + 1].genus);
  }
}

}  // namespace towerlab::report
