// towerlab CLI: count tower levels, turn counts into censuses, zeta data,
// class-number bounds and asymptotic profiles, and emit reproducible reports.
//
// Subcommands: count, census, zeta, bounds, asym, report.
// Exit codes: 0 success, 1 invalid configuration, 2 enumeration cap refusal.

#include <CLI11.hpp>
#include <json.hpp>

#include "towerlab/report.hpp"
#include "towerlab/tower_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace towerlab;
using nlohmann::ordered_json;

namespace {

struct Config {
  std::string spec = "T0";
  std::uint64_t q = 0;
  std::vector<std::string> level_args;
  std::string m_arg = "1..4";
  std::string cap_arg;
  std::string format = "csv";
  std::string out;
  unsigned digits = 50;
  unsigned threads = 0;
  std::string export_spec;
  // asym
  std::uint64_t asym_q = 0;
  unsigned asym_r = 1;
  std::string mu_arg;
};

Int resolve_cap(const std::string& cap_arg) {
  if (!cap_arg.empty()) return Int(cap_arg);
  if (const char* env = std::getenv("TOWERLAB_CAP")) return Int(std::string(env));
  return Int(1) << 26;
}

tower::TowerSpec resolve_spec(const Config& cfg) {
  if (std::filesystem::exists(cfg.spec) && !std::filesystem::is_directory(cfg.spec))
    return tower::load_spec_file(cfg.spec);
  return tower::builtin_spec(cfg.spec, cfg.q);
}

std::vector<tower::LevelId> parse_levels(const std::vector<std::string>& args) {
  if (args.empty()) throw std::invalid_argument("at least one --level k,s is required");
  std::vector<tower::LevelId> out;
  for (const auto& a : args) {
    unsigned k = 0, s = 0;
    char comma = 0;
    std::istringstream is(a);
    if (!(is >> k)) throw std::invalid_argument("bad level \"" + a + "\", expected k,s");
    if (is >> comma) {
      if (comma != ',' || !(is >> s) || is.rdbuf()->in_avail() != 0)
        throw std::invalid_argument("bad level \"" + a + "\", expected k,s");
    }
    out.push_back({k, s});
  }
  return out;
}

std::pair<unsigned, unsigned> parse_m_range(const std::string& arg) {
  const auto dots = arg.find("..");
  unsigned lo = 0, hi = 0;
  try {
    if (dots == std::string::npos) {
      lo = hi = static_cast<unsigned>(std::stoul(arg));
    } else {
      lo = static_cast<unsigned>(std::stoul(arg.substr(0, dots)));
      hi = static_cast<unsigned>(std::stoul(arg.substr(dots + 2)));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("bad --m \"" + arg + "\", expected N or A..B");
  }
  if (lo < 1 || hi < lo) throw std::invalid_argument("bad --m range \"" + arg + "\"");
  return {lo, hi};
}

std::vector<Real> parse_mu_list(const std::string& arg) {
  std::vector<Real> mus;
  std::string token;
  std::istringstream is(arg);
  while (std::getline(is, token, ',')) {
    if (token.empty()) continue;
    mus.emplace_back(token);
  }
  return mus;
}

std::string fmt_real(const Real& v, unsigned digits) { return v.str(digits); }

void write_output(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write output file: " + out);
  f << content;
}

report::Options report_options(const Config& cfg, unsigned m_max) {
  report::Options opt;
  opt.m_max = m_max;
  opt.count.cap = resolve_cap(cfg.cap_arg);
  opt.count.threads = cfg.threads;
  return opt;
}

// Validates the implied field sizes before any work starts.
void precheck_cap(const tower::TowerSpec& spec, unsigned m_max, const Int& cap) {
  const Int largest = int_pow(spec.p, spec.constant_field_degree * m_max);
  if (largest > cap)
    throw tower::cap_error(largest);
}

// ---- count ----------------------------------------------------------------

int cmd_count(const Config& cfg) {
  tower::TowerSpec spec = resolve_spec(cfg);
  if (!cfg.export_spec.empty()) {
    tower::save_spec_file(spec, cfg.export_spec);
    if (cfg.level_args.empty()) return 0;
  }
  const auto levels = parse_levels(cfg.level_args);
  const auto [mlo, mhi] = parse_m_range(cfg.m_arg);
  tower::CountOptions copt;
  copt.cap = resolve_cap(cfg.cap_arg);
  copt.threads = cfg.threads;
  precheck_cap(spec, mhi, copt.cap);

  std::vector<tower::PointCountRecord> rows;
  for (const auto lv : levels)
    for (unsigned m = mlo; m <= mhi; ++m) rows.push_back(tower::count_chains(spec, lv, m, copt));

  if (cfg.format == "json") {
    ordered_json j;
    j["command"] = "count";
    j["spec"] = tower::spec_to_json(spec);
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row;
      row["k"] = r.level.k;
      row["s"] = r.level.s;
      row["m"] = r.m;
      row["field_order"] = r.field_order.str();
      row["n_affine"] = r.n_affine.str();
      row["infinity_correction"] =
          r.infinity_correction ? ordered_json(r.infinity_correction->str()) : ordered_json(nullptr);
      row["n_total"] = r.n_total ? ordered_json(r.n_total->str()) : ordered_json(nullptr);
      j["rows"].push_back(std::move(row));
    }
    write_output(cfg.out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "spec,level_k,level_s,m,field_order,n_affine,infinity_correction,n_total\n";
    for (const auto& r : rows) {
      os << spec.name << ',' << r.level.k << ',' << r.level.s << ',' << r.m << ','
         << r.field_order.str() << ',' << r.n_affine.str() << ','
         << (r.infinity_correction ? r.infinity_correction->str() : "") << ','
         << (r.n_total ? r.n_total->str() : "") << "\n";
    }
    write_output(cfg.out, os.str());
  }
  return 0;
}

// ---- census -----------------------------------------------------------------

int cmd_census(const Config& cfg) {
  tower::TowerSpec spec = resolve_spec(cfg);
  const auto levels = parse_levels(cfg.level_args);
  const auto [mlo, mhi] = parse_m_range(cfg.m_arg);
  (void)mlo;
  const auto opt = report_options(cfg, mhi);
  precheck_cap(spec, mhi, opt.count.cap);

  struct Row {
    tower::LevelId lv;
    Int q;
    std::optional<unsigned> genus;
    unsigned m;
    Int N;
    std::optional<Int> B;
    census::Provenance prov;
  };
  std::vector<Row> rows;
  for (const auto lv : levels) {
    auto R = report::build_level_report(spec, lv, opt);
    for (const auto& rec : R.counts) {
      Row row;
      row.lv = lv;
      row.q = R.q0;
      row.genus = R.genus;
      row.m = rec.m;
      row.prov = R.cens.provenance.at(rec.m);
      row.N = rec.certified() ? *rec.n_total : rec.n_affine;
      if (R.cens.B.count(rec.m)) row.B = R.cens.B.at(rec.m);
      rows.push_back(std::move(row));
    }
  }

  if (cfg.format == "json") {
    ordered_json j;
    j["command"] = "census";
    j["spec"] = tower::spec_to_json(spec);
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row;
      row["k"] = r.lv.k;
      row["s"] = r.lv.s;
      row["q"] = r.q.str();
      row["genus"] = r.genus ? ordered_json(*r.genus) : ordered_json(nullptr);
      row["m"] = r.m;
      row["N"] = r.N.str();
      row["B"] = r.B ? ordered_json(r.B->str()) : ordered_json(nullptr);
      row["provenance"] = census::to_string(r.prov);
      j["rows"].push_back(std::move(row));
    }
    write_output(cfg.out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "spec,level_k,level_s,q,genus,m,N_m,B_m,provenance\n";
    for (const auto& r : rows) {
      os << spec.name << ',' << r.lv.k << ',' << r.lv.s << ',' << r.q.str() << ','
         << (r.genus ? std::to_string(*r.genus) : "") << ',' << r.m << ',' << r.N.str() << ','
         << (r.B ? r.B->str() : "") << ',' << census::to_string(r.prov) << "\n";
    }
    write_output(cfg.out, os.str());
  }
  return 0;
}

// ---- zeta -------------------------------------------------------------------

int cmd_zeta(const Config& cfg) {
  tower::TowerSpec spec = resolve_spec(cfg);
  const auto levels = parse_levels(cfg.level_args);
  const auto [mlo, mhi] = parse_m_range(cfg.m_arg);
  (void)mlo;
  const auto opt = report_options(cfg, mhi);
  precheck_cap(spec, mhi, opt.count.cap);

  std::vector<report::LevelReport> reps;
  for (const auto lv : levels) {
    auto R = report::build_level_report(spec, lv, opt);
    if (!R.certified)
      throw std::invalid_argument("level " + lv.str() +
                                  " has no certified totals; exact zeta data is refused");
    if (!R.genus)
      throw std::invalid_argument("level " + lv.str() + ": genus not identified from " +
                                  std::to_string(R.counts.size()) +
                                  " extension degrees; raise --m");
    reps.push_back(std::move(R));
  }

  if (cfg.format == "json") {
    ordered_json j;
    j["command"] = "zeta";
    j["spec"] = tower::spec_to_json(spec);
    j["levels"] = ordered_json::array();
    for (const auto& R : reps) {
      ordered_json row;
      row["k"] = R.level.k;
      row["s"] = R.level.s;
      row["q"] = R.q0.str();
      row["genus"] = *R.genus;
      row["L"] = ordered_json::array();
      for (const auto& c : R.lpoly->a) row["L"].push_back(c.str());
      row["h"] = R.h->str();
      row["A"] = ordered_json::array();
      for (const auto& a : R.A) row["A"].push_back(a.str());
      j["levels"].push_back(std::move(row));
    }
    write_output(cfg.out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "spec,level_k,level_s,statistic,value\n";
    for (const auto& R : reps) {
      auto emit = [&](const std::string& stat, const std::string& value) {
        os << spec.name << ',' << R.level.k << ',' << R.level.s << ',' << stat << ',' << value
           << "\n";
      };
      emit("q", R.q0.str());
      emit("genus", std::to_string(*R.genus));
      for (std::size_t i = 0; i < R.lpoly->a.size(); ++i)
        emit("L[" + std::to_string(i) + "]", R.lpoly->a[i].str());
      emit("h", R.h->str());
      for (std::size_t n = 0; n < R.A.size(); ++n)
        emit("A[" + std::to_string(n) + "]", R.A[n].str());
    }
    write_output(cfg.out, os.str());
  }
  return 0;
}

// ---- bounds -----------------------------------------------------------------

int cmd_bounds(const Config& cfg) {
  tower::TowerSpec spec = resolve_spec(cfg);
  const auto levels = parse_levels(cfg.level_args);
  const auto [mlo, mhi] = parse_m_range(cfg.m_arg);
  (void)mlo;
  const auto opt = report_options(cfg, mhi);
  precheck_cap(spec, mhi, opt.count.cap);

  std::vector<report::LevelReport> reps;
  for (const auto lv : levels) {
    auto R = report::build_level_report(spec, lv, opt);
    if (!R.bound)
      throw std::invalid_argument("level " + lv.str() +
                                  " has no bounds report (needs certified counts and genus >= 1)");
    reps.push_back(std::move(R));
  }

  auto l2_str = [&](const bounds::BoundsReport& b) {
    return b.L.L2.exact ? b.L.L2.exact_value.str() : fmt_real(b.L.L2.value, cfg.digits);
  };

  if (cfg.format == "json") {
    ordered_json j;
    j["command"] = "bounds";
    j["spec"] = tower::spec_to_json(spec);
    j["levels"] = ordered_json::array();
    for (const auto& R : reps) {
      const auto& b = *R.bound;
      ordered_json row;
      row["k"] = R.level.k;
      row["s"] = R.level.s;
      row["q"] = b.q.str();
      row["g"] = b.g;
      row["B1"] = b.B1.str();
      row["h"] = b.h.str();
      row["L1"] = b.L.L1.str();
      row["L2"] = l2_str(b);
      row["L2_exact"] = b.L.L2.exact;
      row["L3"] = b.L.L3 ? ordered_json(b.L.L3->str()) : ordered_json(nullptr);
      row["h_over_L1"] = b.h_over_L1 ? ordered_json(b.h_over_L1->str()) : ordered_json(nullptr);
      row["h_over_L2"] =
          b.h_over_L2 ? ordered_json(b.h_over_L2->str())
                      : (b.h_over_L2_real ? ordered_json(fmt_real(*b.h_over_L2_real, cfg.digits))
                                          : ordered_json(nullptr));
      row["h_over_L3"] = b.h_over_L3 ? ordered_json(b.h_over_L3->str()) : ordered_json(nullptr);
      row["h_gt_qg"] = b.h_gt_qg;
      row["hL2_ge_2"] = b.hL2_ge_2 ? ordered_json(*b.hL2_ge_2) : ordered_json(nullptr);
      j["levels"].push_back(std::move(row));
    }
    write_output(cfg.out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "spec,level_k,level_s,q,g,B1,h,L1,L2,L2_exact,L3,h_over_L1,h_over_L2,h_over_L3,h_gt_qg,"
          "hL2_ge_2\n";
    for (const auto& R : reps) {
      const auto& b = *R.bound;
      os << spec.name << ',' << R.level.k << ',' << R.level.s << ',' << b.q.str() << ',' << b.g
         << ',' << b.B1.str() << ',' << b.h.str() << ',' << b.L.L1.str() << ',' << l2_str(b) << ','
         << (b.L.L2.exact ? "true" : "false") << ',' << (b.L.L3 ? b.L.L3->str() : "") << ','
         << (b.h_over_L1 ? b.h_over_L1->str() : "") << ','
         << (b.h_over_L2 ? b.h_over_L2->str()
                         : (b.h_over_L2_real ? fmt_real(*b.h_over_L2_real, cfg.digits) : ""))
         << ',' << (b.h_over_L3 ? b.h_over_L3->str() : "") << ','
         << (b.h_gt_qg ? "true" : "false") << ','
         << (b.hL2_ge_2 ? (*b.hL2_ge_2 ? "true" : "false") : "") << "\n";
    }
    write_output(cfg.out, os.str());
  }
  return 0;
}

// ---- asym -------------------------------------------------------------------

int cmd_asym(const Config& cfg) {
  const Int q(cfg.asym_q);
  const unsigned r = cfg.asym_r;
  const auto profile = asym::make_profile(q, r);  // throws on non-square q^r
  const auto mus = parse_mu_list(cfg.mu_arg);

  if (cfg.format == "json") {
    ordered_json j;
    j["command"] = "asym";
    j["q"] = q.str();
    j["r"] = r;
    j["beta_r"] = profile.beta_r.str();
    j["H"] = fmt_real(profile.H, cfg.digits);
    j["mu0"] = profile.mu0.str();
    j["delta"] = ordered_json::array();
    for (const auto& mu : mus) {
      ordered_json row;
      row["mu"] = fmt_real(mu, cfg.digits);
      row["value"] = fmt_real(asym::delta(q, r, mu), cfg.digits);
      j["delta"].push_back(std::move(row));
    }
    write_output(cfg.out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "statistic,value\n";
    os << "q," << q.str() << "\n";
    os << "r," << r << "\n";
    os << "beta_r," << profile.beta_r.str() << "\n";
    os << "H," << fmt_real(profile.H, cfg.digits) << "\n";
    os << "mu0," << profile.mu0.str() << "\n";
    for (const auto& mu : mus)
      os << "delta(" << fmt_real(mu, cfg.digits) << ")," << fmt_real(asym::delta(q, r, mu), cfg.digits)
         << "\n";
    write_output(cfg.out, os.str());
  }
  return 0;
}

// ---- report -------------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> level_stats(const report::LevelReport& R,
                                                             unsigned digits) {
  std::vector<std::pair<std::string, std::string>> st;
  auto add = [&](const std::string& k, const std::string& v) { st.emplace_back(k, v); };
  add("constant_field_order", R.q0.str());
  add("certified", R.certified ? "true" : "false");
  if (R.genus_upper_bound) add("genus_upper_bound", R.genus_upper_bound->str());
  for (const auto& rec : R.counts) {
    const std::string m = std::to_string(rec.m);
    add("n_affine[m=" + m + "]", rec.n_affine.str());
    if (rec.n_total) add("n_total[m=" + m + "]", rec.n_total->str());
  }
  for (const auto& [m, v] : R.cens.N) add("N[" + std::to_string(m) + "]", v.str());
  for (const auto& [m, v] : R.cens.B) add("B[" + std::to_string(m) + "]", v.str());
  for (const auto& [m, p] : R.cens.provenance)
    add("provenance[" + std::to_string(m) + "]", census::to_string(p));
  if (R.genus) add("genus", std::to_string(*R.genus));
  if (R.lpoly)
    for (std::size_t i = 0; i < R.lpoly->a.size(); ++i)
      add("L[" + std::to_string(i) + "]", R.lpoly->a[i].str());
  if (R.h) add("h", R.h->str());
  for (std::size_t n = 0; n < R.A.size(); ++n) add("A[" + std::to_string(n) + "]", R.A[n].str());
  if (R.bound) {
    const auto& b = *R.bound;
    add("L1", b.L.L1.str());
    add("L2", b.L.L2.exact ? b.L.L2.exact_value.str() : fmt_real(b.L.L2.value, digits));
    add("L2_exact", b.L.L2.exact ? "true" : "false");
    if (b.L.L3) add("L3", b.L.L3->str());
    if (b.h_over_L1) add("h_over_L1", b.h_over_L1->str());
    if (b.h_over_L2)
      add("h_over_L2", b.h_over_L2->str());
    else if (b.h_over_L2_real)
      add("h_over_L2", fmt_real(*b.h_over_L2_real, digits));
    if (b.h_over_L3) add("h_over_L3", b.h_over_L3->str());
    add("h_gt_qg", b.h_gt_qg ? "true" : "false");
    if (b.hL2_ge_2) add("hL2_ge_2", *b.hL2_ge_2 ? "true" : "false");
  }
  if (R.mass_m) {
    add("mass_m", std::to_string(*R.mass_m));
    add("mass_affine", R.mass_affine->str());
    if (R.mass_total) add("mass_total", R.mass_total->str());
    add("mass_bound", R.mass_bound->str());
    add("mass_ok", *R.mass_ok ? "true" : "false");
  }
  if (R.estimate) {
    const auto& e = *R.estimate;
    for (const auto& [m, v] : e.beta_hat)
      add("beta_hat[" + std::to_string(m) + "]", v.str());
    if (e.H_hat) add("H_hat", fmt_real(*e.H_hat, digits));
    if (e.delta_hat) add("delta_hat", fmt_real(*e.delta_hat, digits));
    if (e.d_hat) add("d_hat", e.d_hat->str());
    if (e.diagnostic_sum)
      add("diagnostic_sum[s=" + std::to_string(e.diagnostic_cutoff) + "]",
          fmt_real(*e.diagnostic_sum, digits));
  }
  return st;
}

int cmd_report(const Config& cfg) {
  tower::TowerSpec spec = resolve_spec(cfg);
  const auto levels = parse_levels(cfg.level_args);
  const auto [mlo, mhi] = parse_m_range(cfg.m_arg);
  (void)mlo;
  auto opt = report_options(cfg, mhi);
  precheck_cap(spec, mhi, opt.count.cap);

  std::vector<report::LevelReport> reps;
  for (const auto lv : levels) reps.push_back(report::build_level_report(spec, lv, opt));
  report::link_genus_ratios(reps);

  // asymptotic profile of the family, at the (q0, r) with q0^r = q^2
  std::optional<asym::AsymptoticProfile> profile;
  if ((2 * spec.r) % spec.constant_field_degree == 0) {
    const unsigned rtype = 2 * spec.r / spec.constant_field_degree;
    const Rat density = (spec.densification + 1 == spec.r || spec.r == 1)
                            ? Rat(1, spec.p)
                            : Rat(1, spec.q);
    profile = asym::make_profile(int_pow(spec.p, spec.constant_field_degree), rtype, density);
  }

  if (cfg.format == "json") {
    ordered_json j;
    j["command"] = "report";
    j["spec"] = tower::spec_to_json(spec);
    if (profile) {
      ordered_json pj;
      pj["q"] = profile->q.str();
      pj["r"] = profile->r;
      pj["beta_r"] = profile->beta_r.str();
      pj["H"] = fmt_real(profile->H, cfg.digits);
      pj["mu0"] = profile->mu0.str();
      pj["density_target"] = profile->density_target->str();
      j["profile"] = std::move(pj);
    } else {
      j["profile"] = nullptr;
    }
    j["levels"] = ordered_json::array();
    for (const auto& R : reps) {
      ordered_json row;
      row["k"] = R.level.k;
      row["s"] = R.level.s;
      ordered_json stats;
      for (const auto& [k, v] : level_stats(R, cfg.digits)) stats[k] = v;
      row["stats"] = std::move(stats);
      j["levels"].push_back(std::move(row));
    }
    write_output(cfg.out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "spec,level_k,level_s,statistic,value\n";
    if (profile) {
      auto emit = [&](const std::string& stat, const std::string& value) {
        os << spec.name << ",,," << stat << ',' << value << "\n";
      };
      emit("profile_q", profile->q.str());
      emit("profile_r", std::to_string(profile->r));
      emit("profile_beta_r", profile->beta_r.str());
      emit("profile_H", fmt_real(profile->H, cfg.digits));
      emit("profile_mu0", profile->mu0.str());
      emit("profile_density_target", profile->density_target->str());
    }
    for (const auto& R : reps)
      for (const auto& [stat, value] : level_stats(R, cfg.digits))
        os << spec.name << ',' << R.level.k << ',' << R.level.s << ',' << stat << ',' << value
           << "\n";
    write_output(cfg.out, os.str());
  }
  return 0;
}

void add_common(CLI::App* sub, Config& cfg, bool with_levels = true) {
  sub->add_option("--spec", cfg.spec, "builtin tower name (T0, T1, T2, T3) or spec file path");
  sub->add_option("--q", cfg.q, "tower parameter q (prime power) for builtin specs");
  if (with_levels) sub->add_option("--level", cfg.level_args, "tower level k,s (repeatable)");
  sub->add_option("--m", cfg.m_arg, "extension degree or range A..B (default 1..4)");
  sub->add_option("--cap", cfg.cap_arg, "enumeration cap on field order (default 2^26)");
  sub->add_option("--format", cfg.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", cfg.out, "output file (default stdout)");
  sub->add_option("--digits", cfg.digits, "significant digits for real-valued columns");
  sub->add_option("--threads", cfg.threads, "worker threads for enumeration (0 = auto)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"towerlab: exact censuses, zeta data, class-number bounds and asymptotic "
               "profiles for recursive Artin-Schreier towers over small finite fields"};
  app.require_subcommand(1);
  Config cfg;

  auto* c_count = app.add_subcommand("count", "exact point counts per level and degree");
  add_common(c_count, cfg);
  c_count->add_option("--export-spec", cfg.export_spec, "write the resolved spec as JSON");

  auto* c_census = app.add_subcommand("census", "place censuses B_m via Moebius inversion");
  add_common(c_census, cfg);

  auto* c_zeta = app.add_subcommand("zeta", "L-polynomial, class number and A-series");
  add_common(c_zeta, cfg);

  auto* c_bounds = app.add_subcommand("bounds", "Lachaud - Martin-Deschamps bound reports");
  add_common(c_bounds, cfg);

  auto* c_asym = app.add_subcommand("asym", "asymptotic profile and Delta(mu) evaluations");
  c_asym->add_option("--q", cfg.asym_q, "ground field order")->required();
  c_asym->add_option("--r", cfg.asym_r, "type degree r (q^r must be a square)")->required();
  c_asym->add_option("--mu", cfg.mu_arg, "comma-separated mu grid for Delta");
  c_asym->add_option("--format", cfg.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  c_asym->add_option("--out", cfg.out, "output file (default stdout)");
  c_asym->add_option("--digits", cfg.digits, "significant digits for real-valued columns");

  auto* c_report = app.add_subcommand("report", "full pipeline report per level");
  add_common(c_report, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_count->parsed()) return cmd_count(cfg);
    if (c_census->parsed()) return cmd_census(cfg);
    if (c_zeta->parsed()) return cmd_zeta(cfg);
    if (c_bounds->parsed()) return cmd_bounds(cfg);
    if (c_asym->parsed()) return cmd_asym(cfg);
    if (c_report->parsed()) return cmd_report(cfg);
  } catch (const tower::cap_error& e) {
    if (cfg.format == "json") {
      ordered_json j;
      j["error"] = {{"type", "cap"},
                    {"message", e.what()},
                    {"required_order", e.required_order.str()}};
      std::cout << j.dump(2) << "\n";
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    if (cfg.format == "json") {
      ordered_json j;
      j["error"] = {{"type", "invalid"}, {"message", e.what()}};
      std::cout << j.dump(2) << "\n";
    }
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
