// JSON serialization of tower specifications. The file format is
// {name, p, q, constant_field_degree, steps: [{Q, rhs, ratio_rule}],
//  densification} with rhs written as "x^E".
#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "towerlab/tower.hpp"

namespace towerlab::tower {

inline nlohmann::ordered_json spec_to_json(const TowerSpec& spec) {
  validate_spec(spec);
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["p"] = spec.p;
  j["q"] = spec.q;
  j["constant_field_degree"] = spec.constant_field_degree;
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& st : spec.steps) {
    nlohmann::ordered_json s;
    s["Q"] = st.Q;
    s["rhs"] = "x^" + std::to_string(st.rhs_exp);
    s["ratio_rule"] = st.ratio_rule;
    j["steps"].push_back(std::move(s));
  }
  j["densification"] = spec.densification;
  return j;
}

inline unsigned parse_rhs_exponent(const std::string& rhs) {
  if (rhs.size() < 3 || rhs[0] != 'x' || rhs[1] != '^')
    throw std::invalid_argument("step rhs must have the form \"x^E\", got \"" + rhs + "\"");
  const unsigned long e = std::stoul(rhs.substr(2));
  if (e < 1) throw std::invalid_argument("step rhs exponent must be >= 1");
  return static_cast<unsigned>(e);
}

inline TowerSpec spec_from_json(const nlohmann::json& j) {
  TowerSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.p = j.at("p").get<std::uint32_t>();
  spec.q = j.at("q").get<std::uint64_t>();
  spec.r = prime_power_decompose(spec.q).second;
  spec.constant_field_degree = j.at("constant_field_degree").get<unsigned>();
  for (const auto& s : j.at("steps")) {
    StepDef st;
    st.Q = s.at("Q").get<std::uint64_t>();
    st.rhs_exp = parse_rhs_exponent(s.at("rhs").get<std::string>());
    st.ratio_rule = s.at("ratio_rule").get<bool>();
    spec.steps.push_back(st);
  }
  spec.densification = j.at("densification").get<unsigned>();
  validate_spec(spec);
  return spec;
}

inline TowerSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open tower spec file: " + path);
  nlohmann::json j;
  in >> j;
  return spec_from_json(j);
}

inline void save_spec_file(const TowerSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write tower spec file: " + path);
  out << spec_to_json(spec).dump(2) << "\n";
}

}  // namespace towerlab::tower
