#include "towerlab/tower_io.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace towerlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Minimal JSON-schema checker covering the subset the shipped schemas use:
// type (incl. union types), required, properties, items, enum, $ref into the
// schema directory.
struct SchemaChecker {
  fs::path schema_dir;

  json load(const std::string& name) const {
    std::ifstream in(schema_dir / name);
    REQUIRE(in.good());
    json s;
    in >> s;
    return s;
  }

  static bool type_matches(const std::string& t, const json& v) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
  }

  void check(const json& schema, const json& v, const std::string& where) const {
    INFO("at " << where);
    if (schema.contains("$ref")) {
      check(load(schema["$ref"].get<std::string>()), v, where);
      return;
    }
    if (schema.contains("enum")) {
      bool ok = false;
      for (const auto& e : schema["enum"]) ok = ok || (e == v);
      REQUIRE(ok);
    }
    if (schema.contains("type")) {
      const auto& t = schema["type"];
      bool ok = false;
      if (t.is_string())
        ok = type_matches(t.get<std::string>(), v);
      else
        for (const auto& alt : t) ok = ok || type_matches(alt.get<std::string>(), v);
      REQUIRE(ok);
    }
    if (v.is_object()) {
      if (schema.contains("required"))
        for (const auto& key : schema["required"]) {
          INFO("required key " << key.get<std::string>());
          REQUIRE(v.contains(key.get<std::string>()));
        }
      if (schema.contains("properties"))
        for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
          if (v.contains(it.key())) check(it.value(), v[it.key()], where + "." + it.key());
    }
    if (v.is_array() && schema.contains("items")) {
      std::size_t i = 0;
      for (const auto& el : v) check(schema["items"], el, where + "[" + std::to_string(i++) + "]");
    }
  }

  void validate(const std::string& schema_name, const json& v) const {
    check(load(schema_name), v, schema_name);
  }
};

struct CliRunner {
  std::string bin;
  fs::path workdir;

  struct Result {
    int exit_code;
    std::string out;
    std::string err;
  };

  Result run(const std::string& args, const std::string& env_prefix = "") const {
    const fs::path out = workdir / "stdout.txt";
    const fs::path err = workdir / "stderr.txt";
    const std::string cmd =
        env_prefix + " " + bin + " " + args + " > " + out.string() + " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    Result r;
    r.exit_code = WEXITSTATUS(rc);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }
};

CliRunner make_runner() {
  const char* bin = std::getenv("TOWERLAB_BIN");
  REQUIRE(bin != nullptr);
  const fs::path dir = fs::temp_directory_path() / "towerlab_cli_test";
  fs::create_directories(dir);
  return CliRunner{bin, dir};
}

SchemaChecker make_checker() {
  const char* dir = std::getenv("TOWERLAB_SCHEMAS");
  REQUIRE(dir != nullptr);
  return SchemaChecker{fs::path(dir)};
}

}  // namespace

TEST_CASE("tower spec JSON roundtrip") {
  const auto t3 = tower::make_T3();
  const auto j = tower::spec_to_json(t3);
  const auto back = tower::spec_from_json(j);
  CHECK(back.name == t3.name);
  CHECK(back.p == t3.p);
  CHECK(back.q == t3.q);
  CHECK(back.r == t3.r);
  CHECK(back.constant_field_degree == t3.constant_field_degree);
  CHECK(back.steps == t3.steps);
  CHECK(back.densification == t3.densification);

  make_checker().validate("towerspec.schema.json", j);

  // invalid specs are rejected at parse time
  auto bad = j;
  bad["steps"][0]["Q"] = 3;  // not a power of p = 2
  CHECK_THROWS_AS(tower::spec_from_json(bad), std::invalid_argument);
}

TEST_CASE("tower spec file save/load") {
  const fs::path dir = fs::temp_directory_path() / "towerlab_cli_test";
  fs::create_directories(dir);
  const fs::path path = dir / "t2.json";
  tower::save_spec_file(tower::make_T2(4), path.string());
  const auto loaded = tower::load_spec_file(path.string());
  CHECK(loaded.name == "T2");
  CHECK(loaded.constant_field_degree == 2);
  CHECK_THROWS_AS(tower::load_spec_file("/nonexistent/spec.json"), std::invalid_argument);
}

TEST_CASE("cli: count examples and exit codes") {
  auto cli = make_runner();

  auto r = cli.run("count --spec T0 --q 2 --level 2,0 --m 1..2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("T0,2,0,1,4,8,1,9") != std::string::npos);

  auto r3 = cli.run("count --spec T3 --level 2,0 --m 4 --format json");
  CHECK(r3.exit_code == 0);
  const json j = json::parse(r3.out);
  make_checker().validate("count.schema.json", j);
  CHECK(j["rows"][0]["n_total"] == "65");

  CHECK(cli.run("count --spec T0 --q 2 --level 0,0 --m 1").exit_code == 1);
  CHECK(cli.run("count --spec T0 --q 2 --level 2,0 --m bogus").exit_code == 1);
  CHECK(cli.run("nonsense").exit_code == 1);
}

TEST_CASE("cli: cap refusal exits 2 and is machine readable") {
  auto cli = make_runner();
  auto r = cli.run("count --spec T1 --q 4 --level 1,1 --m 4 --format json", "TOWERLAB_CAP=1000");
  CHECK(r.exit_code == 2);
  const json j = json::parse(r.out);
  make_checker().validate("error.schema.json", j);
  CHECK(j["error"]["type"] == "cap");
  CHECK(j["error"]["required_order"] == "65536");

  // --cap flag takes precedence over the environment
  auto ok = cli.run("count --spec T1 --q 4 --level 1,1 --m 1 --cap 100000", "TOWERLAB_CAP=10");
  CHECK(ok.exit_code == 0);
}

TEST_CASE("cli: census output") {
  auto cli = make_runner();
  auto r = cli.run("census --spec T0 --q 2 --level 2,0 --m 1..4 --format json");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  make_checker().validate("census.schema.json", j);
  CHECK(j["rows"][0]["N"] == "9");
  CHECK(j["rows"][0]["B"] == "9");
  CHECK(j["rows"][1]["B"] == "0");  // B_2 = 0 on the Hermitian level
  CHECK(j["rows"][0]["provenance"] == "exact");

  // lower-bound provenance on an uncertified level
  auto r2 = cli.run("census --spec T0 --q 2 --level 3,0 --m 1..2 --format json");
  REQUIRE(r2.exit_code == 0);
  const json j2 = json::parse(r2.out);
  CHECK(j2["rows"][0]["provenance"] == "lower_bound");
  CHECK(j2["rows"][0]["B"].is_null());
}

TEST_CASE("cli: zeta output") {
  auto cli = make_runner();
  auto r = cli.run("zeta --spec T0 --q 2 --level 2,0 --m 1..4 --format json");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  make_checker().validate("zeta.schema.json", j);
  CHECK(j["levels"][0]["genus"] == 1);
  CHECK(j["levels"][0]["L"] == json::array({"1", "4", "4"}));
  CHECK(j["levels"][0]["h"] == "9");

  // refuses uncertified levels
  CHECK(cli.run("zeta --spec T0 --q 2 --level 3,0 --m 1..4").exit_code == 1);
}

TEST_CASE("cli: bounds output") {
  auto cli = make_runner();
  auto r = cli.run("bounds --spec T1 --q 4 --level 1,1 --m 1..6 --format json");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  make_checker().validate("bounds.schema.json", j);
  CHECK(j["levels"][0]["h"] == "625");
  CHECK(j["levels"][0]["h_over_L2"] == "625/216");
  CHECK(j["levels"][0]["h_gt_qg"] == true);
  CHECK(j["levels"][0]["hL2_ge_2"] == true);
}

TEST_CASE("cli: asym output") {
  auto cli = make_runner();
  auto r = cli.run("asym --q 4 --r 1 --mu 0.1,0.33333,1.0 --format json");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  make_checker().validate("asym.schema.json", j);
  CHECK(j["delta"].size() == 3);
  CHECK(j["mu0"] == "1/3");

  auto bad = cli.run("asym --q 2 --r 1");
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("square") != std::string::npos);

  auto r22 = cli.run("asym --q 2 --r 2");
  CHECK(r22.exit_code == 0);
  CHECK(r22.out.find("beta_r,1/2") != std::string::npos);
}

TEST_CASE("cli: report validates and is byte-deterministic") {
  auto cli = make_runner();
  const std::string args = "report --spec T0 --q 2 --level 1,0 --level 2,0 --m 1..4 --format json";
  auto a = cli.run(args);
  auto b = cli.run(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  make_checker().validate("report.schema.json", j);
  CHECK(j["levels"].size() == 2);
  CHECK(j["levels"][1]["stats"]["h"] == "9");
  CHECK(j["levels"][1]["stats"]["mass_ok"] == "true");

  // csv mode determinism as well
  auto c = cli.run("report --spec T3 --level 2,0 --m 1..4");
  auto d = cli.run("report --spec T3 --level 2,0 --m 1..4");
  REQUIRE(c.exit_code == 0);
  CHECK(c.out == d.out);
}

TEST_CASE("cli: spec export and file loading") {
  auto cli = make_runner();
  const fs::path spec_path = cli.workdir / "t3_exported.json";
  auto e = cli.run("count --spec T3 --export-spec " + spec_path.string() +
                   " --level 2,0 --m 4 --format json");
  REQUIRE(e.exit_code == 0);

  std::ifstream in(spec_path);
  REQUIRE(in.good());
  json spec_json;
  in >> spec_json;
  make_checker().validate("towerspec.schema.json", spec_json);

  auto f = cli.run("count --spec " + spec_path.string() + " --level 2,0 --m 4 --format json");
  REQUIRE(f.exit_code == 0);
  CHECK(json::parse(e.out)["rows"] == json::parse(f.out)["rows"]);
}
