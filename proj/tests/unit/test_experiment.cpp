#include <filesystem>
#include <fstream>

#include "conecap/csv.hpp"
#include "conecap/experiment.hpp"
#include "conecap/field_io.hpp"
#include "conecap/plap_solver.hpp"
#include "doctest.h"

using namespace conecap;

namespace {

const char* kMinimalConfig = R"({
  "model": {
    "dimension": 3,
    "ends": [
      {"id": "E1", "warp": {"kind": "cone", "c": 1.0},
       "link": {"kind": "round", "a": 1.0}}
    ]
  },
  "domain": {"kind": "sublevel", "rho0": 1.0}
})";

std::string contains_error(const ConfigParseResult& r,
                           const std::string& needle) {
  for (const auto& e : r.errors)
    if (e.path.find(needle) != std::string::npos ||
        e.message.find(needle) != std::string::npos)
      return e.path + ": " + e.message;
  return "";
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const auto r = validate_config(kMinimalConfig);
  REQUIRE(r.ok());
  CHECK(r.config->grid.r_out == doctest::Approx(64.0));
  CHECK(r.config->grid.radial == 256);
  CHECK(r.config->p() == doctest::Approx(2.0));
  CHECK(r.config->s_ladder.size() == 3);
}

TEST_CASE("p outside the admissible range is rejected") {
  std::string text = kMinimalConfig;
  text.insert(text.rfind('}'), R"(, "solver": {"p": 5.0})");
  const auto r = validate_config(text);
  CHECK_FALSE(r.ok());
  CHECK(contains_error(r, "p must lie in (1, 3)") != "");
}

TEST_CASE("missing warp slope names the field") {
  const char* text = R"({
    "model": {"dimension": 3, "ends": [
      {"id": "E1", "warp": {"kind": "offset", "b": 0.5},
       "link": {"kind": "round", "a": 1.0}}]},
    "domain": {"kind": "sublevel", "rho0": 1.0}
  })";
  const auto r = validate_config(text);
  CHECK_FALSE(r.ok());
  CHECK(contains_error(r, "/model/ends/0/warp/c") != "");
}

TEST_CASE("unknown keys are rejected") {
  std::string text = kMinimalConfig;
  text.insert(text.rfind('}'), R"(, "grd": {"r_out": 32.0})");
  const auto r = validate_config(text);
  CHECK_FALSE(r.ok());
  CHECK(contains_error(r, "unknown key") != "");
}

TEST_CASE("parse errors are line anchored") {
  const auto r = validate_config("{\n  \"model\": [,]\n}");
  CHECK_FALSE(r.ok());
  CHECK(contains_error(r, "line 2") != "");
}

TEST_CASE("errors aggregate instead of stopping early") {
  const char* text = R"({
    "model": {"dimension": 3, "ends": [
      {"id": "E1", "warp": {"kind": "nope"},
       "link": {"kind": "round", "a": -1.0}}]},
    "domain": {"kind": "mystery"}
  })";
  const auto r = validate_config(text);
  CHECK(r.errors.size() >= 3);
}

TEST_CASE("canonical form and hash are stable") {
  const auto a = validate_config(kMinimalConfig);
  // same content, different key order and whitespace
  const char* shuffled = R"({
    "domain": {"rho0": 1.0, "kind": "sublevel"},
    "model": {"ends": [
      {"link": {"a": 1.0, "kind": "round"},
       "warp": {"c": 1.0, "kind": "cone"}, "id": "E1"}],
      "dimension": 3}
  })";
  const auto b = validate_config(shuffled);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(canonical_config(*a.config) == canonical_config(*b.config));
  CHECK(config_hash(*a.config) == config_hash(*b.config));
}

TEST_CASE("csv rendering is deterministic") {
  CsvTable t{"demo", {"a table"}, {"x", "y"}, {{1.0, 0.1}, {2.0, 0.25}}};
  const auto s1 = render_csv(t);
  const auto s2 = render_csv(t);
  CHECK(s1 == s2);
  CHECK(s1.find("# a table\n") == 0);
  CHECK(s1.find("x,y\n") != std::string::npos);
}

TEST_CASE("field binary dump round-trips") {
  const auto m = make_model(
      3, {{"E1", WarpProfile::cone(1.0), LinkSpec::round(1.0)}});
  const auto d = DomainSpec::sublevel(1.0);
  const auto g = build_grid(m, d, "E1", 16.0, 16, 8, 1.0);
  DiscreteField f;
  f.grid = g;
  f.p = 1.7;
  f.achieved_eps = 1e-7;
  f.values.resize(g.node_count());
  for (std::size_t k = 0; k < f.values.size(); ++k)
    f.values[k] = 0.01 * static_cast<double>(k);

  const auto path =
      (std::filesystem::temp_directory_path() / "conecap_field_test.bin")
          .string();
  write_field_binary(f, path);
  const auto dump = read_field_binary(path);
  CHECK(dump.p == doctest::Approx(1.7));
  CHECK(dump.rt == f.grid.rt);
  CHECK(dump.theta == f.grid.theta);
  CHECK(dump.values == f.values);
  std::filesystem::remove(path);
}
