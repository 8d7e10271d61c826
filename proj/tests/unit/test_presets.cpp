#include <filesystem>
#include <fstream>
#include <sstream>

#include "conecap/presets.hpp"
#include "doctest.h"

using namespace conecap;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_flat_config() {
  const char* text = R"({
    "model": {"dimension": 3, "ends": [
      {"id": "E1", "warp": {"kind": "cone", "c": 1.0},
       "link": {"kind": "round", "a": 1.0}}]},
    "domain": {"kind": "sublevel", "rho0": 1.0},
    "grid": {"r_out": 32.0, "radial": 96, "angular": 12, "stretch": 1.05},
    "solver": {"p": 2.0},
    "ladders": {"s": [4.0, 8.0, 16.0], "t": [2.0, 4.0, 8.0]}
  })";
  auto r = validate_config(text);
  REQUIRE(r.ok());
  return *r.config;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("preset registry") {
  const auto presets = list_presets();
  CHECK(presets.size() == 7);
  bool found = false;
  for (const auto& p : presets)
    if (p.name == "thm1-potential") found = true;
  CHECK(found);
}

TEST_CASE("unknown preset reports invalid config") {
  const auto cfg = small_flat_config();
  const auto manifest = run_preset("no-such-preset", cfg, "/tmp/conecap-test");
  CHECK(manifest.exit_code == kExitInvalidConfig);
}

TEST_CASE("scaling preset emits a deterministic run") {
  const auto cfg = small_flat_config();
  const fs::path out1 = fs::temp_directory_path() / "conecap-det-1";
  const fs::path out2 = fs::temp_directory_path() / "conecap-det-2";
  fs::remove_all(out1);
  fs::remove_all(out2);

  const auto m1 = run_preset("scaling-law", cfg, out1.string());
  const auto m2 = run_preset("scaling-law", cfg, out2.string());
  CHECK(m1.exit_code == kExitPass);
  CHECK(m1.config_hash == m2.config_hash);

  const fs::path d1 = out1 / ("scaling-law-" + m1.config_hash.substr(0, 12));
  const fs::path d2 = out2 / ("scaling-law-" + m2.config_hash.substr(0, 12));
  // manifest lists every emitted file
  for (const auto& f : m1.files) CHECK(fs::exists(d1 / f));
  // CSV outputs byte-identical across runs
  for (const auto& f : m1.files) {
    if (f.size() > 4 && f.substr(f.size() - 4) == ".csv")
      CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
  fs::remove_all(out1);
  fs::remove_all(out2);
}
