#include "conecap/experiment.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "conecap/errors.hpp"

namespace conecap {

using nlohmann::json;

namespace {

struct Validator {
  std::vector<ConfigError>& errors;

  void fail(const std::string& path, const std::string& message) {
    errors.push_back({path, message});
  }

  bool reject_unknown(const json& obj, const std::string& path,
                      const std::set<std::string>& allowed) {
    bool ok = true;
    for (const auto& [key, _] : obj.items()) {
      if (!allowed.count(key)) {
        fail(path + "/" + key, "unknown key");
        ok = false;
      }
    }
    return ok;
  }

  double number(const json& obj, const std::string& path,
                const std::string& key, double fallback, bool required,
                bool* present = nullptr) {
    if (present) *present = false;
    if (!obj.contains(key)) {
      if (required) fail(path + "/" + key, "missing required field");
      return fallback;
    }
    if (!obj[key].is_number()) {
      fail(path + "/" + key, "expected a number");
      return fallback;
    }
    if (present) *present = true;
    return obj[key].get<double>();
  }
};

WarpProfile parse_warp(const json& j, const std::string& path, Validator& v) {
  WarpProfile w;
  if (!j.is_object()) {
    v.fail(path, "expected a table");
    return w;
  }
  v.reject_unknown(j, path, {"kind", "c", "b"});
  const std::string kind = j.value("kind", "");
  const double c = v.number(j, path, "c", 1.0, true);
  if (kind == "cone") {
    w = WarpProfile::cone(c);
    if (j.contains("b")) v.fail(path + "/b", "cone takes no b parameter");
  } else if (kind == "offset") {
    w = WarpProfile::offset_profile(c, v.number(j, path, "b", 0.0, true));
  } else if (kind == "smoothed") {
    w = WarpProfile::smoothed(c, v.number(j, path, "b", 1.0, true));
  } else {
    v.fail(path + "/kind", "warp kind must be cone, offset or smoothed");
  }
  if (!(w.slope > 0.0)) v.fail(path + "/c", "warp slope must be positive");
  return w;
}

LinkSpec parse_link(const json& j, const std::string& path, Validator& v) {
  LinkSpec l;
  if (!j.is_object()) {
    v.fail(path, "expected a table");
    return l;
  }
  v.reject_unknown(j, path, {"kind", "a", "area"});
  const std::string kind = j.value("kind", "round");
  if (kind == "round") {
    l = LinkSpec::round(v.number(j, path, "a", 1.0, true));
    if (!(l.scale > 0.0)) v.fail(path + "/a", "link scale must be positive");
  } else if (kind == "explicit-area") {
    l = LinkSpec::explicit_link(v.number(j, path, "area", 0.0, true));
    if (!(l.explicit_area > 0.0))
      v.fail(path + "/area", "explicit link area must be positive");
  } else {
    v.fail(path + "/kind", "link kind must be round or explicit-area");
  }
  return l;
}

}  // namespace

ConfigParseResult validate_config(const std::string& raw_text) {
  ConfigParseResult out;
  Validator v{out.errors};

  json j;
  try {
    j = json::parse(raw_text);
  } catch (const json::parse_error& err) {
    // byte position -> line/column anchor
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < err.byte && i < raw_text.size(); ++i) {
      if (raw_text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": " << err.what();
    v.fail("/", os.str());
    return out;
  }
  if (!j.is_object()) {
    v.fail("/", "the configuration must be a table");
    return out;
  }

  v.reject_unknown(j, "", {"model", "domain", "grid", "solver", "p_ladder",
                           "ladders", "output_dir", "preset"});

  ExperimentConfig cfg;

  // ---- model ----
  if (!j.contains("model") || !j["model"].is_object()) {
    v.fail("/model", "missing model table");
  } else {
    const json& jm = j["model"];
    v.reject_unknown(jm, "/model", {"dimension", "ends"});
    const int n = static_cast<int>(v.number(jm, "/model", "dimension", 3.0, true));
    std::vector<EndSpec> ends;
    if (!jm.contains("ends") || !jm["ends"].is_array() || jm["ends"].empty()) {
      v.fail("/model/ends", "need an array of one or two ends");
    } else {
      std::size_t idx = 0;
      for (const auto& je : jm["ends"]) {
        const std::string path = "/model/ends/" + std::to_string(idx);
        EndSpec e;
        if (!je.is_object()) {
          v.fail(path, "expected a table");
          continue;
        }
        v.reject_unknown(je, path, {"id", "warp", "link"});
        e.id = je.value("id", "E" + std::to_string(idx + 1));
        if (!je.contains("warp"))
          v.fail(path + "/warp", "missing warp table (slope is required)");
        else
          e.warp = parse_warp(je["warp"], path + "/warp", v);
        if (!je.contains("link"))
          v.fail(path + "/link", "missing link table");
        else
          e.link = parse_link(je["link"], path + "/link", v);
        ends.push_back(std::move(e));
        ++idx;
      }
    }
    if (out.errors.empty()) {
      try {
        cfg.model = make_model(n, std::move(ends));
      } catch (const error& err) {
        v.fail("/model", err.what());
      }
    }
  }

  // ---- domain ----
  if (!j.contains("domain") || !j["domain"].is_object()) {
    v.fail("/domain", "missing domain table");
  } else {
    const json& jd = j["domain"];
    const std::string kind = jd.value("kind", "");
    if (kind == "sublevel") {
      v.reject_unknown(jd, "/domain", {"kind", "rho0"});
      cfg.domain = DomainSpec::sublevel(v.number(jd, "/domain", "rho0", 1.0, true));
      if (!(cfg.domain.rho0 > 0.0))
        v.fail("/domain/rho0", "rho0 must be positive");
    } else if (kind == "graph") {
      v.reject_unknown(jd, "/domain",
                       {"kind", "shape", "axis_polar", "axis_equatorial"});
      const std::string shape = jd.value("shape", "ellipsoid");
      if (shape != "ellipsoid")
        v.fail("/domain/shape", "only the ellipsoid graph shape is registered");
      cfg.domain = DomainSpec::ellipsoid(
          v.number(jd, "/domain", "axis_polar", 2.0, true),
          v.number(jd, "/domain", "axis_equatorial", 1.0, true));
      if (!(cfg.domain.min_radius() > 0.0))
        v.fail("/domain", "graph radius must stay positive");
    } else {
      v.fail("/domain/kind", "domain kind must be sublevel or graph");
    }
  }

  // ---- grid ----
  if (j.contains("grid")) {
    const json& jg = j["grid"];
    if (!jg.is_object()) {
      v.fail("/grid", "expected a table");
    } else {
      v.reject_unknown(jg, "/grid", {"r_out", "radial", "angular", "stretch"});
      cfg.grid.r_out = v.number(jg, "/grid", "r_out", 64.0, false);
      cfg.grid.radial = static_cast<std::size_t>(
          v.number(jg, "/grid", "radial", 256.0, false));
      cfg.grid.angular = static_cast<std::size_t>(
          v.number(jg, "/grid", "angular", 64.0, false));
      cfg.grid.stretch = v.number(jg, "/grid", "stretch", 1.05, false);
      if (cfg.grid.radial < 8 || cfg.grid.angular < 8)
        v.fail("/grid", "grid too coarse: radial and angular must be >= 8");
      if (!(cfg.grid.stretch >= 1.0 && cfg.grid.stretch <= 1.2))
        v.fail("/grid/stretch", "stretch must lie in [1, 1.2]");
      if (!(cfg.grid.r_out > cfg.domain.max_radius()))
        v.fail("/grid/r_out", "R_out must lie beyond the domain");
    }
  }

  // ---- solver and p ladder ----
  double p_single = 2.0;
  bool p_present = false;
  if (j.contains("solver")) {
    const json& js = j["solver"];
    if (!js.is_object()) {
      v.fail("/solver", "expected a table");
    } else {
      v.reject_unknown(js, "/solver",
                       {"p", "eps_min", "max_outer", "update_tol",
                        "linear_tol", "stage_tol", "accelerate"});
      p_single = v.number(js, "/solver", "p", 2.0, false, &p_present);
      cfg.solver.eps_min = v.number(js, "/solver", "eps_min", -1.0, false);
      cfg.solver.max_outer = static_cast<int>(
          v.number(js, "/solver", "max_outer", 200.0, false));
      cfg.solver.update_tol =
          v.number(js, "/solver", "update_tol", 1e-8, false);
      cfg.solver.stage_tol = v.number(js, "/solver", "stage_tol", 1e-4, false);
      cfg.solver.linear_tol =
          v.number(js, "/solver", "linear_tol", 1e-10, false);
      if (js.contains("accelerate")) {
        if (!js["accelerate"].is_boolean())
          v.fail("/solver/accelerate", "expected a boolean");
        else
          cfg.solver.accelerate = js["accelerate"].get<bool>();
      }
      if (cfg.solver.update_tol <= 0.0 || cfg.solver.linear_tol <= 0.0)
        v.fail("/solver", "tolerances must be positive");
    }
  }
  if (j.contains("p_ladder")) {
    if (!j["p_ladder"].is_array() || j["p_ladder"].size() < 3) {
      v.fail("/p_ladder", "expected an array of at least 3 exponents");
    } else {
      for (const auto& e : j["p_ladder"]) {
        if (!e.is_number()) {
          v.fail("/p_ladder", "entries must be numbers");
          break;
        }
        cfg.p_ladder.push_back(e.get<double>());
      }
    }
    if (p_present)
      v.fail("/solver/p", "give either solver.p or p_ladder, not both");
  } else {
    cfg.p_ladder = {p_single};
  }
  const int dim = cfg.model.dimension > 0 ? cfg.model.dimension : 3;
  for (std::size_t k = 0; k < cfg.p_ladder.size(); ++k) {
    const double p = cfg.p_ladder[k];
    if (!(p > 1.0 && p < dim)) {
      std::ostringstream os;
      os << "p must lie in (1, " << dim << ")";
      v.fail(j.contains("p_ladder") ? "/p_ladder" : "/solver/p", os.str());
      break;
    }
  }

  // ---- ladders ----
  if (j.contains("ladders")) {
    const json& jl = j["ladders"];
    if (!jl.is_object()) {
      v.fail("/ladders", "expected a table");
    } else {
      v.reject_unknown(jl, "/ladders", {"s", "t"});
      auto read_ladder = [&](const char* key, std::vector<double>& dst) {
        if (!jl.contains(key)) return;
        if (!jl[key].is_array() || jl[key].size() < 2) {
          v.fail(std::string("/ladders/") + key,
                 "expected an increasing array of at least 2 values");
          return;
        }
        dst.clear();
        for (const auto& e : jl[key]) dst.push_back(e.get<double>());
        for (std::size_t k = 0; k + 1 < dst.size(); ++k)
          if (!(dst[k] < dst[k + 1])) {
            v.fail(std::string("/ladders/") + key, "values must increase");
            break;
          }
      };
      read_ladder("s", cfg.s_ladder);
      read_ladder("t", cfg.t_ladder);
    }
  }

  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string())
      v.fail("/output_dir", "expected a string");
    else
      cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("preset")) {
    if (!j["preset"].is_string())
      v.fail("/preset", "expected a string");
    else
      cfg.preset = j["preset"].get<std::string>();
  }

  if (out.errors.empty()) out.config = std::move(cfg);
  return out;
}

ConfigParseResult load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    ConfigParseResult out;
    out.errors.push_back({"/", "cannot open config file: " + path});
    return out;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return validate_config(ss.str());
}

namespace {

json warp_to_json(const WarpProfile& w) {
  json j;
  j["kind"] = w.name();
  j["c"] = w.slope;
  if (w.kind != WarpProfile::Kind::Cone) j["b"] = w.offset;
  return j;
}

json link_to_json(const LinkSpec& l) {
  json j;
  if (l.kind == LinkSpec::Kind::RoundSphereScaled) {
    j["kind"] = "round";
    j["a"] = l.scale;
  } else {
    j["kind"] = "explicit-area";
    j["area"] = l.explicit_area;
  }
  return j;
}

}  // namespace

std::string canonical_config(const ExperimentConfig& cfg) {
  json j;
  j["model"]["dimension"] = cfg.model.dimension;
  for (const auto& e : cfg.model.ends) {
    json je;
    je["id"] = e.id;
    je["warp"] = warp_to_json(e.warp);
    je["link"] = link_to_json(e.link);
    j["model"]["ends"].push_back(je);
  }
  if (cfg.domain.is_graph()) {
    j["domain"]["kind"] = "graph";
    j["domain"]["shape"] = "ellipsoid";
    j["domain"]["axis_polar"] = cfg.domain.axis_polar;
    j["domain"]["axis_equatorial"] = cfg.domain.axis_equatorial;
  } else {
    j["domain"]["kind"] = "sublevel";
    j["domain"]["rho0"] = cfg.domain.rho0;
  }
  j["grid"]["r_out"] = cfg.grid.r_out;
  j["grid"]["radial"] = cfg.grid.radial;
  j["grid"]["angular"] = cfg.grid.angular;
  j["grid"]["stretch"] = cfg.grid.stretch;
  j["solver"]["eps_min"] = cfg.solver.eps_min;
  j["solver"]["max_outer"] = cfg.solver.max_outer;
  j["solver"]["update_tol"] = cfg.solver.update_tol;
  j["solver"]["stage_tol"] = cfg.solver.stage_tol;
  j["solver"]["linear_tol"] = cfg.solver.linear_tol;
  j["solver"]["accelerate"] = cfg.solver.accelerate;
  j["p_ladder"] = cfg.p_ladder;
  j["ladders"]["s"] = cfg.s_ladder;
  j["ladders"]["t"] = cfg.t_ladder;
  if (!cfg.preset.empty()) j["preset"] = cfg.preset;
  // nlohmann::json keeps object keys sorted, so this dump is canonical
  return j.dump();
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonical_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace conecap
