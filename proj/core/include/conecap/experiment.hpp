#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conecap/geometry.hpp"
#include "conecap/plap_solver.hpp"

namespace conecap {

struct GridParams {
  double r_out = 64.0;
  std::size_t radial = 256;
  std::size_t angular = 64;
  double stretch = 1.05;
};

struct ExperimentConfig {
  ManifoldModel model;
  DomainSpec domain;
  SolverConfig solver;
  GridParams grid;
  std::vector<double> p_ladder;  // single entry for fixed-p experiments
  std::vector<double> s_ladder = {8.0, 16.0, 32.0};
  std::vector<double> t_ladder = {2.0, 4.0, 8.0, 16.0};
  std::string output_dir;  // optional; CLI/env provide the default
  std::string preset;      // optional preset name

  double p() const { return p_ladder.front(); }
};

struct ConfigError {
  std::string path;  // JSON pointer-style location
  std::string message;
};

struct ConfigParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigError> errors;
  bool ok() const { return config.has_value() && errors.empty(); }
};

/// Parses and fully validates a configuration document (JSON text with
/// nested tables). All problems are aggregated; unknown keys are rejected.
ConfigParseResult validate_config(const std::string& raw_text);

ConfigParseResult load_config_file(const std::string& path);

/// Canonical serialization (sorted keys, fixed formatting); hashing this
/// string is stable across runs.
std::string canonical_config(const ExperimentConfig& cfg);

/// FNV-1a hash of the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace conecap
