#pragma once

#include <string>
#include <vector>

#include "conecap/experiment.hpp"

namespace conecap {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitSolverStall = 2;
inline constexpr int kExitExtrapolation = 3;
inline constexpr int kExitInvalidConfig = 4;

struct StageStatus {
  std::string name;
  std::string status;  // "ok", "failed", or an error tag
  double seconds = 0.0;
};

struct RunManifest {
  std::string preset;
  std::string config_hash;
  std::string artifact_version;
  std::string started;
  std::string finished;
  std::vector<StageStatus> stages;
  std::vector<std::string> files;  // every emitted file, relative to out dir
  bool passed = false;
  int exit_code = 0;
  std::vector<std::string> check_lines;  // human-readable check outcomes
};

struct PresetInfo {
  std::string name;
  std::string verifies;  // the law the preset checks, in plain terms
};

std::vector<PresetInfo> list_presets();

/// Executes one preset pipeline: solves, writes CSV tables, a JSON summary,
/// one gnuplot script per table, and the run manifest, all under
/// out_dir/<preset>-<hash>. The manifest's exit code encodes the outcome.
RunManifest run_preset(const std::string& name, const ExperimentConfig& cfg,
                       const std::string& out_dir, int threads = 1);

}  // namespace conecap
