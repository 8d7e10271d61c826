#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "conecap/presets.hpp"

namespace {

std::string default_out_dir(const std::string& cli_value) {
  if (!cli_value.empty()) return cli_value;
  if (const char* env = std::getenv("CONECAP_OUT")) return env;
  return "runs";
}

int cmd_validate(const std::string& config_path) {
  const auto result = conecap::load_config_file(config_path);
  if (result.ok()) {
    std::cout << "config ok, hash " << conecap::config_hash(*result.config)
              << "\n";
    return conecap::kExitPass;
  }
  for (const auto& e : result.errors)
    std::cerr << "error at " << (e.path.empty() ? "/" : e.path) << ": "
              << e.message << "\n";
  return conecap::kExitInvalidConfig;
}

int cmd_list() {
  for (const auto& p : conecap::list_presets())
    std::cout << p.name << "\n    " << p.verifies << "\n";
  return conecap::kExitPass;
}

int cmd_run(const std::string& preset, const std::string& config_path,
            const std::string& out_dir, int threads) {
  const auto result = conecap::load_config_file(config_path);
  if (!result.ok()) {
    for (const auto& e : result.errors)
      std::cerr << "error at " << (e.path.empty() ? "/" : e.path) << ": "
                << e.message << "\n";
    return conecap::kExitInvalidConfig;
  }
  auto cfg = *result.config;
  const std::string resolved_out =
      !cfg.output_dir.empty() && out_dir.empty() ? cfg.output_dir
                                                 : default_out_dir(out_dir);
  const auto manifest =
      conecap::run_preset(preset, cfg, resolved_out, threads);
  for (const auto& line : manifest.check_lines) std::cout << line << "\n";
  std::cout << (manifest.passed ? "PASSED" : "FAILED") << " (exit "
            << manifest.exit_code << "), results under " << resolved_out
            << "/" << preset << "-" << manifest.config_hash.substr(0, 12)
            << "\n";
  return manifest.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "conecap: p-capacitary potentials and inverse mean curvature flow on "
      "asymptotically conical models"};
  app.require_subcommand(1);

  std::string config_path, out_dir, preset;
  int threads = 1;

  auto* run = app.add_subcommand("run", "execute a preset experiment");
  run->add_option("preset", preset, "preset name (see list-presets)")
      ->required();
  run->add_option("--config", config_path, "experiment configuration file")
      ->required();
  run->add_option("--out", out_dir,
                  "output root (default: $CONECAP_OUT or ./runs)");
  run->add_option("--threads", threads, "fan-out for independent solves")
      ->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "validate a configuration");
  validate->add_option("--config", config_path, "configuration file")
      ->required();

  app.add_subcommand("list-presets", "list preset experiments");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(preset, config_path, out_dir, threads);
    if (validate->parsed()) return cmd_validate(config_path);
    return cmd_list();
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
