#include <CLI11.hpp>
#include <cstdlib>
#include <optional>
#include <string>

#include "orthostab/cli.hpp"
#include "orthostab/version.hpp"

namespace {

// Seed priority: --seed flag, then config file (run/axioms) or the
// built-in default (suite), with ORTHOSTAB_SEED as the lowest-priority
// fallback for the suite.
std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("ORTHOSTAB_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    return static_cast<std::uint64_t>(std::stoull(s));
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonality-space stability toolkit"};
  app.set_version_flag("--version", std::string(orthostab::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string out_dir;
  bool quiet = false;
  std::uint64_t seed_flag = 0;

  auto* ax = app.add_subcommand("axioms", "Check the orthogonality axioms");
  ax->add_option("--config", config_path, "Config JSON path")->required();
  ax->add_option("--out", out_path, "Report JSON path");
  auto* ax_seed = ax->add_option("--seed", seed_flag, "Seed override");
  ax->add_flag("--quiet", quiet, "Suppress console output");

  auto* run = app.add_subcommand("run", "Run one scenario and write a report");
  run->add_option("--config", config_path, "Config JSON path")->required();
  run->add_option("--out", out_path, "Report JSON path")->required();
  auto* run_seed = run->add_option("--seed", seed_flag, "Seed override");
  run->add_flag("--quiet", quiet, "Suppress console output");

  auto* suite = app.add_subcommand("suite", "Run every preset with defaults");
  suite->add_option("--out", out_dir, "Output directory")->required();
  auto* suite_seed = suite->add_option("--seed", seed_flag, "Seed override");
  suite->add_flag("--quiet", quiet, "Suppress console output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : orthostab::kExitConfig;
  }

  if (ax->parsed()) {
    std::optional<std::uint64_t> seed;
    if (ax_seed->count() > 0) seed = seed_flag;
    return orthostab::cmd_axioms(
        config_path,
        out_path.empty() ? std::nullopt : std::make_optional(out_path), seed,
        quiet);
  }
  if (run->parsed()) {
    std::optional<std::uint64_t> seed;
    if (run_seed->count() > 0) seed = seed_flag;
    return orthostab::cmd_run(config_path, out_path, seed, quiet);
  }
  if (suite->parsed()) {
    std::optional<std::uint64_t> seed;
    if (suite_seed->count() > 0)
      seed = seed_flag;
    else
      seed = env_seed();
    return orthostab::cmd_suite(out_dir, seed, quiet);
  }
  return orthostab::kExitConfig;
}
