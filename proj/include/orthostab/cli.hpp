#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "orthostab/config_io.hpp"
#include "orthostab/harness.hpp"

namespace orthostab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCertFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// `axioms` subcommand: check (O1)-(O4) for the configured relation.
/// Exit 0 when every axiom passes, 1 on an axiom failure, 2 on a bad
/// config, 3 on a runtime failure.
inline int cmd_axioms(const std::string& config_path,
                      const std::optional<std::string>& out_path,
                      std::optional<std::uint64_t> seed_override, bool quiet,
                      std::ostream& log = std::cout) {
  try {
    AxiomsConfig cfg = axioms_config_from_json(load_json_file(config_path));
    if (seed_override) cfg.seed = *seed_override;
    const NormedSpace space = cfg.space.build();
    const Relation rel =
        Relation::create(cfg.relation.kind, space, cfg.relation.tol);
    const AxiomReport rep = check_axioms(rel, cfg.seed, cfg.samples);

    Json out{{"artifact_version", std::string(kVersion)},
             {"config", axioms_config_to_json(cfg)},
             {"axioms", axiom_report_to_json(cfg.space.field, rep)}};
    if (out_path) write_text_file(*out_path, out.dump(2) + "\n");
    if (!quiet) {
      log << "O1 " << (rep.o1_pass ? "pass" : "FAIL") << " (" << rep.o1_samples
          << " samples)\n"
          << "O2 " << (rep.o2_pass ? "pass" : "FAIL") << " (" << rep.o2_samples
          << " samples)\n"
          << "O3 " << (rep.o3_pass ? "pass" : "FAIL") << " (" << rep.o3_samples
          << " samples)\n"
          << "O4 " << (rep.o4_pass ? "pass" : "FAIL") << " (" << rep.o4_samples
          << " samples, " << rep.o4_failures << " failures)\n";
    }
    return rep.all_pass() ? kExitPass : kExitCertFail;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

/// `run` subcommand: run one scenario end to end and write its report.
inline int cmd_run(const std::string& config_path, const std::string& out_path,
                   std::optional<std::uint64_t> seed_override, bool quiet,
                   std::ostream& log = std::cout) {
  try {
    ScenarioConfig cfg = scenario_config_from_json(load_json_file(config_path));
    if (seed_override) {
      cfg.sampling.seed = *seed_override;
      cfg.gt.seed = *seed_override + 1;
    }
    const RunReport rep = run_scenario(cfg);
    write_text_file(out_path, report_to_json(rep).dump(2) + "\n");
    if (!quiet) {
      log << to_string(rep.config.preset)
          << ": eps_hat=" << detail::fmt17(rep.eps.eps_hat) << "\n";
      for (const auto& b : rep.cert.bounds)
        log << "  " << b.name << " c=" << detail::fmt17(b.constant)
            << " sup=" << detail::fmt17(b.attained_sup)
            << " ratio=" << detail::fmt17(b.ratio)
            << (b.pass ? " pass" : " FAIL") << (b.gating ? "" : " (recorded)")
            << "\n";
      for (const auto& c : rep.cert.checks)
        log << "  " << c.name << " sup=" << detail::fmt17(c.sup)
            << " tol=" << detail::fmt17(c.tol)
            << (c.pass ? " pass" : " FAIL") << (c.gating ? "" : " (recorded)")
            << "\n";
      log << (rep.pass ? "PASS" : "FAIL") << "\n";
    }
    return rep.pass ? kExitPass : kExitCertFail;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

/// `suite` subcommand: every preset with its documented defaults. Writes
/// one report per preset plus an index CSV.
inline int cmd_suite(const std::string& out_dir,
                     std::optional<std::uint64_t> seed_override, bool quiet,
                     std::ostream& log = std::cout) {
  try {
    const std::uint64_t seed = seed_override.value_or(kDefaultSuiteSeed);
    std::filesystem::create_directories(out_dir);
    std::ostringstream csv;
    csv << "preset,eps_hat,bound_name,constant,attained_sup,ratio,pass\n";
    bool all_pass = true;
    bool runtime_failure = false;
    for (Preset p : all_presets()) {
      const std::string name = to_string(p);
      try {
        const RunReport rep = run_scenario(default_config(p, seed));
        write_text_file((std::filesystem::path(out_dir) / (name + ".json"))
                            .string(),
                        report_to_json(rep).dump(2) + "\n");
        for (const auto& b : rep.cert.bounds)
          csv << name << ',' << detail::fmt17(rep.eps.eps_hat) << ','
              << b.name << ',' << detail::fmt17(b.constant) << ','
              << detail::fmt17(b.attained_sup) << ','
              << detail::fmt17(b.ratio) << ',' << (b.pass ? "true" : "false")
              << "\n";
        if (!rep.pass) all_pass = false;
        if (!quiet)
          log << name << ": " << (rep.pass ? "pass" : "FAIL")
              << " (eps_hat=" << detail::fmt17(rep.eps.eps_hat) << ", "
              << rep.total_ms << " ms)\n";
      } catch (const Error& e) {
        runtime_failure = true;
        all_pass = false;
        std::cerr << name << ": runtime error: " << e.what() << "\n";
      }
    }
    write_text_file(
        (std::filesystem::path(out_dir) / "index.csv").string(), csv.str());
    if (!quiet) log << (all_pass ? "suite PASS" : "suite FAIL") << "\n";
    if (runtime_failure) return kExitRuntime;
    return all_pass ? kExitPass : kExitCertFail;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace orthostab
