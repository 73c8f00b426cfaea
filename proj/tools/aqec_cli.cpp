#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "aqec/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"aqec: autonomous bosonic error-correction simulator"};
  app.require_subcommand(1);

  aqec::cli::RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "run one experiment and write CSV + manifest");
  run_cmd->add_option("kind", run.kind, "experiment kind")
      ->required()
      ->check(CLI::IsMember(aqec::cli::experiment_kinds()));
  run_cmd->add_option("--config", run.config_path, "JSON experiment config");
  run_cmd->add_option("--profile", run.profile,
                      "device profile name (searched in $AQEC_PROFILE_DIR) or JSON path");
  run_cmd->add_option("--out", run.out, "output directory");
  run_cmd->add_option("--seed", run.seed, "random seed");
  run_cmd->add_option("--jobs", run.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  run_cmd->add_option("--format", run.format, "data format")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--epsilon", run.epsilon, "rate: per-round infidelity");
  run_cmd->add_option("--gamma", run.gamma,
                      "rate: gamma_c = gamma_e, as a rate or 'AxB' = A/B per us");

  std::string profile = "paper-default";
  auto* val_cmd = app.add_subcommand("validate", "run the invariant checks against a profile");
  val_cmd->add_option("--profile", profile, "device profile name or JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : aqec::cli::kExitConfig;
  }

  try {
    if (*run_cmd) return aqec::cli::cmd_run(run, std::cout, std::cerr);
    return aqec::cli::cmd_validate(profile, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return aqec::cli::kExitConfig;
  }
}
