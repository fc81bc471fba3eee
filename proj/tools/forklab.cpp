// forklab command-line driver: run | sweep | bounds | profiles | replay.
// Exit codes: 0 success, 1 run error, 2 usage error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "forklab/cli.hpp"

namespace {

struct CommonArgs {
  double phi = 2.0;
  double epsilon = 0.01;
  std::int64_t rho = 4;
  double a0 = 0.0;
  std::string config_path;
  std::string out_dir_flag;
};

void add_param_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--phi", args.phi, "honest/adversarial space ratio (> 1)");
  cmd->add_option("--epsilon", args.epsilon, "per-round space drift bound (> 0)");
  cmd->add_option("--rho", args.rho, "rounds consumed by one replot (>= 2)");
  cmd->add_option("--a0", args.a0, "initial adversarial space (default 1/phi)");
}

forklab::GameParams params_from(const CommonArgs& args) {
  forklab::GameParams p;
  p.phi = args.phi;
  p.epsilon = args.epsilon;
  p.rho = args.rho;
  p.a0 = args.a0;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forklab: forking-game simulator, attacks, and bound tables"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string rule_text = "weight";
  std::string strategy_text = "universal:direction=stilde";
  std::string replay_path;
  std::int64_t genesis_k = 0;

  CLI::App* run = app.add_subcommand("run", "play one game and write its transcript");
  add_param_flags(run, args);
  run->add_option("--rule", rule_text, "selection rule: weight | genesis:k=<int> | tent[:delta=<real>]");
  run->add_option("--strategy", strategy_text,
                  "weight-attack | genesis-attack:k=<int> | universal:direction=<s|stilde> | "
                  "grid-search:max_fork=<int>");
  run->add_option("--config", args.config_path, "JSON config (out_dir only for this command)");
  run->add_option("--out", args.out_dir_flag, "output directory");

  CLI::App* sweep = app.add_subcommand("sweep", "run the full grid and write sweep.csv");
  sweep->add_option("--config", args.config_path, "JSON config with grid lists");
  sweep->add_option("--out", args.out_dir_flag, "output directory");
  std::vector<double> phi_override, epsilon_override;
  std::vector<std::int64_t> rho_override;
  sweep->add_option("--phi", phi_override, "override the phi list");
  sweep->add_option("--epsilon", epsilon_override, "override the epsilon list");
  sweep->add_option("--rho", rho_override, "override the rho list");

  CLI::App* bounds = app.add_subcommand("bounds", "print the bound table as CSV");
  bounds->add_option("--config", args.config_path, "JSON config with grid lists");
  bounds->add_option("--phi", phi_override, "override the phi list");
  bounds->add_option("--epsilon", epsilon_override, "override the epsilon list");
  bounds->add_option("--rho", rho_override, "override the rho list");
  bounds->add_option("--genesis-k", genesis_k, "genesis window size (default: k_steps per row)");

  CLI::App* profiles = app.add_subcommand("profiles", "emit the profile pair as CSV + SVG");
  add_param_flags(profiles, args);
  profiles->add_option("--config", args.config_path, "JSON config (out_dir only)");
  profiles->add_option("--out", args.out_dir_flag, "output directory");

  CLI::App* replay = app.add_subcommand("replay", "re-run a transcript and verify it");
  replay->add_option("transcript", replay_path, "transcript log to replay")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    forklab::ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = forklab::load_config(args.config_path);
    if (!phi_override.empty()) cfg.phis = phi_override;
    if (!epsilon_override.empty()) cfg.epsilons = epsilon_override;
    if (!rho_override.empty()) cfg.rhos = rho_override;
    const std::string out_dir = forklab::resolve_out_dir(args.out_dir_flag, cfg.out_dir);

    if (run->parsed()) {
      forklab::cmd_run(params_from(args), rule_text, strategy_text, out_dir, std::cout);
    } else if (sweep->parsed()) {
      forklab::cmd_sweep(cfg, out_dir, std::cout);
    } else if (bounds->parsed()) {
      forklab::cmd_bounds(cfg, genesis_k, std::cout);
    } else if (profiles->parsed()) {
      forklab::cmd_profiles(params_from(args), out_dir, std::cout);
    } else if (replay->parsed()) {
      forklab::cmd_replay(replay_path, std::cout);
    }
  } catch (const forklab::usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
