#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "spdc/commands.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "spdc_out";
  std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Run-configuration JSON file");
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_option("--seed", args.seed, "Override the configuration seed");
}

spdc::RunConfig load_config(const CommonArgs& args) {
  spdc::RunConfig config = args.config_path.empty() ? spdc::RunConfig{}
                                                    : spdc::RunConfig::load(args.config_path);
  if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimode squeezed-light SPDC simulator and pump-shape optimizer"};
  app.require_subcommand(1);

  CommonArgs args[6];
  CLI::App* phase_match = app.add_subcommand("phase-match", "Solve the phase-matching angle");
  CLI::App* supermodes = app.add_subcommand("supermodes", "Gains and supermode profiles");
  CLI::App* chirp = app.add_subcommand("chirp-scan", "Gain spectrum versus quadratic phase");
  CLI::App* optimize = app.add_subcommand("optimize", "Evolutionary pump-shape optimization");
  CLI::App* cluster = app.add_subcommand("cluster", "Frexel cluster-state nullifiers");
  CLI::App* squeezing = app.add_subcommand("squeezing-scan",
                                           "Nullifier noise versus leading squeezing");
  CLI::App* cmds[6] = {phase_match, supermodes, chirp, optimize, cluster, squeezing};
  for (int i = 0; i < 6; ++i) add_common(cmds[i], args[i]);

  CLI11_PARSE(app, argc, argv);

  try {
    if (phase_match->parsed()) spdc::cmd_phase_match(load_config(args[0]), args[0].out_dir);
    if (supermodes->parsed()) spdc::cmd_supermodes(load_config(args[1]), args[1].out_dir);
    if (chirp->parsed()) spdc::cmd_chirp_scan(load_config(args[2]), args[2].out_dir);
    if (optimize->parsed()) spdc::cmd_optimize(load_config(args[3]), args[3].out_dir);
    if (cluster->parsed()) spdc::cmd_cluster(load_config(args[4]), args[4].out_dir);
    if (squeezing->parsed()) spdc::cmd_squeezing_scan(load_config(args[5]), args[5].out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
