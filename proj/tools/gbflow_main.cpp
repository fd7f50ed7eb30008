#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gbflow/commands.hpp"
#include "gbflow/errors.hpp"
#include "gbflow/version.hpp"

namespace {

struct CommonFlags {
  std::string config_file;
  std::map<std::string, std::string> overrides;
};

void add_config_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_file, "key=value config file");
  const auto bind = [&flags, cmd](const std::string& flag, const std::string& key,
                                  const std::string& help) {
    cmd->add_option_function<std::string>(
        flag,
        [&flags, key](const std::string& value) { flags.overrides[key] = value; },
        help);
  };
  bind("--mode", "mode", "graph or curve");
  bind("--n", "n", "graph grid points");
  bind("--m", "m", "curve vertices");
  bind("--ic", "ic", "initial condition preset or sample file");
  bind("--alpha0", "alpha0", "initial misorientation");
  bind("--sigma", "sigma", "sigma model kind");
  bind("--mu", "mu", "mobility");
  bind("--gamma", "gamma", "misorientation relaxation rate");
  bind("--dt", "dt", "time step or \"auto\"");
  bind("--t-end", "t_end", "final time");
  bind("--snapshot-every", "snapshot_every", "steps between snapshots");
  bind("--reparam-every", "reparam_every", "steps between curve redistributions");
  bind("--cfl-safety", "cfl_safety", "stability safety factor in (0,1]");
  bind("--seed", "seed", "seed for randomized suites");
  bind("--out", "out", "run directory");
  cmd->add_flag_callback(
      "--force-dt", [&flags]() { flags.overrides["force_dt"] = "1"; },
      "use dt as given instead of capping at stable_dt");
}

gbflow::KeyValueConfig load_key_values(const CommonFlags& flags) {
  gbflow::KeyValueConfig kv;
  if (!flags.config_file.empty())
    kv = gbflow::KeyValueConfig::parse_file(flags.config_file);
  for (const auto& [key, value] : flags.overrides) kv.apply_override(key, value);
  return kv;
}

gbflow::RunConfig load_config(const CommonFlags& flags) {
  return gbflow::RunConfig::from_key_values(load_key_values(flags));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gbflow: coupled grain-boundary curve shortening with evolving "
               "misorientation"};
  app.set_version_flag("--version", gbflow::kVersion);
  app.require_subcommand(1);

  CommonFlags run_flags, verify_flags, conv_flags, sweep_flags;
  std::string verify_dir, plot_dir;
  int workers = 1;

  CLI::App* cmd_run = app.add_subcommand("run", "simulate and write a run directory");
  add_config_flags(cmd_run, run_flags);

  CLI::App* cmd_verify =
      app.add_subcommand("verify", "run (or load) a simulation and check every "
                                   "applicable identity and bound");
  add_config_flags(cmd_verify, verify_flags);
  cmd_verify->add_option("--dir", verify_dir, "verify a saved run directory instead");

  CLI::App* cmd_conv =
      app.add_subcommand("convergence", "refinement ladder with measured orders");
  add_config_flags(cmd_conv, conv_flags);

  CLI::App* cmd_plot = app.add_subcommand("plot", "emit SVG plots for a run directory");
  cmd_plot->add_option("dir", plot_dir, "run directory")->required();

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "cartesian parameter sweep (comma-separated values)");
  add_config_flags(cmd_sweep, sweep_flags);
  cmd_sweep->add_option("--workers", workers, "parallel run workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : gbflow::cli::kUsage;
  }

  try {
    if (cmd_run->parsed())
      return gbflow::cli::cmd_run(load_config(run_flags), std::cout);
    if (cmd_verify->parsed()) {
      if (!verify_dir.empty())
        return gbflow::cli::cmd_verify_dir(verify_dir, std::cout);
      return gbflow::cli::cmd_verify(load_config(verify_flags), std::cout);
    }
    if (cmd_conv->parsed())
      return gbflow::cli::cmd_convergence(load_config(conv_flags), std::cout);
    if (cmd_plot->parsed()) return gbflow::cli::cmd_plot(plot_dir, std::cout);
    if (cmd_sweep->parsed())
      return gbflow::cli::cmd_sweep(load_key_values(sweep_flags), workers, std::cout);
  } catch (const gbflow::ConfigError& e) {
    std::cerr << "error (usage): " << e.what() << '\n';
    return gbflow::cli::kUsage;
  } catch (const gbflow::IoError& e) {
    std::cerr << "error (io): " << e.what() << '\n';
    return gbflow::cli::kIo;
  } catch (const gbflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gbflow::cli::kCheckFailure;
  }
  return gbflow::cli::kUsage;
}
