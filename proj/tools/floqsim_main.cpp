#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "floqsim/commands.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 numerical guard tripped, 4 I/O error.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitIo = 4;

struct Options {
  std::string config_path;
  std::string out_path;
  std::optional<int> steps;
  std::optional<double> theta;
  std::uint64_t seed = 1;
};

floqsim::ExperimentConfig load(const Options& opt) {
  floqsim::ExperimentConfig cfg = floqsim::load_config(opt.config_path);
  if (!opt.out_path.empty()) cfg.out = opt.out_path;
  if (opt.steps) cfg.steps_per_period = *opt.steps;
  if (opt.theta) cfg.theta = *opt.theta;
  return cfg;
}

int run_to_output(const floqsim::ExperimentConfig& cfg, bool allow_stdout,
                  const std::function<void(std::ostream&)>& body) {
  if (cfg.out.empty()) {
    if (!allow_stdout) {
      throw floqsim::config_error("no output path: set 'out' in the config or pass --out");
    }
    body(std::cout);
    return kExitOk;
  }
  std::ostringstream buffer;
  body(buffer);
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot open output file '" + cfg.out + "'");
  }
  out << buffer.str();
  out.flush();
  if (!out) {
    throw std::ios_base::failure("write to '" + cfg.out + "' failed");
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for periodically driven quantum systems with slowly varying drive "
               "operators: exact propagation, adiabatic effective evolution, and loop holonomies"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  Options opt;
  app.add_option("--config", opt.config_path, "experiment config file")->required();
  app.add_option("--out", opt.out_path, "output file (overrides 'out' in the config)");
  int steps_flag = 0;
  auto* steps_opt = app.add_option("--steps", steps_flag, "override steps_per_period");
  double theta_flag = 0.0;
  auto* theta_opt = app.add_option("--theta", theta_flag, "override drive phase offset (radians)");
  app.add_option("--seed", opt.seed, "seed for random draws (wcheck)");

  auto* evolve = app.add_subcommand("evolve", "time series of the state over the schedule");
  auto* fig2 = app.add_subcommand("fig2", "single-loop measurement sweep over a grid of a");
  auto* holonomy = app.add_subcommand("holonomy", "loop holonomies and their commutators");
  auto* wcheck = app.add_subcommand("wcheck", "cross-check the three W computations");
  auto* echo = app.add_subcommand("echo", "re-emit the normalized config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (steps_opt->count() > 0) opt.steps = steps_flag;
    if (theta_opt->count() > 0) opt.theta = theta_flag;
    const floqsim::ExperimentConfig cfg = load(opt);

    if (evolve->parsed()) {
      return run_to_output(cfg, false, [&](std::ostream& os) { floqsim::cmd_evolve(cfg, os); });
    }
    if (fig2->parsed()) {
      return run_to_output(cfg, false, [&](std::ostream& os) { floqsim::cmd_fig2(cfg, os); });
    }
    if (holonomy->parsed()) {
      return run_to_output(cfg, false,
                           [&](std::ostream& os) { floqsim::cmd_holonomy(cfg, os, std::cerr); });
    }
    if (wcheck->parsed()) {
      return run_to_output(
          cfg, false, [&](std::ostream& os) { floqsim::cmd_wcheck(cfg, opt.seed, os, std::cerr); });
    }
    if (echo->parsed()) {
      return run_to_output(cfg, true, [&](std::ostream& os) { floqsim::cmd_echo(cfg, os); });
    }
    return kExitConfig;
  } catch (const floqsim::numeric_guard_error& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const floqsim::config_error& e) {
    std::cerr << "config error (" << opt.config_path << "): " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
