#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kgsig/errors.hpp"
#include "kgsig/experiments.hpp"

namespace {

template <typename T>
void overlay(const std::optional<T>& flag, T& target) {
  if (flag) target = *flag;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bosonic signature operator toolkit for Klein-Gordon fields on a Dirichlet lattice"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "results";
  bool quiet = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol, length, mass, m_lower, m_upper, delta, dt, t_max, window;
  std::optional<int> num_points, mass_nodes, trials, state_trials, points;

  app.add_option("--config", config_path, "INI-style config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--tol", tol, "Time-window convergence tolerance");
  app.add_flag("--quiet", quiet, "Do not print the result summary");
  app.add_option("--N", num_points, "Number of interior grid points");
  app.add_option("--L", length, "Box length");
  app.add_option("--mass", mass, "Mass m");
  app.add_option("--m-lower", m_lower, "Lower end of the mass interval");
  app.add_option("--m-upper", m_upper, "Upper end of the mass interval");
  app.add_option("--delta", delta, "Mass weight half width");
  app.add_option("--mass-nodes", mass_nodes, "Gauss-Legendre nodes in the mass integral");
  app.add_option("--dt", dt, "Time step");
  app.add_option("--t-max", t_max, "Time-window ceiling");
  app.add_option("--window", window, "Half width of the test-function time window");
  app.add_option("--trials", trials, "Random trials");
  app.add_option("--state-trials", state_trials, "Random test functions for the state checks");
  app.add_option("--points", points, "Number of points for the wick command");

  for (const auto& name : kgsig::command_names()) app.add_subcommand(name, "Run the " + name + " experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  kgsig::ExperimentConfig config;
  try {
    if (!config_path.empty()) config = kgsig::load_config(config_path, config);
  } catch (const kgsig::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  overlay(seed, config.seed);
  overlay(tol, config.tol);
  overlay(num_points, config.num_points);
  overlay(length, config.length);
  overlay(mass, config.mass);
  overlay(m_lower, config.m_lower);
  overlay(m_upper, config.m_upper);
  overlay(delta, config.delta);
  overlay(mass_nodes, config.mass_nodes);
  overlay(dt, config.dt);
  overlay(t_max, config.t_max);
  overlay(window, config.window);
  overlay(trials, config.trials);
  overlay(state_trials, config.state_trials);
  overlay(points, config.wick_points);

  const std::string command = app.get_subcommands().front()->get_name();
  return kgsig::run(command, config, out_dir, quiet);
}
