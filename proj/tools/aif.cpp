#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "aif/runner.hpp"

namespace {

void apply_overrides(aif::ExperimentConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::optional<std::size_t>& steps, const std::optional<std::string>& mode,
                     const std::optional<double>& gamma, const std::optional<std::string>& out,
                     const std::optional<bool>& oracle, const std::optional<std::size_t>& cap) {
  if (seed) cfg.seed = *seed;
  if (steps) cfg.steps = *steps;
  if (mode) cfg.mode = aif::parse_agent_mode(*mode);
  if (gamma) cfg.gamma = *gamma;
  if (out) cfg.out_dir = *out;
  if (oracle) cfg.enable_exact_oracle = *oracle;
  if (cap) cfg.enum_cap = *cap;
  cfg.validate();
}

std::vector<aif::AgentMode> parse_modes(const std::string& list) {
  std::vector<aif::AgentMode> modes;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) modes.push_back(aif::parse_agent_mode(item));
  return modes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete active inference experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> steps, cap;
  std::optional<std::string> mode, out, modes;
  std::optional<double> gamma;
  std::optional<bool> oracle;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (YAML)")->required();
    cmd->add_option("--seed", seed, "root seed");
    cmd->add_option("--steps", steps, "number of loop steps");
    cmd->add_option("--gamma", gamma, "inverse temperature");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--enable-exact-oracle", oracle, "compute exact posteriors alongside (true/false)");
    cmd->add_option("--enum-cap", cap, "maximum enumerated assignment count");
  };

  auto* run = app.add_subcommand("run", "run one experiment");
  add_common(run);
  run->add_option("--mode", mode, "exact-induced | variational-induced | active-inference");

  auto* compare = app.add_subcommand("compare", "run several agent modes with the same seed");
  add_common(compare);
  compare->add_option("--modes", modes, "comma-separated modes")
      ->default_str("exact-induced,variational-induced,active-inference");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = aif::load_config(config_path);
    apply_overrides(cfg, seed, steps, mode, gamma, out, oracle, cap);
    if (run->parsed()) {
      for (const auto& p : aif::run_experiment(cfg)) std::cout << p.string() << '\n';
    } else {
      const auto rows =
          aif::compare_modes(cfg, parse_modes(modes.value_or("exact-induced,variational-induced,active-inference")));
      std::filesystem::create_directories(cfg.out_dir);
      const auto path = std::filesystem::path(cfg.out_dir) / "comparison.csv";
      std::ofstream os(path, std::ios::binary);
      if (!os) throw aif::Error("cannot open " + path.string() + " for writing");
      aif::write_comparison_csv(os, rows);
      std::cout << path.string() << '\n';
    }
  } catch (const aif::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
