#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aif/runner.hpp"
#include "oracle.hpp"

using namespace aif;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("aif_runner_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string config_path(const char* name) { return std::string(AIF_CONFIG_DIR) + "/" + name; }

const char* kMinimal = R"(environment:
  env_size: 1
  sensor_size: 1
  action_size: 1
  initial: [1]
  transition: [[[1]]]
  sensor: [[1]]
model:
  env_size: 1
  sensor_size: 1
  action_size: 1
  horizon: {mode: rolling, lookahead: 1}
  theta:
    - {prior: 1, initial: [1], transition: [[[1]]], sensor: [[1]]}
agent:
  rewards: [0.5]
run:
  steps: 1
)";

ExperimentConfig parse(const std::string& text) { return parse_config(YAML::Load(text)); }

std::string expect_config_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return {};
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
  return s;
}

/// Factorizing 2-state world, written as YAML.
std::string factorizing_yaml(const std::string& mode) {
  return R"(environment:
  env_size: 2
  sensor_size: 2
  action_size: 2
  initial: [0.4, 0.6]
  transition:
    - [[0.7, 0.3], [0.7, 0.3]]
    - [[0.2, 0.8], [0.2, 0.8]]
  sensor: [[0.35, 0.65], [0.35, 0.65]]
model:
  env_size: 2
  sensor_size: 2
  action_size: 2
  horizon: {mode: rolling, lookahead: 1}
  theta:
    - prior: 1
      initial: [0.4, 0.6]
      transition:
        - [[0.7, 0.3], [0.7, 0.3]]
        - [[0.2, 0.8], [0.2, 0.8]]
      sensor: [[0.35, 0.65], [0.35, 0.65]]
agent:
  mode: )" + mode + R"(
  gamma: 2
  motivation: negative-expected-entropy
run:
  steps: 4
  seed: 3
)";
}

}  // namespace

TEST(Config, SampleConfigsLoad) {
  for (const char* name : {"bandit.yaml", "minimal.yaml", "two_theta.yaml"}) {
    EXPECT_NO_THROW(load_config(config_path(name))) << name;
  }
  const auto c = load_config(config_path("bandit.yaml"));
  EXPECT_EQ(c.mode, AgentMode::active_inference);
  EXPECT_EQ(c.gamma, 10.0);
  EXPECT_EQ(c.reward_structure().values, (std::vector<double>{0, 1}));
}

TEST(Config, Defaults) {
  const auto c = parse(kMinimal);
  EXPECT_EQ(c.mode, AgentMode::active_inference);
  EXPECT_EQ(c.gamma, 1.0);
  EXPECT_EQ(c.tol, 1e-10);
  EXPECT_EQ(c.max_iters, 500u);
  EXPECT_EQ(c.outer_tol, 1e-8);
  EXPECT_EQ(c.max_outer, 50u);
  EXPECT_EQ(c.enum_cap, kDefaultEnumCap);
  EXPECT_FALSE(c.enable_exact_oracle);
}

TEST(Config, MismatchedSensorSizesNameBothFields) {
  auto text = replace(kMinimal, "  sensor_size: 1\n  action_size: 1\n  initial", "  sensor_size: 2\n  action_size: 1\n  initial");
  text = replace(text, "sensor: [[1]]\nmodel", "sensor: [[0.5, 0.5]]\nmodel");
  const auto msg = expect_config_error(text);
  EXPECT_NE(msg.find("environment.sensor_size"), std::string::npos) << msg;
  EXPECT_NE(msg.find("model.sensor_size"), std::string::npos) << msg;
}

TEST(Config, ErrorsCarryLineNumbers) {
  auto msg = expect_config_error(replace(kMinimal, "sensor: [[1]]\nmodel", "sensor: [[0.7]]\nmodel"));
  EXPECT_NE(msg.find("line 7"), std::string::npos) << msg;
  EXPECT_NE(msg.find("environment.sensor[0]"), std::string::npos) << msg;

  msg = expect_config_error(replace(kMinimal, "  steps: 1", "  steps: 1\n  stepz: 2"));
  EXPECT_NE(msg.find("line 19"), std::string::npos) << msg;
  EXPECT_NE(msg.find("run.stepz"), std::string::npos) << msg;

  msg = expect_config_error(replace(kMinimal, "  steps: 1", "  steps: -1"));
  EXPECT_NE(msg.find("run.steps"), std::string::npos) << msg;

  msg = expect_config_error(replace(kMinimal, "  horizon: {mode: rolling, lookahead: 1}", "  horizon: {mode: sideways}"));
  EXPECT_NE(msg.find("model.horizon.mode"), std::string::npos) << msg;
}

TEST(Config, ModeRequirementsCheckedAtLoad) {
  auto msg = expect_config_error(replace(kMinimal, "  rewards: [0.5]", "  motivation: expected-reward"));
  EXPECT_NE(msg.find("agent.rewards"), std::string::npos) << msg;
  msg = expect_config_error(replace(kMinimal, "  rewards: [0.5]", "  rewards: [0.5, 1]"));
  EXPECT_NE(msg.find("agent.rewards"), std::string::npos) << msg;
  msg = expect_config_error(replace(kMinimal, "  rewards: [0.5]", "  rewards: [0.5]\n  mode: greedy"));
  EXPECT_NE(msg.find("agent.mode"), std::string::npos) << msg;
  msg = expect_config_error(replace(kMinimal, "  rewards: [0.5]", "  rewards: [0.5]\n  gamma: -1"));
  EXPECT_NE(msg.find("gamma"), std::string::npos) << msg;
  EXPECT_NO_THROW(parse(replace(kMinimal, "{mode: rolling, lookahead: 1}", "{mode: fixed, final_step: 0}")));
  msg = expect_config_error(replace(replace(kMinimal, "{mode: rolling, lookahead: 1}", "{mode: fixed, final_step: 0}"),
                                    "steps: 1", "steps: 2"));
  EXPECT_NE(msg.find("final_step"), std::string::npos) << msg;
}

TEST(Config, RewardFactor) {
  auto text = replace(kMinimal, "  sensor: [[1]]\nmodel", "  sensor: [[1]]\n  sensor_factors: [1, 1]\n  reward_factor: 1\nmodel");
  text = replace(text, "  rewards: [0.5]", "  reward_values: [2.5]");
  EXPECT_EQ(parse(text).reward_structure().values, (std::vector<double>{2.5}));
  auto msg = expect_config_error(replace(kMinimal, "  rewards: [0.5]", "  reward_values: [2.5]"));
  EXPECT_NE(msg.find("reward_values"), std::string::npos) << msg;
}

TEST(Config, ModelFromFile) {
  const auto dir = scratch("modelfile");
  {
    std::ofstream(dir / "model.yaml") << "env_size: 1\nsensor_size: 1\naction_size: 1\nhorizon: {mode: rolling, lookahead: 0}\n"
                                         "theta:\n  - {prior: 1, initial: [1], transition: [[[1]]], sensor: [[1]]}\n";
    const auto model_pos = std::string(kMinimal).find("model:");
    const auto agent_pos = std::string(kMinimal).find("agent:");
    std::ofstream(dir / "exp.yaml") << std::string(kMinimal).substr(0, model_pos) << "model: model.yaml\n"
                                    << std::string(kMinimal).substr(agent_pos);
  }
  const auto c = load_config((dir / "exp.yaml").string());
  EXPECT_EQ(c.model.horizon, HorizonMode::rolling(0));
  std::ofstream(dir / "model.yaml") << "env_size: 1\nsensor_size: 1\naction_size: 1\nhorizon: {mode: rolling, lookahead: 0}\n"
                                       "theta:\n  - {prior: 1, initial: [0.5], transition: [[[1]]], sensor: [[1]]}\n";
  try {
    load_config((dir / "exp.yaml").string());
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("model.yaml"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("line 6"), std::string::npos) << e.what();
  }
}

TEST(Config, ManifestRoundTrip) {
  for (const char* name : {"bandit.yaml", "minimal.yaml", "two_theta.yaml"}) {
    const auto c = load_config(config_path(name));
    const auto text = emit_config(c);
    EXPECT_EQ(emit_config(parse(text)), text) << name;
  }
}

TEST(RunExperiment, MinimalEveryModeWritesThreeFiles) {
  for (auto mode : {AgentMode::exact_induced, AgentMode::variational_induced, AgentMode::active_inference}) {
    auto c = parse(kMinimal);
    c.mode = mode;
    c.out_dir = scratch(std::string("min_") + to_string(mode)).string();
    const auto files = run_experiment(c);
    EXPECT_EQ(files.size(), 3u);
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(c.out_dir)) n += e.is_regular_file();
    EXPECT_EQ(n, 3u);
  }
}

TEST(RunExperiment, DeterministicDiagnostics) {
  auto c = load_config(config_path("two_theta.yaml"));
  c.steps = 3;
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  c.out_dir = a.string();
  run_experiment(c);
  c.out_dir = b.string();
  run_experiment(c);
  for (const char* f : {"diagnostics.jsonl", "trajectory.jsonl", "geometry.csv"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(RunExperiment, RerunFromManifestReproducesOutputs) {
  auto c = load_config(config_path("two_theta.yaml"));
  c.steps = 3;
  c.seed = 99;
  c.out_dir = scratch("manifest_a").string();
  run_experiment(c);
  auto again = load_config((fs::path(c.out_dir) / "manifest.yaml").string());
  const auto first_dir = c.out_dir;
  EXPECT_EQ(again.seed, 99u);
  EXPECT_EQ(again.steps, 3u);
  again.out_dir = scratch("manifest_b").string();
  run_experiment(again);
  for (const char* f : {"diagnostics.jsonl", "trajectory.jsonl", "geometry.csv"})
    EXPECT_EQ(slurp(fs::path(first_dir) / f), slurp(fs::path(again.out_dir) / f)) << f;
}

TEST(RunExperiment, DiagnosticRecordFields) {
  auto c = load_config(config_path("bandit.yaml"));
  c.steps = 2;
  const auto res = run_mode(c);
  const auto& d = res.trajectory.steps[1].diagnostics;
  for (const char* k : {"t", "free_energy", "D1", "D2", "total", "joint_form", "policy", "r_induced", "action"})
    EXPECT_TRUE(d.contains(k)) << k;
  EXPECT_NEAR(d["joint_form"].get<double>(), d["total"].get<double>(), 1e-9);
  EXPECT_EQ(res.geometry.size(), 2u);
}

TEST(RunExperiment, RuntimeErrorsCarryStep) {
  auto c = load_config(config_path("bandit.yaml"));
  c.enum_cap = 1;
  try {
    run_mode(c);
    FAIL();
  } catch (const StepError& e) {
    EXPECT_EQ(e.step(), 0u);
  }
}

TEST(CompareModes, SingleActionWorldAgrees) {
  auto c = parse(kMinimal);
  c.steps = 3;
  const auto rows = compare_modes(c, {AgentMode::exact_induced, AgentMode::variational_induced, AgentMode::active_inference});
  ASSERT_EQ(rows.size(), 9u);
  for (const auto& r : rows) EXPECT_EQ(r.action, 0u);
}

TEST(CompareModes, FactorizingModelExactAndVariationalPoliciesMatch) {
  const auto c = parse(factorizing_yaml("exact-induced"));
  const auto rows = compare_modes(c, {AgentMode::exact_induced, AgentMode::variational_induced});
  ASSERT_EQ(rows.size(), 8u);
  for (std::size_t t = 0; t < 4; ++t) {
    const auto& a = rows[t];
    const auto& b = rows[4 + t];
    ASSERT_EQ(a.step, b.step);
    ASSERT_EQ(a.policy.size(), b.policy.size());
    for (std::size_t i = 0; i < a.policy.size(); ++i) EXPECT_NEAR(a.policy[i], b.policy[i], 1e-6);
    // same seed split: identical environment draws and identical sampled actions
    EXPECT_EQ(a.action, b.action);
  }
}

TEST(CompareModes, BanditGreedySequencesAgreeAfterFirstObservation) {
  auto c = load_config(config_path("bandit.yaml"));
  c.steps = 4;
  const auto rows = compare_modes(c, {AgentMode::exact_induced, AgentMode::variational_induced, AgentMode::active_inference});
  ASSERT_EQ(rows.size(), 12u);
  for (std::size_t t = 1; t < 4; ++t) {
    EXPECT_EQ(rows[t].greedy_sequence, "0");
    EXPECT_EQ(rows[4 + t].greedy_sequence, "0");
    EXPECT_EQ(rows[8 + t].greedy_sequence, "0");
  }
  std::ostringstream os;
  write_comparison_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), kComparisonCsvHeader);
}

TEST(Cli, ExitCodesAndOverrides) {
  const auto dir = scratch("cli");
  const std::string cli = AIF_CLI_PATH;
  const auto quiet = " > " + (dir / "log.txt").string() + " 2>&1";
  EXPECT_EQ(std::system((cli + " run --config " + config_path("minimal.yaml") + " --out " + (dir / "ok").string() +
                         " --seed 5 --steps 2 --mode active-inference --gamma 0.5 --enable-exact-oracle true --enum-cap 5000" +
                         quiet)
                            .c_str()),
            0);
  const auto manifest = load_config((dir / "ok" / "manifest.yaml").string());
  EXPECT_EQ(manifest.seed, 5u);
  EXPECT_EQ(manifest.steps, 2u);
  EXPECT_EQ(manifest.mode, AgentMode::active_inference);
  EXPECT_EQ(manifest.gamma, 0.5);
  EXPECT_TRUE(manifest.enable_exact_oracle);
  EXPECT_EQ(manifest.enum_cap, 5000u);
  EXPECT_TRUE(fs::exists(dir / "ok" / "geometry.csv"));

  std::ofstream(dir / "bad.yaml") << replace(kMinimal, "sensor: [[1]]\nmodel", "sensor: [[0.7]]\nmodel");
  EXPECT_NE(std::system((cli + " run --config " + (dir / "bad.yaml").string() + quiet).c_str()), 0);
  EXPECT_NE(slurp(dir / "log.txt").find("line 7"), std::string::npos);
  EXPECT_NE(std::system((cli + " run" + quiet).c_str()), 0);

  EXPECT_EQ(std::system((cli + " compare --config " + config_path("bandit.yaml") + " --steps 2 --out " +
                         (dir / "cmp").string() + " --modes exact-induced,active-inference" + quiet)
                            .c_str()),
            0);
  EXPECT_TRUE(fs::exists(dir / "cmp" / "comparison.csv"));
}
