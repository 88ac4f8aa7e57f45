#pragma once

// Experiment configuration: a single YAML document with sections
// environment, model, agent, run, output. Every declared invariant is checked
// at load time and errors name the line and field path.

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>

#include <yaml-cpp/yaml.h>

#include "aif/active_inference.hpp"
#include "aif/generative_model.hpp"
#include "aif/motivation.hpp"
#include "aif/pa_loop.hpp"

namespace aif {

enum class AgentMode { exact_induced, variational_induced, active_inference };
enum class MotivationKind { expected_reward, negative_expected_entropy };

inline const char* to_string(AgentMode m) {
  switch (m) {
    case AgentMode::exact_induced: return "exact-induced";
    case AgentMode::variational_induced: return "variational-induced";
    case AgentMode::active_inference: return "active-inference";
  }
  return "?";
}

inline AgentMode parse_agent_mode(const std::string& s) {
  if (s == "exact-induced") return AgentMode::exact_induced;
  if (s == "variational-induced") return AgentMode::variational_induced;
  if (s == "active-inference") return AgentMode::active_inference;
  throw ConfigError("unknown agent mode '" + s + "' (expected exact-induced, variational-induced or active-inference)");
}

inline const char* to_string(MotivationKind m) {
  return m == MotivationKind::expected_reward ? "expected-reward" : "negative-expected-entropy";
}

struct ExperimentConfig {
  EnvironmentSpec environment;
  GenerativeModelSpec model;

  AgentMode mode = AgentMode::active_inference;
  MotivationKind motivation = MotivationKind::expected_reward;
  /// Reward per sensor symbol.
  std::optional<std::vector<double>> rewards;
  /// Reward per symbol of the environment's reward factor; expanded to `rewards`.
  std::optional<std::vector<double>> reward_factor_values;
  double gamma = 1.0;

  // Optimizer settings.
  double tol = 1e-10;
  std::size_t max_iters = 500;
  InitMode init = InitMode::uniform;
  double init_scale = 1.0;
  double outer_tol = 1e-8;
  std::size_t max_outer = 50;
  std::size_t sweeps_per_outer = 10;

  std::size_t steps = 1;
  std::uint64_t seed = 0;
  bool enable_exact_oracle = false;
  std::size_t enum_cap = kDefaultEnumCap;

  std::string out_dir = "out";

  RewardStructure reward_structure() const {
    if (rewards) return {*rewards};
    if (reward_factor_values)
      return RewardStructure::from_factor(*environment.sensor_factors, *environment.sensor_factors->reward_factor,
                                          *reward_factor_values);
    throw ConfigError("agent: no reward structure configured");
  }

  std::unique_ptr<MotivationFunctional> make_motivation() const {
    if (motivation == MotivationKind::expected_reward) return std::make_unique<ExpectedReward>(reward_structure());
    return std::make_unique<NegativeExpectedEntropy>();
  }

  ActiveInferenceOptions optimizer_options(std::size_t step) const {
    ActiveInferenceOptions o;
    o.variational.cavi.tol = tol;
    o.variational.cavi.max_iters = max_iters;
    o.variational.init = init;
    o.variational.init_scale = init_scale;
    o.variational.init_seed = derive_seed(seed, "cavi-init", step);
    o.variational.exact_oracle = enable_exact_oracle;
    o.variational.enum_cap = enum_cap;
    o.outer_tol = outer_tol;
    o.max_outer = max_outer;
    o.sweeps_per_outer = sweeps_per_outer;
    return o;
  }

  /// Cross-section checks; section-local checks happen while parsing.
  void validate() const {
    environment.validate();
    model.validate();
    auto mismatch = [](const char* what, std::size_t env, std::size_t mod) {
      throw ConfigError(std::string("environment.") + what + " (" + std::to_string(env) + ") does not match model." +
                        what + " (" + std::to_string(mod) + ")");
    };
    if (environment.sensor_alphabet.size() != model.sensor_alphabet.size())
      mismatch("sensor_size", environment.sensor_alphabet.size(), model.sensor_alphabet.size());
    if (environment.action_alphabet.size() != model.action_alphabet.size())
      mismatch("action_size", environment.action_alphabet.size(), model.action_alphabet.size());
    if (steps == 0) throw ConfigError("run.steps must be >= 1");
    if (model.horizon.kind == HorizonMode::Kind::fixed && steps > model.horizon.value + 1)
      throw ConfigError("run.steps (" + std::to_string(steps) + ") exceeds model.horizon.final_step + 1 (" +
                        std::to_string(model.horizon.value + 1) + ")");
    if (!std::isfinite(gamma) || gamma < 0.0) throw ConfigError("agent.gamma must be finite and >= 0");
    if (!(tol > 0.0)) throw ConfigError("agent.tol must be > 0");
    if (!(outer_tol > 0.0)) throw ConfigError("agent.outer_tol must be > 0");
    if (max_iters == 0 || max_outer == 0 || sweeps_per_outer == 0)
      throw ConfigError("agent.max_iters, agent.max_outer and agent.sweeps_per_outer must be >= 1");
    if (!(init_scale >= 0.0)) throw ConfigError("agent.init_scale must be >= 0");
    if (enum_cap == 0) throw ConfigError("run.enum_cap must be >= 1");
    if (rewards && reward_factor_values) throw ConfigError("agent: give either rewards or reward_values, not both");
    if (rewards && rewards->size() != model.sensor_alphabet.size())
      throw ConfigError("agent.rewards has " + std::to_string(rewards->size()) + " entries, model.sensor_size is " +
                        std::to_string(model.sensor_alphabet.size()));
    if (reward_factor_values && !(environment.sensor_factors && environment.sensor_factors->reward_factor))
      throw ConfigError("agent.reward_values requires environment.sensor_factors and environment.reward_factor");
    if (motivation == MotivationKind::expected_reward && !rewards && !reward_factor_values)
      throw ConfigError("agent.motivation expected-reward requires agent.rewards or agent.reward_values");
    if (reward_factor_values) (void)reward_structure();
  }
};

namespace detail::yaml {

inline std::string line_of(const YAML::Node& n) {
  const auto m = n.Mark();
  return m.is_null() ? std::string("?") : std::to_string(m.line + 1);
}

[[noreturn]] inline void fail(const YAML::Node& n, const std::string& path, const std::string& msg) {
  throw ConfigError("line " + line_of(n) + ": " + path + ": " + msg);
}

inline YAML::Node require(const YAML::Node& parent, const char* key, const std::string& path) {
  const auto n = parent[key];
  if (!n) fail(parent, path + "." + key, "required field is missing");
  return n;
}

inline void check_keys(const YAML::Node& map, std::initializer_list<const char*> allowed, const std::string& path) {
  if (!map.IsMap()) fail(map, path, "expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) fail(kv.first, path.empty() ? key : path + "." + key, "unknown field");
  }
}

inline double real(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) fail(n, path, "expected a number");
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    fail(n, path, "expected a number, got '" + n.Scalar() + "'");
  }
}

inline std::uint64_t unsigned_int(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) fail(n, path, "expected a non-negative integer");
  const auto& s = n.Scalar();
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    fail(n, path, "expected a non-negative integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    fail(n, path, "integer out of range");
  }
}

inline bool boolean(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) fail(n, path, "expected a boolean");
  try {
    return n.as<bool>();
  } catch (const YAML::Exception&) {
    fail(n, path, "expected a boolean, got '" + n.Scalar() + "'");
  }
}

inline std::string text(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) fail(n, path, "expected a string");
  return n.Scalar();
}

inline std::vector<double> reals(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence()) fail(n, path, "expected a list of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < n.size(); ++i) v.push_back(real(n[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

inline Categorical categorical(const YAML::Node& n, const std::string& path, std::size_t expected_size) {
  auto v = reals(n, path);
  if (v.size() != expected_size)
    fail(n, path, "expected " + std::to_string(expected_size) + " entries, got " + std::to_string(v.size()));
  try {
    return Categorical(std::move(v));
  } catch (const Error& ex) {
    fail(n, path, ex.what());
  }
}

inline KernelRows rows(const YAML::Node& n, const std::string& path, std::size_t n_rows, std::size_t row_size) {
  if (!n.IsSequence()) fail(n, path, "expected a list of rows");
  if (n.size() != n_rows) fail(n, path, "expected " + std::to_string(n_rows) + " rows, got " + std::to_string(n.size()));
  KernelRows out;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.push_back(categorical(n[i], path + "[" + std::to_string(i) + "]", row_size));
  return out;
}

inline std::vector<KernelRows> blocks(const YAML::Node& n, const std::string& path, std::size_t n_blocks,
                                      std::size_t n_rows, std::size_t row_size) {
  if (!n.IsSequence()) fail(n, path, "expected one block of rows per action");
  if (n.size() != n_blocks)
    fail(n, path, "expected " + std::to_string(n_blocks) + " blocks, got " + std::to_string(n.size()));
  std::vector<KernelRows> out;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.push_back(rows(n[i], path + "[" + std::to_string(i) + "]", n_rows, row_size));
  return out;
}

inline Alphabet alphabet(const YAML::Node& parent, const char* key, const std::string& path) {
  const auto n = require(parent, key, path);
  const auto v = unsigned_int(n, path + "." + key);
  if (v == 0) fail(n, path + "." + key, "alphabet size must be >= 1");
  return Alphabet(v);
}

}  // namespace detail::yaml

inline EnvironmentSpec parse_environment(const YAML::Node& n, const std::string& path = "environment") {
  namespace y = detail::yaml;
  y::check_keys(n, {"env_size", "sensor_size", "action_size", "initial", "transition", "sensor", "sensor_factors",
                    "reward_factor"},
                path);
  EnvironmentSpec e;
  e.env_alphabet = y::alphabet(n, "env_size", path);
  e.sensor_alphabet = y::alphabet(n, "sensor_size", path);
  e.action_alphabet = y::alphabet(n, "action_size", path);
  const auto ne = e.env_alphabet.size();
  e.initial = y::categorical(y::require(n, "initial", path), path + ".initial", ne);
  e.transition = y::blocks(y::require(n, "transition", path), path + ".transition", e.action_alphabet.size(), ne, ne);
  e.sensor = y::rows(y::require(n, "sensor", path), path + ".sensor", ne, e.sensor_alphabet.size());
  if (n["sensor_factors"]) {
    SensorFactorization f;
    const auto fn = n["sensor_factors"];
    if (!fn.IsSequence() || fn.size() == 0) y::fail(fn, path + ".sensor_factors", "expected a non-empty list of sizes");
    for (std::size_t i = 0; i < fn.size(); ++i) {
      const auto v = y::unsigned_int(fn[i], path + ".sensor_factors[" + std::to_string(i) + "]");
      if (v == 0) y::fail(fn[i], path + ".sensor_factors", "factor sizes must be >= 1");
      f.factor_sizes.push_back(v);
    }
    if (f.product() != e.sensor_alphabet.size())
      y::fail(fn, path + ".sensor_factors", "product of factor sizes must equal sensor_size");
    if (n["reward_factor"]) {
      const auto rf = y::unsigned_int(n["reward_factor"], path + ".reward_factor");
      if (rf >= f.factor_sizes.size()) y::fail(n["reward_factor"], path + ".reward_factor", "factor index out of range");
      f.reward_factor = rf;
    }
    e.sensor_factors = f;
  } else if (n["reward_factor"]) {
    y::fail(n["reward_factor"], path + ".reward_factor", "requires sensor_factors");
  }
  return e;
}

inline GenerativeModelSpec parse_model(const YAML::Node& n, const std::string& path = "model") {
  namespace y = detail::yaml;
  y::check_keys(n, {"env_size", "sensor_size", "action_size", "horizon", "theta"}, path);
  GenerativeModelSpec m;
  m.env_alphabet = y::alphabet(n, "env_size", path);
  m.sensor_alphabet = y::alphabet(n, "sensor_size", path);
  m.action_alphabet = y::alphabet(n, "action_size", path);
  const auto ne = m.env_alphabet.size();

  const auto h = y::require(n, "horizon", path);
  const auto hp = path + ".horizon";
  y::check_keys(h, {"mode", "lookahead", "final_step"}, hp);
  const auto mode = y::text(y::require(h, "mode", hp), hp + ".mode");
  if (mode == "rolling") {
    if (h["final_step"]) y::fail(h, hp, "rolling mode takes lookahead, not final_step");
    m.horizon = HorizonMode::rolling(y::unsigned_int(y::require(h, "lookahead", hp), hp + ".lookahead"));
  } else if (mode == "fixed") {
    if (h["lookahead"]) y::fail(h, hp, "fixed mode takes final_step, not lookahead");
    m.horizon = HorizonMode::fixed(y::unsigned_int(y::require(h, "final_step", hp), hp + ".final_step"));
  } else {
    y::fail(h["mode"], hp + ".mode", "expected 'rolling' or 'fixed'");
  }

  const auto th = y::require(n, "theta", path);
  if (!th.IsSequence() || th.size() == 0) y::fail(th, path + ".theta", "expected a non-empty list of theta points");
  std::vector<double> prior;
  for (std::size_t k = 0; k < th.size(); ++k) {
    const auto p = path + ".theta[" + std::to_string(k) + "]";
    y::check_keys(th[k], {"prior", "initial", "transition", "sensor"}, p);
    prior.push_back(y::real(y::require(th[k], "prior", p), p + ".prior"));
    ThetaPoint pt;
    pt.initial = y::categorical(y::require(th[k], "initial", p), p + ".initial", ne);
    pt.transition = y::blocks(y::require(th[k], "transition", p), p + ".transition", m.action_alphabet.size(), ne, ne);
    pt.sensor = y::rows(y::require(th[k], "sensor", p), p + ".sensor", ne, m.sensor_alphabet.size());
    m.theta.points.push_back(std::move(pt));
  }
  try {
    m.theta.prior = Categorical(prior);
  } catch (const Error& ex) {
    y::fail(th, path + ".theta[*].prior", ex.what());
  }
  return m;
}

/// Standalone model specification file: the model section as a YAML document.
inline GenerativeModelSpec load_model_spec(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
  try {
    return parse_model(root, "model");
  } catch (const ConfigError& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
}

/// `base_dir` resolves a model given as a file path.
inline ExperimentConfig parse_config(const YAML::Node& root, const std::filesystem::path& base_dir = {}) {
  namespace y = detail::yaml;
  y::check_keys(root, {"environment", "model", "agent", "run", "output"}, "");
  ExperimentConfig c;
  c.environment = parse_environment(y::require(root, "environment", "config"));
  const auto mn = y::require(root, "model", "config");
  if (mn.IsScalar()) {
    c.model = load_model_spec((base_dir / mn.Scalar()).string());
  } else {
    c.model = parse_model(mn);
  }

  if (const auto a = root["agent"]) {
    y::check_keys(a, {"mode", "gamma", "motivation", "rewards", "reward_values", "tol", "max_iters", "init",
                      "init_scale", "outer_tol", "max_outer", "sweeps_per_outer"},
                  "agent");
    if (a["mode"]) {
      try {
        c.mode = parse_agent_mode(y::text(a["mode"], "agent.mode"));
      } catch (const ConfigError& ex) {
        y::fail(a["mode"], "agent.mode", ex.what());
      }
    }
    if (a["gamma"]) c.gamma = y::real(a["gamma"], "agent.gamma");
    if (a["motivation"]) {
      const auto m = y::text(a["motivation"], "agent.motivation");
      if (m == "expected-reward") c.motivation = MotivationKind::expected_reward;
      else if (m == "negative-expected-entropy") c.motivation = MotivationKind::negative_expected_entropy;
      else y::fail(a["motivation"], "agent.motivation", "expected 'expected-reward' or 'negative-expected-entropy'");
    }
    if (a["rewards"]) c.rewards = y::reals(a["rewards"], "agent.rewards");
    if (a["reward_values"]) c.reward_factor_values = y::reals(a["reward_values"], "agent.reward_values");
    if (a["tol"]) c.tol = y::real(a["tol"], "agent.tol");
    if (a["max_iters"]) c.max_iters = y::unsigned_int(a["max_iters"], "agent.max_iters");
    if (a["init"]) {
      const auto s = y::text(a["init"], "agent.init");
      if (s == "uniform") c.init = InitMode::uniform;
      else if (s == "perturbed") c.init = InitMode::perturbed;
      else y::fail(a["init"], "agent.init", "expected 'uniform' or 'perturbed'");
    }
    if (a["init_scale"]) c.init_scale = y::real(a["init_scale"], "agent.init_scale");
    if (a["outer_tol"]) c.outer_tol = y::real(a["outer_tol"], "agent.outer_tol");
    if (a["max_outer"]) c.max_outer = y::unsigned_int(a["max_outer"], "agent.max_outer");
    if (a["sweeps_per_outer"]) c.sweeps_per_outer = y::unsigned_int(a["sweeps_per_outer"], "agent.sweeps_per_outer");
  }
  if (const auto r = root["run"]) {
    y::check_keys(r, {"steps", "seed", "enable_exact_oracle", "enum_cap"}, "run");
    if (r["steps"]) c.steps = y::unsigned_int(r["steps"], "run.steps");
    if (r["seed"]) c.seed = y::unsigned_int(r["seed"], "run.seed");
    if (r["enable_exact_oracle"]) c.enable_exact_oracle = y::boolean(r["enable_exact_oracle"], "run.enable_exact_oracle");
    if (r["enum_cap"]) c.enum_cap = y::unsigned_int(r["enum_cap"], "run.enum_cap");
  }
  if (const auto o = root["output"]) {
    y::check_keys(o, {"dir"}, "output");
    if (o["dir"]) c.out_dir = y::text(o["dir"], "output.dir");
  }
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& ex) {
    throw ConfigError(ex.what());
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
  try {
    return parse_config(root, std::filesystem::path(path).parent_path());
  } catch (const ConfigError& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
}

namespace detail::yaml {

inline void emit_rows(YAML::Emitter& out, const KernelRows& rows) {
  out << YAML::BeginSeq;
  for (const auto& r : rows) out << YAML::Flow << std::vector<double>(r.probs().begin(), r.probs().end());
  out << YAML::EndSeq;
}

inline void emit_blocks(YAML::Emitter& out, const std::vector<KernelRows>& blocks) {
  out << YAML::BeginSeq;
  for (const auto& b : blocks) emit_rows(out, b);
  out << YAML::EndSeq;
}

inline std::vector<double> as_vector(const Categorical& c) { return {c.probs().begin(), c.probs().end()}; }

}  // namespace detail::yaml

/// Fully resolved config as YAML; loading it back reproduces the run.
inline std::string emit_config(const ExperimentConfig& c) {
  namespace y = detail::yaml;
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  const auto& e = c.environment;
  out << YAML::Key << "environment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "env_size" << YAML::Value << e.env_alphabet.size();
  out << YAML::Key << "sensor_size" << YAML::Value << e.sensor_alphabet.size();
  out << YAML::Key << "action_size" << YAML::Value << e.action_alphabet.size();
  out << YAML::Key << "initial" << YAML::Value << YAML::Flow << y::as_vector(e.initial);
  out << YAML::Key << "transition" << YAML::Value;
  y::emit_blocks(out, e.transition);
  out << YAML::Key << "sensor" << YAML::Value;
  y::emit_rows(out, e.sensor);
  if (e.sensor_factors) {
    out << YAML::Key << "sensor_factors" << YAML::Value << YAML::Flow << e.sensor_factors->factor_sizes;
    if (e.sensor_factors->reward_factor) out << YAML::Key << "reward_factor" << YAML::Value << *e.sensor_factors->reward_factor;
  }
  out << YAML::EndMap;

  const auto& m = c.model;
  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "env_size" << YAML::Value << m.env_alphabet.size();
  out << YAML::Key << "sensor_size" << YAML::Value << m.sensor_alphabet.size();
  out << YAML::Key << "action_size" << YAML::Value << m.action_alphabet.size();
  out << YAML::Key << "horizon" << YAML::Value << YAML::BeginMap;
  if (m.horizon.kind == HorizonMode::Kind::rolling)
    out << YAML::Key << "mode" << YAML::Value << "rolling" << YAML::Key << "lookahead" << YAML::Value << m.horizon.value;
  else
    out << YAML::Key << "mode" << YAML::Value << "fixed" << YAML::Key << "final_step" << YAML::Value << m.horizon.value;
  out << YAML::EndMap;
  out << YAML::Key << "theta" << YAML::Value << YAML::BeginSeq;
  for (std::size_t k = 0; k < m.theta.points.size(); ++k) {
    const auto& p = m.theta.points[k];
    out << YAML::BeginMap;
    out << YAML::Key << "prior" << YAML::Value << m.theta.prior[k];
    out << YAML::Key << "initial" << YAML::Value << YAML::Flow << y::as_vector(p.initial);
    out << YAML::Key << "transition" << YAML::Value;
    y::emit_blocks(out, p.transition);
    out << YAML::Key << "sensor" << YAML::Value;
    y::emit_rows(out, p.sensor);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "agent" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << to_string(c.mode);
  out << YAML::Key << "gamma" << YAML::Value << c.gamma;
  out << YAML::Key << "motivation" << YAML::Value << to_string(c.motivation);
  if (c.rewards) out << YAML::Key << "rewards" << YAML::Value << YAML::Flow << *c.rewards;
  if (c.reward_factor_values) out << YAML::Key << "reward_values" << YAML::Value << YAML::Flow << *c.reward_factor_values;
  out << YAML::Key << "tol" << YAML::Value << c.tol;
  out << YAML::Key << "max_iters" << YAML::Value << c.max_iters;
  out << YAML::Key << "init" << YAML::Value << (c.init == InitMode::uniform ? "uniform" : "perturbed");
  out << YAML::Key << "init_scale" << YAML::Value << c.init_scale;
  out << YAML::Key << "outer_tol" << YAML::Value << c.outer_tol;
  out << YAML::Key << "max_outer" << YAML::Value << c.max_outer;
  out << YAML::Key << "sweeps_per_outer" << YAML::Value << c.sweeps_per_outer;
  out << YAML::EndMap;

  out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "steps" << YAML::Value << c.steps;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "enable_exact_oracle" << YAML::Value << c.enable_exact_oracle;
  out << YAML::Key << "enum_cap" << YAML::Value << c.enum_cap;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dir" << YAML::Value << c.out_dir;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace aif
