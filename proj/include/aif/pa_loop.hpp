#pragma once

// The true perception-action loop: environment dynamics p(e'|a',e), sensor
// dynamics p(s|e), and a pluggable agent that only ever sees the history of
// its own sensor values and actions.

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aif/core.hpp"
#include "aif/random.hpp"

namespace aif {

using Json = nlohmann::ordered_json;

/// Row-stochastic table: row r is a distribution over the target alphabet.
using KernelRows = std::vector<Categorical>;

/// Sensor alphabet as a product of factors (first factor most significant).
struct SensorFactorization {
  std::vector<std::size_t> factor_sizes;
  /// Index of the factor that carries reward, if any.
  std::optional<std::size_t> reward_factor;

  std::size_t product() const {
    std::size_t n = 1;
    for (auto f : factor_sizes) n *= f;
    return n;
  }
  /// Component `factor` of the flat sensor symbol.
  std::size_t component(std::size_t symbol, std::size_t factor) const {
    std::size_t stride = 1;
    for (std::size_t i = factor_sizes.size(); i-- > factor + 1;) stride *= factor_sizes[i];
    return (symbol / stride) % factor_sizes[factor];
  }
};

struct EnvironmentSpec {
  Alphabet env_alphabet{1};
  Alphabet sensor_alphabet{1};
  Alphabet action_alphabet{1};
  Categorical initial = Categorical::uniform(1);
  /// transition[a][e] = p(e' | a, e)
  std::vector<KernelRows> transition;
  /// sensor[e] = p(s | e)
  KernelRows sensor;
  std::optional<SensorFactorization> sensor_factors;

  void validate() const {
    const auto ne = env_alphabet.size();
    const auto ns = sensor_alphabet.size();
    if (initial.size() != ne) throw ShapeMismatch("environment: initial distribution size != env alphabet");
    if (transition.size() != action_alphabet.size())
      throw ShapeMismatch("environment: transition kernel needs one block per action");
    for (const auto& block : transition) {
      if (block.size() != ne) throw ShapeMismatch("environment: transition block needs one row per state");
      for (const auto& row : block)
        if (row.size() != ne) throw ShapeMismatch("environment: transition row size != env alphabet");
    }
    if (sensor.size() != ne) throw ShapeMismatch("environment: sensor kernel needs one row per state");
    for (const auto& row : sensor)
      if (row.size() != ns) throw ShapeMismatch("environment: sensor row size != sensor alphabet");
    if (sensor_factors) {
      if (sensor_factors->product() != ns)
        throw ShapeMismatch("environment: sensor factor sizes do not multiply to the sensor alphabet");
      if (sensor_factors->reward_factor && *sensor_factors->reward_factor >= sensor_factors->factor_sizes.size())
        throw IndexOutOfAlphabet("environment: reward factor index out of range");
    }
  }
};

/// One (s_τ, a_τ) entry of the agent's memory.
struct SensorAction {
  std::size_t sensor;
  std::size_t action;
  friend bool operator==(const SensorAction&, const SensorAction&) = default;
};

/// Perfect memory sa_{<t}. Append-only; its length is the current step t.
class History {
 public:
  History() = default;
  explicit History(std::vector<SensorAction> pairs) : pairs_(std::move(pairs)) {}

  void append(SensorAction p) { pairs_.push_back(p); }
  std::size_t length() const noexcept { return pairs_.size(); }
  const SensorAction& operator[](std::size_t i) const { return pairs_[i]; }
  std::span<const SensorAction> pairs() const noexcept { return pairs_; }

  friend bool operator==(const History&, const History&) = default;

 private:
  std::vector<SensorAction> pairs_;
};

struct StepOutcome {
  std::size_t env_state;
  std::size_t sensor;
  friend bool operator==(const StepOutcome&, const StepOutcome&) = default;
};

inline void check_symbol(const Alphabet& alphabet, std::size_t symbol, const char* what) {
  if (!alphabet.contains(symbol))
    throw IndexOutOfAlphabet(std::string(what) + " " + std::to_string(symbol) + " outside alphabet of size " +
                             std::to_string(alphabet.size()));
}

/// Initial emission: e₀ ~ p(e₀), s₀ ~ p(s|e₀). No action precedes e₀.
inline StepOutcome env_reset(const EnvironmentSpec& spec, Rng& rng) {
  const auto e = rng.sample(spec.initial);
  const auto s = rng.sample(spec.sensor[e]);
  return {e, s};
}

/// e' ~ p(·|a,e) then s ~ p(·|e'); the transition draw always precedes the sensor draw.
inline StepOutcome env_step(const EnvironmentSpec& spec, std::size_t e, std::size_t a, Rng& rng) {
  check_symbol(spec.env_alphabet, e, "environment state");
  check_symbol(spec.action_alphabet, a, "action");
  const auto next = rng.sample(spec.transition[a][e]);
  const auto s = rng.sample(spec.sensor[next]);
  return {next, s};
}

struct AgentDecision {
  std::size_t action = 0;
  Json diagnostics = Json::object();
};

/// Action generation p(a_t | m_t). Receives only the agent's memory.
using Agent = std::function<AgentDecision(const History&)>;

struct TrajectoryStep {
  std::size_t step;
  std::size_t env_state;
  std::size_t sensor;
  std::size_t action;
  Json diagnostics;
};

struct TrajectoryRecord {
  std::vector<TrajectoryStep> steps;
  History history;
};

/// Runs `steps` loop iterations. At step t the agent sees sa_{<t}, picks a_t,
/// the environment moves to e_t (drawn from p(e₀) at t = 0, which has no
/// incoming action) and emits s_t; (s_t, a_t) is then appended.
inline TrajectoryRecord run_loop(const EnvironmentSpec& spec, const Agent& agent, std::size_t steps, Rng& env_rng) {
  if (steps == 0) throw InvalidArgument("run_loop: steps must be >= 1");
  spec.validate();
  TrajectoryRecord rec;
  rec.steps.reserve(steps);
  std::size_t env_state = 0;
  for (std::size_t t = 0; t < steps; ++t) {
    AgentDecision decision;
    try {
      decision = agent(rec.history);
      check_symbol(spec.action_alphabet, decision.action, "agent action");
    } catch (const std::exception& ex) {
      throw StepError(t, ex.what());
    }
    const auto out =
        t == 0 ? env_reset(spec, env_rng) : env_step(spec, env_state, decision.action, env_rng);
    env_state = out.env_state;
    rec.history.append({out.sensor, decision.action});
    rec.steps.push_back({t, out.env_state, out.sensor, decision.action, std::move(decision.diagnostics)});
  }
  return rec;
}

/// One JSON object per line: step, env_state, sensor, action, diagnostics.
inline void write_jsonl(const TrajectoryRecord& rec, std::ostream& os) {
  for (const auto& s : rec.steps) {
    Json line;
    line["step"] = s.step;
    line["env_state"] = s.env_state;
    line["sensor"] = s.sensor;
    line["action"] = s.action;
    line["diagnostics"] = s.diagnostics;
    os << line.dump() << '\n';
  }
}

}  // namespace aif
