#pragma once

// Motivation functionals: maps (active posterior entry for â, â) → score.

#include <memory>
#include <string>

#include "aif/posterior.hpp"

namespace aif {

class MotivationFunctional {
 public:
  virtual ~MotivationFunctional() = default;
  virtual std::string name() const = 0;
  /// Pure; finite for normalized input.
  virtual double evaluate(const PosteriorBlock& posterior, const ActionSeq& actions) const = 0;
};

/// Reward value of every sensor symbol.
struct RewardStructure {
  std::vector<double> values;

  double operator()(std::size_t symbol) const { return values.at(symbol); }

  /// Expands per-component rewards of one factor of a product sensor alphabet.
  static RewardStructure from_factor(const SensorFactorization& f, std::size_t factor,
                                     const std::vector<double>& factor_values) {
    if (factor >= f.factor_sizes.size()) throw IndexOutOfAlphabet("reward factor out of range");
    if (factor_values.size() != f.factor_sizes[factor])
      throw ShapeMismatch("reward values must cover the reward factor alphabet");
    RewardStructure r;
    for (std::size_t s = 0; s < f.product(); ++s) r.values.push_back(factor_values[f.component(s, factor)]);
    return r;
  }
};

/// Undiscounted E[Σ_{τ=t}^{T} R(ŝ_τ)] under the posterior's sensor marginal.
inline double expected_reward(const PosteriorBlock& posterior, const ActionSeq& actions, const RewardStructure& rewards) {
  const auto& layout = posterior.layout();
  if (rewards.values.size() != layout.sensor_size)
    throw ShapeMismatch("expected_reward: reward structure has " + std::to_string(rewards.values.size()) +
                        " entries, sensor alphabet has " + std::to_string(layout.sensor_size));
  if (actions.size() != layout.future_actions()) throw ShapeMismatch("expected_reward: action sequence length");
  // Linear in the per-step sensor marginals.
  if (const auto* mf = posterior.factors()) {
    double total = 0.0;
    for (const auto& f : mf->sensors)
      for (std::size_t s = 0; s < f.size(); ++s) total += f[s] * rewards(s);
    return total;
  }
  const auto marginal = posterior.sensor_marginal();
  const auto n = layout.sensor_vars();
  const auto ns = layout.sensor_size;
  double total = 0.0;
  for (std::size_t i = 0; i < marginal.size(); ++i) {
    const double p = marginal[i];
    if (p == 0.0) continue;
    double sum = 0.0;
    std::size_t code = i;
    for (std::size_t j = 0; j < n; ++j, code /= ns) sum += rewards(code % ns);
    total += p * sum;
  }
  return total;
}

/// −H of the joint marginal over ŝ_{t:T}.
inline double negative_expected_entropy(const PosteriorBlock& posterior, const ActionSeq& actions) {
  if (actions.size() != posterior.layout().future_actions())
    throw ShapeMismatch("negative_expected_entropy: action sequence length");
  if (const auto* mf = posterior.factors()) {
    double h = 0.0;
    for (const auto& f : mf->sensors) h += f.entropy();
    return -h;
  }
  const auto marginal = posterior.sensor_marginal();
  double acc = 0.0;
  for (double p : marginal.values())
    if (p > 0.0) acc += p * std::log(p);
  return acc;
}

class ExpectedReward final : public MotivationFunctional {
 public:
  explicit ExpectedReward(RewardStructure rewards) : rewards_(std::move(rewards)) {}
  std::string name() const override { return "expected-reward"; }
  double evaluate(const PosteriorBlock& p, const ActionSeq& a) const override { return expected_reward(p, a, rewards_); }
  const RewardStructure& rewards() const { return rewards_; }

 private:
  RewardStructure rewards_;
};

class NegativeExpectedEntropy final : public MotivationFunctional {
 public:
  std::string name() const override { return "negative-expected-entropy"; }
  double evaluate(const PosteriorBlock& p, const ActionSeq& a) const override { return negative_expected_entropy(p, a); }
};

}  // namespace aif
