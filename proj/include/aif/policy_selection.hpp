#pragma once

// Softmax operator over future action sequences: policy(â) ∝ exp(γ · M(d_â, â)).

#include <cstdio>
#include <ostream>

#include "aif/motivation.hpp"

namespace aif {

enum class PolicyKind { exact_induced, variational_induced, third_policy };

inline const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::exact_induced: return "exact-induced";
    case PolicyKind::variational_induced: return "variational-induced";
    case PolicyKind::third_policy: return "third-policy";
  }
  return "?";
}

/// Distribution over action sequences, in lexicographic sequence order.
struct PolicyDistribution {
  std::vector<ActionSeq> sequences;
  Categorical probs;
  PolicyKind kind;

  PolicyDistribution(std::vector<ActionSeq> seqs, Categorical p, PolicyKind k)
      : sequences(std::move(seqs)), probs(std::move(p)), kind(k) {
    if (sequences.size() != probs.size()) throw ShapeMismatch("policy: one probability per action sequence");
  }

  std::size_t size() const { return sequences.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
};

/// M(d_â, â) for every sequence; errors carry the offending sequence.
inline std::vector<double> motivation_values(const std::vector<ActionSeq>& sequences,
                                             const std::vector<PosteriorBlock>& posterior,
                                             const MotivationFunctional& m) {
  if (sequences.size() != posterior.size()) throw ShapeMismatch("motivation_values: one posterior block per sequence");
  std::vector<double> v(sequences.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    try {
      v[i] = m.evaluate(posterior[i], sequences[i]);
    } catch (const std::exception& ex) {
      throw Error(m.name() + " failed for action sequence " + to_string(sequences[i]) + ": " + ex.what());
    }
  }
  return v;
}

inline PolicyDistribution induce_policy(const std::vector<ActionSeq>& sequences,
                                        const std::vector<PosteriorBlock>& posterior, const MotivationFunctional& m,
                                        double gamma, PolicyKind kind) {
  return {sequences, softmax(motivation_values(sequences, posterior, m), gamma), kind};
}

/// Argmax; ties go to the lexicographically smallest sequence.
inline const ActionSeq& greedy_action_sequence(const PolicyDistribution& policy) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < policy.size(); ++i)
    if (policy[i] > policy[best]) best = i;
  return policy.sequences[best];
}

/// Marginal probability of each first action a_t.
inline std::vector<double> first_action_marginal(const PolicyDistribution& policy, std::size_t n_actions) {
  std::vector<double> m(n_actions, 0.0);
  for (std::size_t i = 0; i < policy.size(); ++i) m.at(policy.sequences[i].at(0)) += policy[i];
  return m;
}

/// CSV rows: action_seq, probability, provenance.
inline void write_policy_csv(std::ostream& os, const std::vector<PolicyDistribution>& policies) {
  os << "action_seq,probability,provenance\n";
  char buf[64];
  for (const auto& p : policies)
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p[i]);
      os << to_string(p.sequences[i]) << ',' << buf << ',' << to_string(p.kind) << '\n';
    }
}

}  // namespace aif
