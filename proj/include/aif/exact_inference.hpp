#pragma once

// Brute-force active posterior q(ŝ_{t:T}, ê_{0:T}, θ | â_{t:T}, sa_{<t}) for every
// future action sequence, by full enumeration of the free space.

#include "aif/generative_model.hpp"
#include "aif/posterior.hpp"

namespace aif {

struct ActivePosteriorTable {
  PosteriorLayout layout;
  std::vector<ActionSeq> sequences;  // lexicographic
  std::vector<JointTable> tables;    // one normalized table per sequence
  std::vector<double> log_evidence;  // log q(s_{<t} | â, a_{<t}) per sequence

  std::vector<PosteriorBlock> blocks() const {
    std::vector<PosteriorBlock> out;
    out.reserve(tables.size());
    for (const auto& t : tables) out.push_back(PosteriorBlock::dense(layout, t));
    return out;
  }
};

/// Unnormalized log joint of every free cell, in layout order.
inline std::vector<double> free_log_joint(const GenerativeModel& model, const History& history,
                                          const ActionSeq& future, std::size_t cap = kDefaultEnumCap) {
  const auto range = enumerate_assignments(model, history, future, cap);
  std::vector<double> lw;
  lw.reserve(range.query().layout.cells());
  for (const auto& x : range) lw.push_back(joint_log_prob(model, x));
  return lw;
}

/// log Σ_free q(s_{<t}, x | â, a_{<t}); kLogZero when the history is impossible.
inline double log_evidence(const GenerativeModel& model, const History& history, const ActionSeq& future,
                           std::size_t cap = kDefaultEnumCap) {
  return log_sum_exp(free_log_joint(model, history, future, cap));
}

inline JointTable exact_posterior_block(const GenerativeModel& model, const History& history,
                                        const ActionSeq& future, double* log_ev = nullptr,
                                        std::size_t cap = kDefaultEnumCap) {
  const auto lw = free_log_joint(model, history, future, cap);
  const double z = log_sum_exp(lw);
  if (z == kLogZero) throw ZeroEvidence("history has zero probability under the model for action sequence " + to_string(future));
  if (log_ev) *log_ev = z;
  std::vector<double> v(lw.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(lw[i] - z);
  return JointTable(model.layout(history.length()).dims(), std::move(v), true);
}

inline ActivePosteriorTable exact_active_posterior(const GenerativeModel& model, const History& history,
                                                   std::size_t cap = kDefaultEnumCap) {
  ActivePosteriorTable out;
  out.layout = model.layout(history.length());
  out.layout.check_cap(cap);
  out.sequences = future_action_sequences(model, history.length(), cap);
  out.tables.reserve(out.sequences.size());
  out.log_evidence.reserve(out.sequences.size());
  for (const auto& seq : out.sequences) {
    double lz = 0.0;
    out.tables.push_back(exact_posterior_block(model, history, seq, &lz, cap));
    out.log_evidence.push_back(lz);
  }
  return out;
}

}  // namespace aif
