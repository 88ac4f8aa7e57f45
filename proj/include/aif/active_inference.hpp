#pragma once

// Joint inference and action selection. A third policy s(â|ρ) is fitted to the
// induced variational policy r(â|φ) while φ minimises the free energies:
//
//   D1 = Σ_â s(â) F[â, φ],   D2 = KL[s ‖ r(·|φ)],   objective = D1 + D2.
//
// The same value is also evaluated in its rewritten joint form
//
//   Σ_{â,x} s(â) r(x|â,φ) log[ s(â) r(x|â,φ) / (q(s_{<t}, x | â, a_{<t}) r(â|φ)) ],
//
// which carries φ in both numerator and denominator.

#include <optional>
#include <variant>

#include "aif/policy_selection.hpp"
#include "aif/variational_inference.hpp"

namespace aif {

/// ρ: either the policy itself or logits mapped through softmax with γ = 1.
class ThirdPolicyParams {
 public:
  static ThirdPolicyParams direct(PolicyDistribution p) { return ThirdPolicyParams(std::move(p)); }
  static ThirdPolicyParams logits(std::vector<ActionSeq> sequences, std::vector<double> logits) {
    if (sequences.size() != logits.size()) throw ShapeMismatch("third policy: one logit per sequence");
    return ThirdPolicyParams(Logits{std::move(sequences), std::move(logits)});
  }

  PolicyDistribution policy() const {
    if (const auto* p = std::get_if<PolicyDistribution>(&repr_)) return {p->sequences, p->probs, PolicyKind::third_policy};
    const auto& l = std::get<Logits>(repr_);
    return {l.sequences, softmax(l.values, 1.0), PolicyKind::third_policy};
  }

 private:
  struct Logits {
    std::vector<ActionSeq> sequences;
    std::vector<double> values;
  };
  explicit ThirdPolicyParams(std::variant<PolicyDistribution, Logits> r) : repr_(std::move(r)) {}
  std::variant<PolicyDistribution, Logits> repr_;
};

struct ObjectiveBreakdown {
  double d1 = 0.0;
  double d2 = 0.0;
  double total = 0.0;
  /// Rewritten joint form; empty when the free space exceeds the enumeration cap.
  std::optional<double> joint_form;
  std::vector<double> free_energies;
  PolicyDistribution s;
  PolicyDistribution r_induced;
};

namespace detail {

inline void check_same_sequences(const std::vector<ActionSeq>& a, const std::vector<ActionSeq>& b, const char* what) {
  if (a != b) throw ShapeMismatch(std::string(what) + ": action sequence sets differ");
}

/// Term-by-term evaluation of the rewritten form.
inline double joint_form(const GenerativeModel& model, const History& history, const VariationalParams& phi,
                         const PolicyDistribution& s, const PolicyDistribution& r_induced, std::size_t cap) {
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.sequences.size(); ++i) {
    const double si = s[i];
    if (si == 0.0) continue;
    if (r_induced[i] == 0.0)
      throw SupportViolation("joint form: s > 0 where the induced variational policy is 0 for " +
                             to_string(phi.sequences[i]));
    const auto r = PosteriorBlock::mean_field(phi.layout, phi.blocks[i]).joint(cap);
    const auto range = enumerate_assignments(model, history, phi.sequences[i], cap);
    for (auto it = range.begin(); it != range.end(); ++it) {
      const double rx = r[it.index()];
      const double w = si * rx;
      if (w == 0.0) continue;
      const double lq = joint_log_prob(model, *it);
      if (lq == kLogZero) throw ModelZero("joint form: r places mass on a zero-probability assignment");
      acc += w * (std::log(si) + std::log(rx) - lq - std::log(r_induced[i]));
    }
  }
  return acc;
}

}  // namespace detail

inline ObjectiveBreakdown combined_objective(const GenerativeModel& model, const History& history,
                                             const VariationalParams& phi, const ThirdPolicyParams& rho,
                                             const MotivationFunctional& m, double gamma,
                                             std::size_t cap = kDefaultEnumCap) {
  auto s = rho.policy();
  detail::check_same_sequences(s.sequences, phi.sequences, "combined_objective");
  const auto blocks = phi.posterior_blocks();
  auto r_induced = induce_policy(phi.sequences, blocks, m, gamma, PolicyKind::variational_induced);

  std::vector<double> f(phi.sequences.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = free_energy(model, history, phi.sequences[i], blocks[i], cap);

  double d1 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (s[i] > 0.0) d1 += s[i] * f[i];
  const double d2 = kl_divergence(s.probs, r_induced.probs);

  std::optional<double> jf;
  if (phi.layout.cells() <= cap) jf = detail::joint_form(model, history, phi, s, r_induced, cap);
  return {d1, d2, d1 + d2, jf, std::move(f), std::move(s), std::move(r_induced)};
}

/// Minimiser over s of Σ s F + KL[s ‖ r]: s*(â) ∝ r(â|φ) e^{−F[â]}.
inline PolicyDistribution optimal_third_policy(const PolicyDistribution& r_induced, const std::vector<double>& free_energies) {
  if (free_energies.size() != r_induced.size()) throw ShapeMismatch("optimal_third_policy: one free energy per sequence");
  std::vector<double> lw(r_induced.size());
  for (std::size_t i = 0; i < lw.size(); ++i) {
    const double f = free_energies[i];
    if (std::isnan(f)) throw NonFiniteInput("optimal_third_policy: NaN free energy");
    lw[i] = (r_induced[i] > 0.0 && std::isfinite(f)) ? std::log(r_induced[i]) - f : kLogZero;
  }
  const double z = log_sum_exp(lw);
  if (z == kLogZero) throw DegenerateNormalizer("optimal_third_policy: every sequence has zero weight");
  std::vector<double> p(lw.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(lw[i] - z);
  return {r_induced.sequences, Categorical(std::move(p)), PolicyKind::third_policy};
}

inline PolicyDistribution optimal_third_policy(const VariationalParams& phi, const std::vector<double>& free_energies,
                                               const MotivationFunctional& m, double gamma) {
  return optimal_third_policy(
      induce_policy(phi.sequences, phi.posterior_blocks(), m, gamma, PolicyKind::variational_induced), free_energies);
}

struct ActiveInferenceOptions {
  VariationalOptions variational;
  double outer_tol = 1e-8;
  std::size_t max_outer = 50;
  std::size_t sweeps_per_outer = 10;
};

struct ActiveInferenceResult {
  VariationalParams phi;
  PolicyDistribution s;
  std::vector<ObjectiveBreakdown> trace;
  std::vector<CaviResult> runs;  // last CAVI run per block
  std::size_t outer_iterations = 0;
  std::size_t sampled_index = 0;
  ActionSeq sampled_sequence;
  std::size_t action = 0;
};

/// Alternates CAVI sweeps on every φ block with the exact ρ update, logging the
/// full objective each round, then samples â ~ s(·|ρ*) and returns its first action.
/// The φ update minimises D1 only; D2's dependence on φ through r(â|φ) is not followed.
inline ActiveInferenceResult active_inference_step(const GenerativeModel& model, const History& history,
                                                   const MotivationFunctional& m, double gamma,
                                                   const ActiveInferenceOptions& opts, Rng& rng) {
  if (opts.max_outer == 0 || opts.sweeps_per_outer == 0) throw InvalidArgument("active_inference_step: empty schedule");
  const auto t = history.length();
  VariationalParams phi{model.layout(t), future_action_sequences(model, t, opts.variational.enum_cap), {}};
  for (std::size_t i = 0; i < phi.sequences.size(); ++i)
    phi.blocks.push_back(initial_block(phi.layout, opts.variational, i));

  std::vector<CaviResult> runs(phi.sequences.size());
  std::vector<bool> converged(phi.sequences.size(), false);
  std::vector<std::size_t> sweeps_used(phi.sequences.size(), 0);
  auto cavi = opts.variational.cavi;

  std::vector<ObjectiveBreakdown> trace;
  std::optional<PolicyDistribution> s;
  std::size_t outer = 0;
  while (outer < opts.max_outer) {
    ++outer;
    for (std::size_t i = 0; i < phi.sequences.size(); ++i) {
      if (converged[i] || sweeps_used[i] >= opts.variational.cavi.max_iters) continue;
      cavi.max_iters = std::min(opts.sweeps_per_outer, opts.variational.cavi.max_iters - sweeps_used[i]);
      auto run = cavi_minimize(model, history, phi.sequences[i], phi.blocks[i], cavi);
      sweeps_used[i] += run.sweeps;
      converged[i] = run.converged;
      phi.blocks[i] = run.block;
      runs[i] = std::move(run);
    }
    std::vector<double> f(phi.sequences.size());
    bool finite = true;
    for (std::size_t i = 0; i < f.size(); ++i) finite = finite && std::isfinite(f[i] = runs[i].free_energy);
    if (!finite && outer < opts.max_outer) continue;

    s = optimal_third_policy(phi, f, m, gamma);
    trace.push_back(combined_objective(model, history, phi, ThirdPolicyParams::direct(*s), m, gamma,
                                       opts.variational.enum_cap));
    if (trace.size() >= 2 && trace[trace.size() - 2].total - trace.back().total < opts.outer_tol) break;
  }

  ActiveInferenceResult res{std::move(phi), std::move(*s), std::move(trace), std::move(runs), outer, 0, {}, 0};
  res.sampled_index = rng.sample(res.s.probs);
  res.sampled_sequence = res.s.sequences[res.sampled_index];
  res.action = res.sampled_sequence.front();
  return res;
}

}  // namespace aif
