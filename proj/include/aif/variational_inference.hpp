#pragma once

// Mean-field variational active posterior r(ŝ_{t:T}, ê_{0:T}, θ | â, φ_â), its
// free energy
//
//   F[â, φ, sa_{<t}] = Σ_x r(x|â,φ) log r(x|â,φ) / q(s_{<t}, x | â, a_{<t})
//
// and per-sequence minimisation by coordinate-ascent (CAVI) sweeps.

#include <cstdio>
#include <optional>
#include <ostream>

#include "aif/exact_inference.hpp"
#include "aif/posterior.hpp"
#include "aif/random.hpp"

namespace aif {

/// Normalized factor entries below this are snapped to exact zero.
inline constexpr double kFactorFloor = 1e-300;
/// Replaces log 0 inside coordinate updates. exp() of it underflows to zero, but it
/// stays finite so an impossible term shared by every value of a factor cancels.
inline constexpr double kLogZeroPenalty = -1000.0;

enum class FactorKind { theta, env, sensor };

struct FactorId {
  FactorKind kind;
  std::size_t step = 0;  // absolute time index for env/sensor factors
  friend bool operator==(const FactorId&, const FactorId&) = default;
};

using UpdateSchedule = std::vector<FactorId>;

/// θ, then ê_0..ê_T, then ŝ_t..ŝ_T.
inline UpdateSchedule default_schedule(const PosteriorLayout& layout) {
  UpdateSchedule s{{FactorKind::theta, 0}};
  for (std::size_t i = 0; i <= layout.final_step; ++i) s.push_back({FactorKind::env, i});
  for (std::size_t i = layout.t; i <= layout.final_step; ++i) s.push_back({FactorKind::sensor, i});
  return s;
}

/// φ: one mean-field block per future action sequence.
struct VariationalParams {
  PosteriorLayout layout;
  std::vector<ActionSeq> sequences;
  std::vector<MeanFieldBlock> blocks;

  std::vector<PosteriorBlock> posterior_blocks() const {
    std::vector<PosteriorBlock> out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) out.push_back(PosteriorBlock::mean_field(layout, b));
    return out;
  }
};

struct FreeEnergyReport {
  std::vector<ActionSeq> sequences;
  std::vector<double> free_energy;
  /// F + log evidence per sequence; present when the exact oracle ran.
  std::optional<std::vector<double>> gap;
};

/// F = −H[r] − E_r[log q].
struct FreeEnergyTerms {
  double entropy = 0.0;
  double expected_log_joint = 0.0;
  double value() const { return expected_log_joint == kLogZero ? INFINITY : -entropy - expected_log_joint; }
};

namespace detail {

/// Expectations of the log joint under a mean-field block, for one query.
/// With `penalized`, log 0 is replaced by kLogZeroPenalty.
class MeanFieldExpectations {
 public:
  MeanFieldExpectations(const GenerativeModel& model, const Query& query, bool penalized)
      : m_(model), q_(query), penalized_(penalized) {}

  /// Contribution w·log v with 0·log 0 = 0.
  double wlog(double w, double logv) const {
    if (w == 0.0) return 0.0;
    return w * lg(logv);
  }

  /// log q(θ_k) + E_{r_{-θ}}[log q(s_{<t}, x | θ_k, â)].
  double theta_term(const MeanFieldBlock& r, std::size_t k) const {
    const auto ne = m_.env_size();
    const auto t = q_.t();
    double acc = lg(m_.log_prior(k));
    for (std::size_t e = 0; e < ne; ++e) acc += wlog(r.env[0][e], m_.log_initial(k, e));
    for (std::size_t i = 1; i <= q_.final_step(); ++i) {
      const auto a = q_.actions[i];
      for (std::size_t e = 0; e < ne; ++e) {
        if (r.env[i - 1][e] == 0.0) continue;
        for (std::size_t e2 = 0; e2 < ne; ++e2)
          acc += wlog(r.env[i - 1][e] * r.env[i][e2], m_.log_transition(k, a, e, e2));
      }
    }
    for (std::size_t i = 0; i <= q_.final_step(); ++i) {
      for (std::size_t e = 0; e < ne; ++e) {
        const double we = r.env[i][e];
        if (we == 0.0) continue;
        if (i < t) {
          acc += wlog(we, m_.log_sensor(k, e, q_.past_sensors[i]));
        } else {
          const auto& rs = r.sensors[i - t];
          for (std::size_t s = 0; s < m_.sensor_size(); ++s) acc += wlog(we * rs[s], m_.log_sensor(k, e, s));
        }
      }
    }
    return acc;
  }

  double expected_log_joint(const MeanFieldBlock& r) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < m_.theta_count(); ++k) {
      if (r.theta[k] == 0.0) continue;
      acc += wlog(r.theta[k], theta_term(r, k));
    }
    return acc;
  }

  std::vector<double> env_update_logits(const MeanFieldBlock& r, std::size_t i) const {
    const auto ne = m_.env_size();
    const auto t = q_.t();
    std::vector<double> l(ne, 0.0);
    for (std::size_t k = 0; k < m_.theta_count(); ++k) {
      const double wk = r.theta[k];
      if (wk == 0.0) continue;
      for (std::size_t e = 0; e < ne; ++e) {
        double acc = 0.0;
        if (i == 0) {
          acc += lg(m_.log_initial(k, e));
        } else {
          for (std::size_t prev = 0; prev < ne; ++prev)
            acc += wlog(r.env[i - 1][prev], m_.log_transition(k, q_.actions[i], prev, e));
        }
        if (i < q_.final_step()) {
          for (std::size_t next = 0; next < ne; ++next)
            acc += wlog(r.env[i + 1][next], m_.log_transition(k, q_.actions[i + 1], e, next));
        }
        if (i < t) {
          acc += lg(m_.log_sensor(k, e, q_.past_sensors[i]));
        } else {
          const auto& rs = r.sensors[i - t];
          for (std::size_t s = 0; s < m_.sensor_size(); ++s) acc += wlog(rs[s], m_.log_sensor(k, e, s));
        }
        l[e] += wlog(wk, acc);
      }
    }
    return l;
  }

  std::vector<double> sensor_update_logits(const MeanFieldBlock& r, std::size_t i) const {
    std::vector<double> l(m_.sensor_size(), 0.0);
    for (std::size_t k = 0; k < m_.theta_count(); ++k) {
      const double wk = r.theta[k];
      if (wk == 0.0) continue;
      for (std::size_t e = 0; e < m_.env_size(); ++e) {
        const double w = wk * r.env[i][e];
        if (w == 0.0) continue;
        for (std::size_t s = 0; s < l.size(); ++s) l[s] += wlog(w, m_.log_sensor(k, e, s));
      }
    }
    return l;
  }

  std::vector<double> theta_update_logits(const MeanFieldBlock& r) const {
    std::vector<double> l(m_.theta_count());
    for (std::size_t k = 0; k < l.size(); ++k) l[k] = theta_term(r, k);
    return l;
  }

 private:
  double lg(double logv) const { return penalized_ && logv == kLogZero ? kLogZeroPenalty : logv; }

  const GenerativeModel& m_;
  const Query& q_;
  bool penalized_;
};

/// exp-normalize with max subtraction; entries below kFactorFloor become exact zeros.
inline Categorical normalize_logits(const std::vector<double>& l) {
  const double m = *std::max_element(l.begin(), l.end());
  std::vector<double> p(l.size());
  double z = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) z += (p[i] = std::exp(l[i] - m));
  double z2 = 0.0;
  for (double& v : p) {
    v /= z;
    if (v < kFactorFloor) v = 0.0;
    z2 += v;
  }
  for (double& v : p) v /= z2;
  return Categorical(std::move(p));
}

inline FreeEnergyTerms mean_field_terms(const GenerativeModel& model, const Query& q, const MeanFieldBlock& r,
                                        bool penalized) {
  return {r.entropy(), MeanFieldExpectations(model, q, penalized).expected_log_joint(r)};
}

/// Direct Σ r log(r/q) over the free space; +inf when r has mass where q is zero.
inline double enumerated_free_energy(const GenerativeModel& model, const History& history, const ActionSeq& seq,
                                     const JointTable& r, std::size_t cap) {
  const auto range = enumerate_assignments(model, history, seq, cap);
  if (r.dims() != range.query().layout.dims()) throw ShapeMismatch("free_energy: posterior dims do not match model");
  double f = 0.0;
  for (auto it = range.begin(); it != range.end(); ++it) {
    const double p = r[it.index()];
    if (p == 0.0) continue;
    const double lq = joint_log_prob(model, *it);
    if (lq == kLogZero) return INFINITY;
    f += p * (std::log(p) - lq);
  }
  return f;
}

}  // namespace detail

inline FreeEnergyTerms free_energy_terms(const GenerativeModel& model, const History& history, const ActionSeq& seq,
                                         const MeanFieldBlock& r) {
  const auto q = make_query(model, history, seq);
  r.check(q.layout);
  return detail::mean_field_terms(model, q, r, false);
}

/// Variational free energy of one action sequence. Mean-field blocks use the
/// entropy/cross-entropy decomposition and, when the free space fits under
/// `cap`, are cross-checked against direct enumeration.
inline double free_energy(const GenerativeModel& model, const History& history, const ActionSeq& seq,
                          const PosteriorBlock& r, std::size_t cap = kDefaultEnumCap) {
  const auto q = make_query(model, history, seq);
  if (!(r.layout() == q.layout)) throw ShapeMismatch("free_energy: posterior layout does not match the query");
  double f;
  if (const auto* table = r.dense_table()) {
    f = detail::enumerated_free_energy(model, history, seq, *table, cap);
  } else {
    f = detail::mean_field_terms(model, q, *r.factors(), false).value();
    if (q.layout.cells() <= cap) {
      const double direct = detail::enumerated_free_energy(model, history, seq, r.joint(cap), cap);
      const bool both_inf = std::isinf(f) && std::isinf(direct);
      if (!both_inf && !(std::abs(f - direct) <= 1e-10 * std::max(1.0, std::abs(f))))
        throw Error("free_energy: decomposition " + std::to_string(f) + " disagrees with enumeration " +
                    std::to_string(direct));
    }
  }
  if (std::isinf(f)) throw ModelZero("free_energy: r places mass on a zero-probability assignment for " + to_string(seq));
  return f;
}

inline double free_energy(const GenerativeModel& model, const History& history, const ActionSeq& seq,
                          const MeanFieldBlock& r, std::size_t cap = kDefaultEnumCap) {
  return free_energy(model, history, seq, PosteriorBlock::mean_field(model.layout(history.length()), r), cap);
}

/// Uniform block, or normalized positive noise around it.
inline MeanFieldBlock perturbed_block(const PosteriorLayout& layout, Rng& rng, double scale = 1.0) {
  auto draw = [&](std::size_t n) {
    std::vector<double> p(n);
    double z = 0.0;
    for (double& v : p) z += (v = 1.0 + scale * -std::log1p(-rng.uniform()));
    for (double& v : p) v /= z;
    return Categorical(std::move(p));
  };
  MeanFieldBlock b{draw(layout.theta_count), {}, {}};
  for (std::size_t i = 0; i < layout.env_vars(); ++i) b.env.push_back(draw(layout.env_size));
  for (std::size_t i = 0; i < layout.sensor_vars(); ++i) b.sensors.push_back(draw(layout.sensor_size));
  return b;
}

struct CaviOptions {
  double tol = 1e-10;
  std::size_t max_iters = 500;
  std::optional<UpdateSchedule> schedule;
};

struct CaviResult {
  MeanFieldBlock block;
  double free_energy = 0.0;
  /// F before the first sweep, then after every sweep (+inf while r has infeasible mass).
  std::vector<double> trace;
  std::size_t sweeps = 0;
  bool converged = false;
};

/// Coordinate sweeps log r_j = E_{r_{-j}}[log q(s_{<t}, x | â, a_{<t})] + const until
/// the per-sweep decrease drops below tol.
inline CaviResult cavi_minimize(const GenerativeModel& model, const History& history, const ActionSeq& seq,
                                MeanFieldBlock init, const CaviOptions& opts = {}) {
  if (!(opts.tol > 0.0)) throw InvalidArgument("cavi_minimize: tol must be > 0");
  const auto q = make_query(model, history, seq);
  init.check(q.layout);
  const auto schedule = opts.schedule.value_or(default_schedule(q.layout));
  for (const auto& f : schedule) {
    const bool ok = f.kind == FactorKind::theta || (f.kind == FactorKind::env && f.step <= q.final_step()) ||
                    (f.kind == FactorKind::sensor && f.step >= q.t() && f.step <= q.final_step());
    if (!ok) throw InvalidArgument("cavi_minimize: schedule names a factor outside the horizon");
  }

  const detail::MeanFieldExpectations penalized(model, q, true);
  auto objective = [&](const MeanFieldBlock& r) { return -r.entropy() - penalized.expected_log_joint(r); };
  auto exact_f = [&](const MeanFieldBlock& r) { return detail::mean_field_terms(model, q, r, false).value(); };

  CaviResult res{std::move(init), 0.0, {}, 0, false};
  double prev = objective(res.block);
  res.trace.push_back(exact_f(res.block));
  auto& r = res.block;
  while (res.sweeps < opts.max_iters) {
    for (const auto& f : schedule) {
      switch (f.kind) {
        case FactorKind::theta:
          r.theta = detail::normalize_logits(penalized.theta_update_logits(r));
          break;
        case FactorKind::env:
          r.env[f.step] = detail::normalize_logits(penalized.env_update_logits(r, f.step));
          break;
        case FactorKind::sensor:
          r.sensors[f.step - q.t()] = detail::normalize_logits(penalized.sensor_update_logits(r, f.step));
          break;
      }
    }
    ++res.sweeps;
    const double cur = objective(r);
    res.trace.push_back(exact_f(r));
    if (cur > prev + 1e-9)
      throw NonDecreasingGuard("cavi_minimize: free energy rose from " + std::to_string(prev) + " to " +
                               std::to_string(cur) + " in sweep " + std::to_string(res.sweeps) +
                               " for action sequence " + to_string(seq));
    const bool done = prev - cur < opts.tol;
    prev = cur;
    if (done) {
      res.converged = true;
      break;
    }
  }
  res.free_energy = res.trace.back();
  return res;
}

enum class InitMode { uniform, perturbed };

struct VariationalOptions {
  CaviOptions cavi;
  InitMode init = InitMode::uniform;
  double init_scale = 1.0;
  std::uint64_t init_seed = 0;
  /// Compute gaps against exact evidence.
  bool exact_oracle = false;
  std::size_t enum_cap = kDefaultEnumCap;
};

struct OptimizeResult {
  VariationalParams params;
  FreeEnergyReport report;
  std::vector<CaviResult> runs;
};

inline MeanFieldBlock initial_block(const PosteriorLayout& layout, const VariationalOptions& opts,
                                    std::size_t block_index) {
  if (opts.init == InitMode::uniform) return MeanFieldBlock::uniform(layout);
  Rng rng(derive_seed(opts.init_seed, "cavi-init", block_index));
  return perturbed_block(layout, rng, opts.init_scale);
}

/// Runs cavi_minimize for every future action sequence. Blocks are independent:
/// F[â, φ] depends on φ_â only.
inline OptimizeResult optimize_all(const GenerativeModel& model, const History& history,
                                   const VariationalOptions& opts = {}) {
  OptimizeResult out;
  const auto t = history.length();
  out.params.layout = model.layout(t);
  out.params.sequences = future_action_sequences(model, t, opts.enum_cap);
  out.report.sequences = out.params.sequences;
  if (opts.exact_oracle) out.report.gap.emplace();
  for (std::size_t i = 0; i < out.params.sequences.size(); ++i) {
    const auto& seq = out.params.sequences[i];
    auto run = cavi_minimize(model, history, seq, initial_block(out.params.layout, opts, i), opts.cavi);
    out.params.blocks.push_back(run.block);
    out.report.free_energy.push_back(run.free_energy);
    if (opts.exact_oracle) {
      const double lev = log_evidence(model, history, seq, opts.enum_cap);
      if (lev == kLogZero) throw ZeroEvidence("optimize_all: history has zero evidence for action sequence " + to_string(seq));
      out.report.gap->push_back(run.free_energy + lev);
    }
    out.runs.push_back(std::move(run));
  }
  return out;
}

/// CSV rows (action_seq, sweep, F) for a set of CAVI traces.
inline void write_trace_csv(std::ostream& os, const std::vector<ActionSeq>& sequences,
                            const std::vector<CaviResult>& runs) {
  os << "action_seq,sweep,free_energy\n";
  char buf[64];
  for (std::size_t i = 0; i < runs.size(); ++i)
    for (std::size_t s = 0; s < runs[i].trace.size(); ++s) {
      std::snprintf(buf, sizeof buf, "%.17g", runs[i].trace[s]);
      os << to_string(sequences[i]) << ',' << s << ',' << buf << '\n';
    }
}

}  // namespace aif
