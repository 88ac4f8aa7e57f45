#pragma once

// The agent's generative model q over hatted variables with a finite support
// of parameter points θ = (θ¹ sensor kernel, θ² transition kernel, θ³ initial
// distribution):
//
//   q(ŝ_{0:T}, ê_{0:T}, θ | â_{1:T}) = q(θ) q(ê₀|θ³) Π_{τ≥1} q(ê_τ|â_τ,ê_{τ-1},θ²) Π_τ q(ŝ_τ|ê_τ,θ¹)
//
// Actions are clamped roots; no action prior appears.

#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

#include "aif/core.hpp"
#include "aif/pa_loop.hpp"

namespace aif {

/// Default bound on the number of cells any enumeration may visit.
inline constexpr std::size_t kDefaultEnumCap = 1'000'000;

struct ThetaPoint {
  /// θ¹: sensor[e] = q(ŝ | ê)
  KernelRows sensor;
  /// θ²: transition[a][e] = q(ê' | â, ê)
  std::vector<KernelRows> transition;
  /// θ³: q(ê₀)
  Categorical initial = Categorical::uniform(1);
};

struct ThetaSupport {
  std::vector<ThetaPoint> points;
  Categorical prior = Categorical::uniform(1);
};

/// Final modelled step: either fixed, or rolling t + lookahead.
struct HorizonMode {
  enum class Kind { fixed, rolling };
  Kind kind = Kind::rolling;
  /// Final step for `fixed`, lookahead n for `rolling`.
  std::size_t value = 0;

  static HorizonMode fixed(std::size_t final_step) { return {Kind::fixed, final_step}; }
  static HorizonMode rolling(std::size_t lookahead) { return {Kind::rolling, lookahead}; }

  std::size_t final_step(std::size_t t) const {
    if (kind == Kind::rolling) return t + value;
    if (t > value)
      throw InvalidArgument("history length " + std::to_string(t) + " exceeds fixed final step " +
                            std::to_string(value));
    return value;
  }
  friend bool operator==(const HorizonMode&, const HorizonMode&) = default;
};

struct GenerativeModelSpec {
  Alphabet env_alphabet{1};
  Alphabet sensor_alphabet{1};
  Alphabet action_alphabet{1};
  ThetaSupport theta;
  HorizonMode horizon;

  void validate() const {
    const auto ne = env_alphabet.size();
    const auto ns = sensor_alphabet.size();
    const auto na = action_alphabet.size();
    if (theta.points.empty()) throw InvalidArgument("model: theta support is empty");
    if (theta.prior.size() != theta.points.size()) throw ShapeMismatch("model: theta prior size != number of points");
    for (std::size_t k = 0; k < theta.points.size(); ++k) {
      const auto& p = theta.points[k];
      const std::string where = "model: theta[" + std::to_string(k) + "] ";
      if (p.initial.size() != ne) throw ShapeMismatch(where + "initial size != env alphabet");
      if (p.sensor.size() != ne) throw ShapeMismatch(where + "sensor kernel needs one row per state");
      for (const auto& row : p.sensor)
        if (row.size() != ns) throw ShapeMismatch(where + "sensor row size != sensor alphabet");
      if (p.transition.size() != na) throw ShapeMismatch(where + "transition kernel needs one block per action");
      for (const auto& block : p.transition) {
        if (block.size() != ne) throw ShapeMismatch(where + "transition block needs one row per state");
        for (const auto& row : block)
          if (row.size() != ne) throw ShapeMismatch(where + "transition row size != env alphabet");
      }
    }
  }
};

/// Free-variable space of one active posterior block: (θ-index, ê_{0:T}, ŝ_{t:T}).
/// Row-major order with θ slowest, then ê₀..ê_T, then ŝ_t..ŝ_T.
struct PosteriorLayout {
  std::size_t theta_count = 1;
  std::size_t env_size = 1;
  std::size_t sensor_size = 1;
  std::size_t t = 0;           // number of clamped past steps
  std::size_t final_step = 0;  // T̂

  std::size_t env_vars() const { return final_step + 1; }
  std::size_t sensor_vars() const { return final_step + 1 - t; }
  std::size_t future_actions() const { return final_step + 1 - t; }

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    d.reserve(1 + env_vars() + sensor_vars());
    d.push_back(theta_count);
    d.insert(d.end(), env_vars(), env_size);
    d.insert(d.end(), sensor_vars(), sensor_size);
    return d;
  }
  std::vector<std::size_t> sensor_dims() const { return std::vector<std::size_t>(sensor_vars(), sensor_size); }

  /// Number of free cells, saturating at SIZE_MAX.
  std::size_t cells() const {
    std::size_t n = 1;
    for (auto d : dims()) {
      if (n > SIZE_MAX / d) return SIZE_MAX;
      n *= d;
    }
    return n;
  }

  void check_cap(std::size_t cap) const {
    if (cells() > cap)
      throw HorizonTooLarge("free space of " + std::to_string(cells()) + " cells exceeds enumeration cap " +
                            std::to_string(cap));
  }

  friend bool operator==(const PosteriorLayout&, const PosteriorLayout&) = default;
};

/// Log-kernel cache of a validated spec. Immutable.
class GenerativeModel {
 public:
  explicit GenerativeModel(GenerativeModelSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const auto ne = spec_.env_alphabet.size();
    const auto ns = spec_.sensor_alphabet.size();
    const auto na = spec_.action_alphabet.size();
    const auto k = spec_.theta.points.size();
    log_prior_.resize(k);
    log_initial_.assign(k * ne, 0.0);
    log_transition_.assign(k * na * ne * ne, 0.0);
    log_sensor_.assign(k * ne * ns, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& p = spec_.theta.points[i];
      log_prior_[i] = safe_log(spec_.theta.prior[i]);
      for (std::size_t e = 0; e < ne; ++e) {
        log_initial_[i * ne + e] = safe_log(p.initial[e]);
        for (std::size_t s = 0; s < ns; ++s) log_sensor_[(i * ne + e) * ns + s] = safe_log(p.sensor[e][s]);
        for (std::size_t a = 0; a < na; ++a)
          for (std::size_t e2 = 0; e2 < ne; ++e2)
            log_transition_[((i * na + a) * ne + e) * ne + e2] = safe_log(p.transition[a][e][e2]);
      }
    }
  }

  const GenerativeModelSpec& spec() const noexcept { return spec_; }
  std::size_t theta_count() const noexcept { return log_prior_.size(); }
  std::size_t env_size() const noexcept { return spec_.env_alphabet.size(); }
  std::size_t sensor_size() const noexcept { return spec_.sensor_alphabet.size(); }
  std::size_t action_size() const noexcept { return spec_.action_alphabet.size(); }

  double log_prior(std::size_t k) const { return log_prior_[k]; }
  double log_initial(std::size_t k, std::size_t e) const { return log_initial_[k * env_size() + e]; }
  double log_transition(std::size_t k, std::size_t a, std::size_t from, std::size_t to) const {
    return log_transition_[((k * action_size() + a) * env_size() + from) * env_size() + to];
  }
  double log_sensor(std::size_t k, std::size_t e, std::size_t s) const {
    return log_sensor_[(k * env_size() + e) * sensor_size() + s];
  }

  PosteriorLayout layout(std::size_t t) const {
    return {theta_count(), env_size(), sensor_size(), t, spec_.horizon.final_step(t)};
  }

 private:
  static double safe_log(double p) { return p > 0.0 ? std::log(p) : kLogZero; }

  GenerativeModelSpec spec_;
  std::vector<double> log_prior_, log_initial_, log_transition_, log_sensor_;
};

/// History plus one hypothesised future action sequence, flattened per time step.
struct Query {
  PosteriorLayout layout;
  std::vector<std::size_t> past_sensors;  // s_0..s_{t-1}
  std::vector<std::size_t> actions;       // a_0..a_{t-1}, â_t..â_T

  std::size_t t() const { return layout.t; }
  std::size_t final_step() const { return layout.final_step; }
};

inline Query make_query(const GenerativeModel& model, const History& history, const ActionSeq& future) {
  Query q{model.layout(history.length()), {}, {}};
  if (future.size() != q.layout.future_actions())
    throw ShapeMismatch("action sequence has length " + std::to_string(future.size()) + ", horizon needs " +
                        std::to_string(q.layout.future_actions()));
  q.actions.reserve(q.final_step() + 1);
  for (const auto& p : history.pairs()) {
    check_symbol(model.spec().sensor_alphabet, p.sensor, "history sensor");
    check_symbol(model.spec().action_alphabet, p.action, "history action");
    q.past_sensors.push_back(p.sensor);
    q.actions.push_back(p.action);
  }
  for (auto a : future) {
    check_symbol(model.spec().action_alphabet, a, "future action");
    q.actions.push_back(a);
  }
  return q;
}

/// Complete assignment of every model variable; sensors[i] for i < t must equal the history.
struct ModelAssignment {
  std::size_t theta = 0;
  std::vector<std::size_t> env;      // ê_0..ê_T
  std::vector<std::size_t> sensors;  // ŝ_0..ŝ_T (first t clamped)
  std::vector<std::size_t> actions;  // a_0..a_T (first t clamped)
};

/// log q(ŝ_{0:T}, ê_{0:T}, θ | a_{0:T}); kLogZero for impossible assignments.
inline double joint_log_prob(const GenerativeModel& model, const ModelAssignment& x) {
  const auto steps = x.env.size();
  if (steps == 0 || x.sensors.size() != steps || x.actions.size() != steps)
    throw ShapeMismatch("joint_log_prob: assignment vectors must share one non-zero length");
  if (x.theta >= model.theta_count()) throw IndexOutOfAlphabet("joint_log_prob: theta index out of range");
  for (std::size_t step = 0; step < steps; ++step) {
    check_symbol(model.spec().env_alphabet, x.env[step], "env value");
    check_symbol(model.spec().sensor_alphabet, x.sensors[step], "sensor value");
    check_symbol(model.spec().action_alphabet, x.actions[step], "action value");
  }
  double lp = model.log_prior(x.theta) + model.log_initial(x.theta, x.env[0]);
  for (std::size_t step = 1; step < steps; ++step) lp += model.log_transition(x.theta, x.actions[step], x.env[step - 1], x.env[step]);
  for (std::size_t step = 0; step < steps; ++step) lp += model.log_sensor(x.theta, x.env[step], x.sensors[step]);
  return lp;
}

/// Iterates every free assignment (θ, ê_{0:T}, ŝ_{t:T}) of a query exactly once,
/// in row-major layout order (θ slowest, ŝ_T fastest).
class AssignmentRange {
 public:
  AssignmentRange(Query query, std::size_t cap) : query_(std::move(query)) { query_.layout.check_cap(cap); }

  class iterator {
   public:
    using value_type = ModelAssignment;
    using difference_type = std::ptrdiff_t;
    using reference = const ModelAssignment&;
    using pointer = const ModelAssignment*;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    explicit iterator(const Query* q) : q_(q) {
      const auto n = q->final_step() + 1;
      cur_.theta = 0;
      cur_.env.assign(n, 0);
      cur_.sensors.assign(n, 0);
      for (std::size_t step = 0; step < q->t(); ++step) cur_.sensors[step] = q->past_sensors[step];
      cur_.actions = q->actions;
    }

    reference operator*() const { return cur_; }
    pointer operator->() const { return &cur_; }
    std::size_t index() const { return index_; }

    iterator& operator++() {
      ++index_;
      const auto& L = q_->layout;
      for (std::size_t step = L.final_step + 1; step-- > L.t;)
        if (++cur_.sensors[step] < L.sensor_size) return *this;
        else cur_.sensors[step] = 0;
      for (std::size_t step = L.final_step + 1; step-- > 0;)
        if (++cur_.env[step] < L.env_size) return *this;
        else cur_.env[step] = 0;
      if (++cur_.theta < L.theta_count) return *this;
      q_ = nullptr;
      return *this;
    }
    void operator++(int) { ++*this; }

    friend bool operator==(const iterator& a, const iterator& b) { return a.q_ == b.q_; }

   private:
    const Query* q_ = nullptr;
    ModelAssignment cur_;
    std::size_t index_ = 0;
  };

  iterator begin() const { return iterator(&query_); }
  iterator end() const { return iterator(); }
  const Query& query() const { return query_; }

 private:
  Query query_;
};

inline AssignmentRange enumerate_assignments(const GenerativeModel& model, const History& history,
                                             const ActionSeq& future, std::size_t cap = kDefaultEnumCap) {
  return AssignmentRange(make_query(model, history, future), cap);
}

/// All |A|^length sequences, lexicographic (first action most significant).
inline std::vector<ActionSeq> all_action_sequences(std::size_t n_actions, std::size_t length,
                                                   std::size_t cap = kDefaultEnumCap) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < length; ++i) {
    if (count > cap / n_actions)
      throw HorizonTooLarge("number of action sequences exceeds cap " + std::to_string(cap));
    count *= n_actions;
  }
  std::vector<ActionSeq> out;
  out.reserve(count);
  ActionSeq seq(length, 0);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(seq);
    for (std::size_t j = length; j-- > 0;)
      if (++seq[j] < n_actions) break;
      else seq[j] = 0;
  }
  return out;
}

inline std::vector<ActionSeq> future_action_sequences(const GenerativeModel& model, std::size_t t,
                                                      std::size_t cap = kDefaultEnumCap) {
  return all_action_sequences(model.action_size(), model.layout(t).future_actions(), cap);
}

}  // namespace aif
