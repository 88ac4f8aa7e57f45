#pragma once

// Finite categorical distributions, dense joint tables and the log-space
// numerics shared by every other module.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "aif/errors.hpp"

namespace aif {

/// Tolerance on the total mass of a normalized distribution.
inline constexpr double kNormTolerance = 1e-12;
/// Constructors renormalize drift below this and reject anything above.
inline constexpr double kRenormTolerance = 1e-9;
/// Sentinel for log(0). Never NaN.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// Value set {0, ..., size-1}.
class Alphabet {
 public:
  explicit Alphabet(std::size_t size) : size_(size) {
    if (size == 0) throw InvalidArgument("alphabet size must be at least 1");
  }
  std::size_t size() const noexcept { return size_; }
  bool contains(std::size_t symbol) const noexcept { return symbol < size_; }
  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_;
};

namespace detail {

inline std::vector<double> checked_normalize(std::vector<double> probs, const char* what) {
  if (probs.empty()) throw InvalidDistribution(std::string(what) + ": empty probability vector");
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream os;
      os << what << ": entry " << p << " is not a finite non-negative number";
      throw InvalidDistribution(os.str());
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kRenormTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": entries sum to " << total << ", expected 1";
    throw InvalidDistribution(os.str());
  }
  if (total != 1.0) {
    for (double& p : probs) p /= total;
  }
  return probs;
}

}  // namespace detail

/// Probability vector over an alphabet.
class Categorical {
 public:
  explicit Categorical(std::vector<double> probs)
      : probs_(detail::checked_normalize(std::move(probs), "Categorical")) {}

  static Categorical uniform(std::size_t n) {
    if (n == 0) throw InvalidArgument("uniform over empty alphabet");
    return Categorical(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }
  static Categorical point_mass(std::size_t n, std::size_t at) {
    if (at >= n) throw IndexOutOfAlphabet("point mass index out of alphabet");
    std::vector<double> p(n, 0.0);
    p[at] = 1.0;
    return Categorical(std::move(p));
  }

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }

  double entropy() const {
    double h = 0.0;
    for (double p : probs_)
      if (p > 0.0) h -= p * std::log(p);
    return h;
  }

  friend bool operator==(const Categorical&, const Categorical&) = default;

 private:
  std::vector<double> probs_;
};

/// Dense non-negative table over a product of alphabets, row-major (last dim fastest).
class JointTable {
 public:
  JointTable(std::vector<std::size_t> dims, std::vector<double> values, bool normalized = false)
      : dims_(std::move(dims)), values_(std::move(values)), normalized_(normalized) {
    std::size_t n = 1;
    for (std::size_t d : dims_) {
      if (d == 0) throw ShapeMismatch("JointTable: zero-sized dimension");
      n *= d;
    }
    if (n != values_.size()) throw ShapeMismatch("JointTable: value count does not match dims");
    if (normalized_) {
      values_ = detail::checked_normalize(std::move(values_), "JointTable");
    } else {
      for (double v : values_)
        if (!std::isfinite(v) || v < 0.0) throw InvalidDistribution("JointTable: negative or non-finite entry");
    }
  }

  /// Builds a normalized table from unnormalized log weights via log-sum-exp.
  static JointTable from_log_weights(std::vector<std::size_t> dims, std::span<const double> log_weights);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  bool normalized() const noexcept { return normalized_; }
  double total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> values_;
  bool normalized_;
};

/// log Σ exp(v) with max subtraction. Returns kLogZero when every entry is -inf.
inline double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("log_sum_exp of an empty vector");
  if (values.size() == 1) return values[0];
  const double m = *std::max_element(values.begin(), values.end());
  if (m == kLogZero) return kLogZero;
  if (!std::isfinite(m)) throw NonFiniteInput("log_sum_exp: non-finite maximum");
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - m);
  return m + std::log(acc);
}

inline JointTable JointTable::from_log_weights(std::vector<std::size_t> dims, std::span<const double> log_weights) {
  const double z = log_sum_exp(log_weights);
  if (z == kLogZero) throw DegenerateNormalizer("JointTable: all log weights are -inf");
  std::vector<double> v(log_weights.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(log_weights[i] - z);
  return JointTable(std::move(dims), std::move(v), true);
}

/// exp(γ·v_i) / Σ_j exp(γ·v_j).
inline Categorical softmax(std::span<const double> values, double gamma) {
  if (values.empty()) throw EmptyInput("softmax of an empty vector");
  if (!std::isfinite(gamma) || gamma < 0.0) throw NonFiniteInput("softmax: gamma must be finite and >= 0");
  for (double v : values)
    if (!std::isfinite(v)) throw NonFiniteInput("softmax: non-finite value");
  std::vector<double> scaled(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) scaled[i] = gamma * values[i];
  const double m = *std::max_element(scaled.begin(), scaled.end());
  double z = 0.0;
  for (double& s : scaled) {
    s = std::exp(s - m);
    z += s;
  }
  for (double& s : scaled) s /= z;
  return Categorical(std::move(scaled));
}

/// Σ p log(p/q) over flat arrays; 0·log(0/q) = 0.
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ShapeMismatch("kl_divergence: sizes differ");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      std::ostringstream os;
      os << "kl_divergence: p[" << i << "]=" << p[i] << " > 0 but q[" << i << "]=0";
      throw SupportViolation(os.str());
    }
    kl += p[i] * (std::log(p[i]) - std::log(q[i]));
  }
  // Rounding can push the sum of a vanishing divergence a hair below zero.
  return std::max(kl, 0.0);
}

inline double kl_divergence(const Categorical& p, const Categorical& q) {
  return kl_divergence(p.probs(), q.probs());
}

inline double kl_divergence(const JointTable& p, const JointTable& q) {
  if (p.dims() != q.dims()) throw ShapeMismatch("kl_divergence: table dims differ");
  return kl_divergence(p.values(), q.values());
}

/// Action sequences are plain symbol vectors; order across sets is lexicographic.
using ActionSeq = std::vector<std::size_t>;

inline std::string to_string(const ActionSeq& seq) {
  std::string s;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) s += '_';
    s += std::to_string(seq[i]);
  }
  return s;
}

}  // namespace aif
