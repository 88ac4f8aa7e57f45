#pragma once

// One entry d(·,·,·|â) of an active posterior: either a dense joint table over
// the free space of a PosteriorLayout, or a mean-field product of categorical
// factors. Motivation functionals and policy induction consume both.

#include <variant>

#include "aif/core.hpp"
#include "aif/generative_model.hpp"

namespace aif {

/// Mean-field factors r(θ) Π_τ r(ê_τ) Π_{τ≥t} r(ŝ_τ).
struct MeanFieldBlock {
  Categorical theta = Categorical::uniform(1);
  std::vector<Categorical> env;      // ê_0..ê_T
  std::vector<Categorical> sensors;  // ŝ_t..ŝ_T

  static MeanFieldBlock uniform(const PosteriorLayout& layout) {
    return {Categorical::uniform(layout.theta_count),
            std::vector<Categorical>(layout.env_vars(), Categorical::uniform(layout.env_size)),
            std::vector<Categorical>(layout.sensor_vars(), Categorical::uniform(layout.sensor_size))};
  }

  void check(const PosteriorLayout& layout) const {
    bool ok = theta.size() == layout.theta_count && env.size() == layout.env_vars() &&
              sensors.size() == layout.sensor_vars();
    for (const auto& f : env) ok = ok && f.size() == layout.env_size;
    for (const auto& f : sensors) ok = ok && f.size() == layout.sensor_size;
    if (!ok) throw ShapeMismatch("mean-field block does not match the posterior layout");
  }

  double entropy() const {
    double h = theta.entropy();
    for (const auto& f : env) h += f.entropy();
    for (const auto& f : sensors) h += f.entropy();
    return h;
  }

  friend bool operator==(const MeanFieldBlock&, const MeanFieldBlock&) = default;
};

namespace detail {

/// Visits every cell of `dims` in row-major order with its multi-index.
template <typename F>
void for_each_cell(const std::vector<std::size_t>& dims, F&& f) {
  std::vector<std::size_t> idx(dims.size(), 0);
  std::size_t flat = 0;
  while (true) {
    f(flat, std::as_const(idx));
    ++flat;
    std::size_t j = dims.size();
    while (j-- > 0) {
      if (++idx[j] < dims[j]) break;
      idx[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) return;
  }
}

}  // namespace detail

class PosteriorBlock {
 public:
  static PosteriorBlock dense(PosteriorLayout layout, JointTable table) {
    if (table.dims() != layout.dims()) throw ShapeMismatch("posterior table dims do not match the layout");
    if (!table.normalized()) throw InvalidDistribution("posterior table must be normalized");
    return PosteriorBlock(layout, std::move(table));
  }
  static PosteriorBlock mean_field(PosteriorLayout layout, MeanFieldBlock block) {
    block.check(layout);
    return PosteriorBlock(layout, std::move(block));
  }

  const PosteriorLayout& layout() const noexcept { return layout_; }
  bool is_dense() const noexcept { return std::holds_alternative<JointTable>(repr_); }
  const JointTable* dense_table() const { return std::get_if<JointTable>(&repr_); }
  const MeanFieldBlock* factors() const { return std::get_if<MeanFieldBlock>(&repr_); }

  /// Full joint over the layout; mean-field blocks are expanded (capped).
  JointTable joint(std::size_t cap = kDefaultEnumCap) const {
    if (const auto* t = dense_table()) return *t;
    layout_.check_cap(cap);
    const auto& mf = std::get<MeanFieldBlock>(repr_);
    const auto dims = layout_.dims();
    const auto n_env = layout_.env_vars();
    std::vector<double> v(layout_.cells());
    detail::for_each_cell(dims, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
      double p = mf.theta[idx[0]];
      for (std::size_t i = 0; i < n_env && p > 0.0; ++i) p *= mf.env[i][idx[1 + i]];
      for (std::size_t i = 0; i < mf.sensors.size() && p > 0.0; ++i) p *= mf.sensors[i][idx[1 + n_env + i]];
      v[flat] = p;
    });
    return JointTable(dims, std::move(v), true);
  }

  /// Marginal over the future sensors ŝ_{t:T}.
  JointTable sensor_marginal() const {
    const auto sdims = layout_.sensor_dims();
    std::size_t m = 1;
    for (auto d : sdims) m *= d;
    std::vector<double> v(m, 0.0);
    if (const auto* t = dense_table()) {
      const auto vals = t->values();
      for (std::size_t i = 0; i < vals.size(); ++i) v[i % m] += vals[i];
    } else {
      const auto& mf = std::get<MeanFieldBlock>(repr_);
      detail::for_each_cell(sdims, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
        double p = 1.0;
        for (std::size_t i = 0; i < idx.size(); ++i) p *= mf.sensors[i][idx[i]];
        v[flat] = p;
      });
    }
    return JointTable(sdims, std::move(v), true);
  }

  Categorical theta_marginal() const {
    if (const auto* mf = factors()) return mf->theta;
    const auto* t = dense_table();
    const std::size_t stride = t->size() / layout_.theta_count;
    std::vector<double> v(layout_.theta_count, 0.0);
    for (std::size_t i = 0; i < t->size(); ++i) v[i / stride] += (*t)[i];
    return Categorical(std::move(v));
  }

  Categorical env_marginal(std::size_t step) const {
    if (step >= layout_.env_vars()) throw IndexOutOfAlphabet("env marginal step out of horizon");
    if (const auto* mf = factors()) return mf->env[step];
    const auto* t = dense_table();
    std::size_t stride = 1;
    const auto dims = layout_.dims();
    for (std::size_t j = dims.size(); j-- > 2 + step;) stride *= dims[j];
    std::vector<double> v(layout_.env_size, 0.0);
    for (std::size_t i = 0; i < t->size(); ++i) v[(i / stride) % layout_.env_size] += (*t)[i];
    return Categorical(std::move(v));
  }

 private:
  PosteriorBlock(PosteriorLayout layout, std::variant<JointTable, MeanFieldBlock> repr)
      : layout_(layout), repr_(std::move(repr)) {}

  PosteriorLayout layout_;
  std::variant<JointTable, MeanFieldBlock> repr_;
};

}  // namespace aif
