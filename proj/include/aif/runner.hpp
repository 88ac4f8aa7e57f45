#pragma once

// Config-driven experiment runner: builds the agent for the configured mode,
// runs the loop and writes trajectory.jsonl, diagnostics.jsonl, manifest.yaml
// and (with the exact oracle enabled) geometry.csv.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aif/config.hpp"
#include "aif/exact_inference.hpp"
#include "aif/geometry_report.hpp"

namespace aif {

namespace detail {

inline Json json_number(double v) {
  // JSON has no infinities; keep them readable.
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline Json json_numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

inline Json json_sequences(const std::vector<ActionSeq>& seqs) {
  Json a = Json::array();
  for (const auto& s : seqs) a.push_back(to_string(s));
  return a;
}

inline Json json_policy(const PolicyDistribution& p) {
  return json_numbers({p.probs.probs().begin(), p.probs.probs().end()});
}

inline void put_geometry(Json& d, const GeometrySnapshot& g) {
  Json j;
  j["kl_variational_exact"] = json_numbers(g.kl_variational_exact);
  j["kl_exact_variational"] = json_numbers(g.kl_exact_variational);
  j["kl_s_r_induced"] = json_number(g.kl_s_r);
  j["kl_r_induced_q_induced"] = json_number(g.kl_r_q);
  j["kl_s_q_induced"] = json_number(g.kl_s_q);
  j["D1"] = json_number(g.d1);
  j["D2"] = json_number(g.d2);
  if (!g.support_violations.empty()) j["support_violations"] = g.support_violations;
  d["geometry"] = std::move(j);
}

inline void put_decision(Json& d, const PolicyDistribution& p, std::size_t sampled) {
  d["policy_kind"] = to_string(p.kind);
  d["policy"] = json_policy(p);
  d["sampled_sequence"] = to_string(p.sequences[sampled]);
  d["greedy_sequence"] = to_string(greedy_action_sequence(p));
  d["action"] = p.sequences[sampled].front();
}

}  // namespace detail

struct RunResult {
  TrajectoryRecord trajectory;
  std::vector<GeometrySnapshot> geometry;
};

/// Agent for the configured mode. `agent_rng` drives action sampling only;
/// snapshots are appended to `geometry` when the exact oracle is enabled.
inline Agent make_agent(const ExperimentConfig& cfg, const GenerativeModel& model, const MotivationFunctional& m,
                        Rng& agent_rng, std::vector<GeometrySnapshot>& geometry) {
  return [&cfg, &model, &m, &agent_rng, &geometry](const History& history) -> AgentDecision {
    const auto t = history.length();
    const auto opts = cfg.optimizer_options(t);
    const auto cap = cfg.enum_cap;
    Json d;
    d["t"] = t;
    d["mode"] = to_string(cfg.mode);

    switch (cfg.mode) {
      case AgentMode::exact_induced: {
        const auto exact = exact_active_posterior(model, history, cap);
        const auto blocks = exact.blocks();
        const auto values = motivation_values(exact.sequences, blocks, m);
        PolicyDistribution q{exact.sequences, softmax(values, cfg.gamma), PolicyKind::exact_induced};
        const auto k = agent_rng.sample(q.probs);
        d["sequences"] = detail::json_sequences(exact.sequences);
        d["log_evidence"] = detail::json_numbers(exact.log_evidence);
        d["motivation"] = detail::json_numbers(values);
        detail::put_decision(d, q, k);
        if (cfg.enable_exact_oracle) {
          const auto opt = optimize_all(model, history, opts.variational);
          auto g = snapshot(exact, opt.params, q, m, cfg.gamma, t, cap);
          detail::put_geometry(d, g);
          geometry.push_back(std::move(g));
        }
        return {q.sequences[k].front(), std::move(d)};
      }
      case AgentMode::variational_induced: {
        const auto opt = optimize_all(model, history, opts.variational);
        const auto blocks = opt.params.posterior_blocks();
        const auto values = motivation_values(opt.params.sequences, blocks, m);
        PolicyDistribution r{opt.params.sequences, softmax(values, cfg.gamma), PolicyKind::variational_induced};
        const auto k = agent_rng.sample(r.probs);
        d["sequences"] = detail::json_sequences(r.sequences);
        d["free_energy"] = detail::json_numbers(opt.report.free_energy);
        if (opt.report.gap) d["gap"] = detail::json_numbers(*opt.report.gap);
        std::vector<double> sweeps;
        for (const auto& run : opt.runs) sweeps.push_back(static_cast<double>(run.sweeps));
        d["cavi_sweeps"] = sweeps;
        d["motivation"] = detail::json_numbers(values);
        detail::put_decision(d, r, k);
        if (cfg.enable_exact_oracle) {
          const auto exact = exact_active_posterior(model, history, cap);
          auto g = snapshot(exact, opt.params, r, m, cfg.gamma, t, cap);
          detail::put_geometry(d, g);
          geometry.push_back(std::move(g));
        }
        return {r.sequences[k].front(), std::move(d)};
      }
      case AgentMode::active_inference: {
        const auto res = active_inference_step(model, history, m, cfg.gamma, opts, agent_rng);
        const auto& last = res.trace.back();
        d["sequences"] = detail::json_sequences(res.s.sequences);
        d["free_energy"] = detail::json_numbers(last.free_energies);
        d["D1"] = detail::json_number(last.d1);
        d["D2"] = detail::json_number(last.d2);
        d["total"] = detail::json_number(last.total);
        d["joint_form"] = last.joint_form ? detail::json_number(*last.joint_form) : Json(nullptr);
        d["r_induced"] = detail::json_policy(last.r_induced);
        d["outer_iterations"] = res.outer_iterations;
        std::vector<double> totals;
        for (const auto& b : res.trace) totals.push_back(b.total);
        d["objective_trace"] = detail::json_numbers(totals);
        detail::put_decision(d, res.s, res.sampled_index);
        if (cfg.enable_exact_oracle) {
          const auto exact = exact_active_posterior(model, history, cap);
          auto g = snapshot(exact, res.phi, res.s, m, cfg.gamma, t, cap);
          detail::put_geometry(d, g);
          geometry.push_back(std::move(g));
        }
        return {res.action, std::move(d)};
      }
    }
    throw InvalidArgument("unknown agent mode");
  };
}

/// Runs the loop without touching the filesystem.
inline RunResult run_mode(const ExperimentConfig& cfg) {
  cfg.validate();
  const GenerativeModel model(cfg.model);
  const auto m = cfg.make_motivation();
  Rng env_rng(derive_seed(cfg.seed, "env"));
  Rng agent_rng(derive_seed(cfg.seed, "agent"));
  RunResult out;
  const auto agent = make_agent(cfg, model, *m, agent_rng, out.geometry);
  out.trajectory = run_loop(cfg.environment, agent, cfg.steps, env_rng);
  return out;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot open " + p.string() + " for writing");
  return out;
}

}  // namespace detail

inline void write_diagnostics(const TrajectoryRecord& rec, std::ostream& os) {
  for (const auto& s : rec.steps) os << s.diagnostics.dump() << '\n';
}

/// Writes all outputs into cfg.out_dir and returns the paths written.
inline std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg) {
  const auto res = run_mode(cfg);
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;

  auto emit = [&](const char* name, auto&& body) {
    const auto p = dir / name;
    auto out = detail::open_output(p);
    body(out);
    if (!out) throw Error("write failed for " + p.string());
    written.push_back(p);
  };
  emit("trajectory.jsonl", [&](std::ostream& o) { write_jsonl(res.trajectory, o); });
  emit("diagnostics.jsonl", [&](std::ostream& o) { write_diagnostics(res.trajectory, o); });
  emit("manifest.yaml", [&](std::ostream& o) { o << emit_config(cfg); });
  if (cfg.enable_exact_oracle) {
    emit("geometry.csv", [&](std::ostream& o) { write_geometry_csv(o, res.geometry); });
  }
  return written;
}

struct ComparisonRow {
  std::size_t step;
  AgentMode mode;
  std::size_t action;
  std::string sampled_sequence;
  std::string greedy_sequence;
  std::vector<double> policy;
  std::optional<std::vector<double>> free_energy;
  std::optional<double> d1;
  std::optional<double> d2;
};

inline constexpr const char* kComparisonCsvHeader =
    "step,mode,action,sampled_sequence,greedy_sequence,policy,free_energy,D1,D2";

/// Runs every mode from the same seed; each mode's streams derive from it identically.
inline std::vector<ComparisonRow> compare_modes(const ExperimentConfig& cfg, const std::vector<AgentMode>& modes) {
  if (modes.empty()) throw InvalidArgument("compare_modes: no modes given");
  std::vector<ComparisonRow> rows;
  for (auto mode : modes) {
    auto c = cfg;
    c.mode = mode;
    const auto res = run_mode(c);
    for (const auto& s : res.trajectory.steps) {
      const auto& d = s.diagnostics;
      ComparisonRow row{s.step, mode, s.action, d["sampled_sequence"].get<std::string>(),
                        d["greedy_sequence"].get<std::string>(), {}, std::nullopt, std::nullopt, std::nullopt};
      for (const auto& p : d["policy"]) row.policy.push_back(p.get<double>());
      auto num = [](const Json& j) { return j.is_number() ? j.get<double>() : (j == "-inf" ? -INFINITY : INFINITY); };
      if (d.contains("free_energy")) {
        row.free_energy.emplace();
        for (const auto& f : d["free_energy"]) row.free_energy->push_back(num(f));
      }
      if (d.contains("D1")) row.d1 = num(d["D1"]);
      if (d.contains("D2")) row.d2 = num(d["D2"]);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
    return s;
  };
  os << kComparisonCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.step << ',' << to_string(r.mode) << ',' << r.action << ',' << r.sampled_sequence << ','
       << r.greedy_sequence << ',' << list(r.policy) << ',' << (r.free_energy ? list(*r.free_energy) : "-") << ','
       << (r.d1 ? fmt(*r.d1) : "-") << ',' << (r.d2 ? fmt(*r.d2) : "-") << '\n';
  }
}

}  // namespace aif
