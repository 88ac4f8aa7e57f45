#pragma once

// Divergences between the exact and variational objects of one planning step:
// in posterior space (per action sequence, both KL directions) and in policy
// space (third policy, induced variational policy, induced exact policy).

#include <cstdio>
#include <fstream>
#include <string>

#include "aif/active_inference.hpp"
#include "aif/exact_inference.hpp"

namespace aif {

struct GeometrySnapshot {
  std::size_t step = 0;
  std::vector<ActionSeq> sequences;
  std::vector<double> kl_variational_exact;  // KL(r_â ‖ q_â)
  std::vector<double> kl_exact_variational;  // KL(q_â ‖ r_â); +inf where r misses support
  double kl_s_r = 0.0;                       // = D2
  double kl_r_q = 0.0;
  double kl_s_q = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  /// Pairs whose divergence hit a support violation (value recorded as +inf).
  std::vector<std::string> support_violations;

  /// Rows this snapshot contributes to the CSV export.
  std::size_t quantity_count() const { return 2 * sequences.size() + 5; }
};

namespace detail {

inline double kl_or_inf(std::span<const double> p, std::span<const double> q, const std::string& label,
                        std::vector<std::string>& violations) {
  try {
    return kl_divergence(p, q);
  } catch (const SupportViolation&) {
    violations.push_back(label);
    return INFINITY;
  }
}

}  // namespace detail

/// D1 is Σ_â s(â) F[â] with F[â] = −log evidence(â) + KL(r_â ‖ q_â), both taken
/// from the exact table.
inline GeometrySnapshot snapshot(const ActivePosteriorTable& exact, const VariationalParams& phi,
                                 const PolicyDistribution& s, const MotivationFunctional& m, double gamma,
                                 std::size_t step = 0, std::size_t cap = kDefaultEnumCap) {
  if (!(exact.layout == phi.layout)) throw ShapeMismatch("snapshot: exact and variational layouts differ");
  if (exact.sequences != phi.sequences || s.sequences != phi.sequences)
    throw ShapeMismatch("snapshot: action sequence sets differ");
  GeometrySnapshot g;
  g.step = step;
  g.sequences = exact.sequences;
  const auto vblocks = phi.posterior_blocks();
  for (std::size_t i = 0; i < exact.sequences.size(); ++i) {
    const auto r = vblocks[i].joint(cap);
    const auto label = to_string(exact.sequences[i]);
    g.kl_variational_exact.push_back(
        detail::kl_or_inf(r.values(), exact.tables[i].values(), "r||q " + label, g.support_violations));
    g.kl_exact_variational.push_back(
        detail::kl_or_inf(exact.tables[i].values(), r.values(), "q||r " + label, g.support_violations));
  }
  const auto r_ind = induce_policy(phi.sequences, vblocks, m, gamma, PolicyKind::variational_induced);
  const auto q_ind = induce_policy(exact.sequences, exact.blocks(), m, gamma, PolicyKind::exact_induced);
  g.kl_s_r = detail::kl_or_inf(s.probs.probs(), r_ind.probs.probs(), "s||r-induced", g.support_violations);
  g.kl_r_q = detail::kl_or_inf(r_ind.probs.probs(), q_ind.probs.probs(), "r-induced||q-induced", g.support_violations);
  g.kl_s_q = detail::kl_or_inf(s.probs.probs(), q_ind.probs.probs(), "s||q-induced", g.support_violations);
  g.d2 = g.kl_s_r;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] > 0.0) g.d1 += s[i] * (-exact.log_evidence[i] + g.kl_variational_exact[i]);
  return g;
}

/// One row of the geometry CSV.
struct GeometryRow {
  std::size_t step;
  std::string quantity;
  std::string action_seq;
  double value;
};

inline constexpr const char* kGeometryCsvHeader = "step,quantity_name,action_seq,value";

inline std::vector<GeometryRow> geometry_rows(const GeometrySnapshot& g) {
  std::vector<GeometryRow> rows;
  for (std::size_t i = 0; i < g.sequences.size(); ++i)
    rows.push_back({g.step, "kl_variational_exact", to_string(g.sequences[i]), g.kl_variational_exact[i]});
  for (std::size_t i = 0; i < g.sequences.size(); ++i)
    rows.push_back({g.step, "kl_exact_variational", to_string(g.sequences[i]), g.kl_exact_variational[i]});
  rows.push_back({g.step, "kl_s_r_induced", "-", g.kl_s_r});
  rows.push_back({g.step, "kl_r_induced_q_induced", "-", g.kl_r_q});
  rows.push_back({g.step, "kl_s_q_induced", "-", g.kl_s_q});
  rows.push_back({g.step, "D1", "-", g.d1});
  rows.push_back({g.step, "D2", "-", g.d2});
  return rows;
}

inline void write_geometry_csv(std::ostream& os, const std::vector<GeometrySnapshot>& snapshots) {
  os << kGeometryCsvHeader << '\n';
  char buf[64];
  for (const auto& g : snapshots)
    for (const auto& r : geometry_rows(g)) {
      std::snprintf(buf, sizeof buf, "%.17g", r.value);
      os << r.step << ',' << r.quantity << ',' << r.action_seq << ',' << buf << '\n';
    }
}

inline void export_csv(const std::vector<GeometrySnapshot>& snapshots, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_geometry_csv(out, snapshots);
  if (!out) throw Error("write failed for " + path);
}

inline std::vector<GeometryRow> read_geometry_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path + " for reading");
  std::string line;
  if (!std::getline(in, line) || line != kGeometryCsvHeader) throw Error(path + ": missing or unexpected header");
  std::vector<GeometryRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1)
      f.push_back(line.substr(start, pos - start));
    f.push_back(line.substr(start));
    if (f.size() != 4) throw Error(path + ":" + std::to_string(lineno) + ": expected 4 fields");
    rows.push_back({std::stoul(f[0]), f[1], f[2], std::strtod(f[3].c_str(), nullptr)});
  }
  return rows;
}

}  // namespace aif
