#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "aif/exact_inference.hpp"
#include "aif/geometry_report.hpp"
#include "oracle.hpp"

using namespace aif;

namespace {

const ExpectedReward kReward({{0.0, 1.0}});

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("aif_geometry_" + name);
}

GeometrySnapshot random_snapshot(oracle::Engine& g, std::size_t step) {
  const auto spec = oracle::random_model(g, {2, 2, 2, 2, 1});
  const auto h = oracle::random_history(g, spec, 1);
  const GenerativeModel m(spec);
  const auto opt = optimize_all(m, h);
  const auto exact = exact_active_posterior(m, h);
  const auto r = induce_policy(opt.params.sequences, opt.params.posterior_blocks(), kReward, 1.0,
                               PolicyKind::variational_induced);
  return snapshot(exact, opt.params, r, kReward, 1.0, step);
}

}  // namespace

TEST(Snapshot, FactorizingModelPosteriorDistancesVanish) {
  oracle::Engine g(1);
  for (int rep = 0; rep < 10; ++rep) {
    const auto spec = oracle::factorizing_model(g, {2, 2, 2, 1, 1});
    const auto h = oracle::random_history(g, spec, 1);
    const GenerativeModel m(spec);
    const auto opt = optimize_all(m, h);
    const auto exact = exact_active_posterior(m, h);
    const auto s = optimal_third_policy(opt.params, opt.report.free_energy, kReward, 1.0);
    const auto snap = snapshot(exact, opt.params, s, kReward, 1.0);
    for (double v : snap.kl_variational_exact) EXPECT_LE(v, 1e-6);
    for (double v : snap.kl_exact_variational) EXPECT_LE(v, 1e-6);
    EXPECT_LE(snap.kl_r_q, 1e-6);
    EXPECT_TRUE(snap.support_violations.empty());
  }
}

TEST(Snapshot, SEqualsInducedGivesZeroD2) {
  oracle::Engine g(2);
  const auto snap = random_snapshot(g, 0);
  EXPECT_NEAR(snap.kl_s_r, 0.0, 1e-15);
  EXPECT_EQ(snap.d2, snap.kl_s_r);
  for (double v : snap.kl_variational_exact) EXPECT_GE(v, 0.0);
  EXPECT_GE(snap.kl_s_q, 0.0);
}

TEST(Snapshot, SingleActionPolicyDistancesZero) {
  oracle::Engine g(3);
  const auto spec = oracle::random_model(g, {2, 2, 1, 2, 1});
  const GenerativeModel m(spec);
  const auto h = oracle::random_history(g, spec, 1);
  const auto opt = optimize_all(m, h);
  const PolicyDistribution s{opt.params.sequences, Categorical::uniform(1), PolicyKind::third_policy};
  const auto snap = snapshot(exact_active_posterior(m, h), opt.params, s, kReward, 1.0);
  EXPECT_EQ(snap.kl_s_r, 0.0);
  EXPECT_EQ(snap.kl_r_q, 0.0);
  EXPECT_EQ(snap.kl_s_q, 0.0);
}

TEST(Snapshot, D1IsSWeightedFreeEnergy) {
  oracle::Engine g(4);
  for (int rep = 0; rep < 10; ++rep) {
    const auto spec = oracle::random_model(g, {2, 2, 2, 2, 1});
    const auto h = oracle::random_history(g, spec, 2);
    const GenerativeModel m(spec);
    const auto opt = optimize_all(m, h);
    const auto exact = exact_active_posterior(m, h);
    const auto s = optimal_third_policy(opt.params, opt.report.free_energy, kReward, 2.0);
    const auto snap = snapshot(exact, opt.params, s, kReward, 2.0);
    const auto b = combined_objective(m, h, opt.params, ThirdPolicyParams::direct(s), kReward, 2.0);
    EXPECT_NEAR(snap.d1, b.d1, 1e-9);
    EXPECT_NEAR(snap.d2, b.d2, 1e-12);
  }
}

TEST(Snapshot, SupportViolationRecorded) {
  // Deterministic sensor: a collapsed mean-field r misses half the exact support.
  const GenerativeModel m(oracle::bandit_model(0));
  VariationalOptions o;
  o.init = InitMode::perturbed;
  const auto opt = optimize_all(m, History{}, o);
  const auto exact = exact_active_posterior(m, History{});
  const auto s = optimal_third_policy(opt.params, opt.report.free_energy, kReward, 1.0);
  const auto snap = snapshot(exact, opt.params, s, kReward, 1.0);
  EXPECT_FALSE(snap.support_violations.empty());
  EXPECT_TRUE(std::isinf(snap.kl_exact_variational[0]));
  EXPECT_TRUE(std::isfinite(snap.kl_variational_exact[0]));
}

TEST(Snapshot, CaviTraceKlTracksFreeEnergy) {
  // F = -log evidence + KL(r || exact) at every sweep, so KL falls with F.
  oracle::Engine g(5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto spec = oracle::random_model(g, {2, 2, 2, 2, 1});
    const auto h = oracle::random_history(g, spec, 1);
    const GenerativeModel m(spec);
    const ActionSeq seq{1, 0};
    const auto exact = exact_posterior_block(m, h, seq, nullptr);
    const double lev = log_evidence(m, h, seq);
    auto block = oracle::random_block(g, m.layout(1));
    double prev_kl = INFINITY;
    for (int sweep = 0; sweep < 8; ++sweep) {
      CaviOptions o;
      o.max_iters = 1;
      const auto res = cavi_minimize(m, h, seq, block, o);
      block = res.block;
      const auto r = PosteriorBlock::mean_field(m.layout(1), block).joint();
      const double kl = kl_divergence(r, exact);
      EXPECT_NEAR(res.free_energy, -lev + kl, 1e-9);
      EXPECT_LE(kl, prev_kl + 1e-9);
      prev_kl = kl;
    }
  }
}

TEST(ExportCsv, EmptyListWritesHeaderOnly) {
  const auto p = temp_file("empty.csv");
  export_csv({}, p.string());
  std::ifstream in(p);
  std::string content((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(content, std::string(kGeometryCsvHeader) + "\n");
  EXPECT_TRUE(read_geometry_csv(p.string()).empty());
}

TEST(ExportCsv, RowCountAndRoundTrip) {
  oracle::Engine g(6);
  const std::vector<GeometrySnapshot> snaps{random_snapshot(g, 0), random_snapshot(g, 1)};
  const auto p = temp_file("two.csv");
  export_csv(snaps, p.string());
  const auto rows = read_geometry_csv(p.string());
  ASSERT_EQ(rows.size(), 2 * snaps[0].quantity_count());
  std::size_t i = 0;
  for (const auto& s : snaps)
    for (const auto& expected : geometry_rows(s)) {
      EXPECT_EQ(rows[i].step, expected.step);
      EXPECT_EQ(rows[i].quantity, expected.quantity);
      EXPECT_EQ(rows[i].action_seq, expected.action_seq);
      EXPECT_NEAR(rows[i].value, expected.value, 1e-12);
      ++i;
    }
}

TEST(ExportCsv, IoErrorsNamePath) {
  try {
    export_csv({}, "/nonexistent-dir/x.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
  EXPECT_THROW(read_geometry_csv("/nonexistent-dir/y.csv"), Error);
}
