#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "aif/exact_inference.hpp"
#include "aif/policy_selection.hpp"
#include "oracle.hpp"

using namespace aif;

namespace {

/// Layout with t=0, one env variable per step and `steps` free sensors.
PosteriorLayout sensor_layout(std::size_t ns, std::size_t steps, std::size_t ne = 1, std::size_t nth = 1) {
  return {nth, ne, ns, 0, steps - 1};
}

PosteriorBlock dense_uniform(const PosteriorLayout& l) {
  const auto n = l.cells();
  return PosteriorBlock::dense(l, JointTable(l.dims(), std::vector<double>(n, 1.0 / n), true));
}

PosteriorBlock random_dense(oracle::Engine& g, const PosteriorLayout& l) {
  const auto c = oracle::random_categorical(g, l.cells(), 0.2);
  return PosteriorBlock::dense(l, JointTable(l.dims(), {c.probs().begin(), c.probs().end()}, true));
}

/// Fixed-value functional for exercising the softmax operator.
class TableMotivation final : public MotivationFunctional {
 public:
  explicit TableMotivation(std::vector<double> v) : v_(std::move(v)) {}
  std::string name() const override { return "table"; }
  double evaluate(const PosteriorBlock&, const ActionSeq& a) const override { return v_.at(a.at(0)); }

 private:
  std::vector<double> v_;
};

std::vector<ActionSeq> single_step_sequences(std::size_t n) { return all_action_sequences(n, 1); }

std::vector<PosteriorBlock> dummy_blocks(std::size_t n) {
  return std::vector<PosteriorBlock>(n, dense_uniform(sensor_layout(1, 1)));
}

}  // namespace

TEST(ExpectedReward, PointMassTwoSteps) {
  const auto l = sensor_layout(2, 2);
  std::vector<double> v(l.cells(), 0.0);
  v[1 * 2 + 1] = 1.0;  // ŝ_t = 1, ŝ_{t+1} = 1
  const auto p = PosteriorBlock::dense(l, JointTable(l.dims(), v, true));
  EXPECT_DOUBLE_EQ(expected_reward(p, {0, 0}, {{0, 1}}), 2.0);
}

TEST(ExpectedReward, ZeroRewardsAndUniform) {
  oracle::Engine g(1);
  const auto l = sensor_layout(2, 2, 2, 2);
  EXPECT_EQ(expected_reward(random_dense(g, l), {0, 1}, {{0, 0}}), 0.0);
  EXPECT_NEAR(expected_reward(dense_uniform(l), {0, 1}, {{0, 1}}), 1.0, 1e-15);
}

TEST(ExpectedReward, ShapeErrors) {
  const auto p = dense_uniform(sensor_layout(2, 2));
  EXPECT_THROW(expected_reward(p, {0, 0}, {{0, 1, 2}}), ShapeMismatch);
  EXPECT_THROW(expected_reward(p, {0}, {{0, 1}}), ShapeMismatch);
}

TEST(ExpectedReward, LinearInPosterior) {
  oracle::Engine g(2);
  const auto l = sensor_layout(3, 2, 2, 2);
  const RewardStructure r{{-1.0, 0.5, 2.0}};
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = random_dense(g, l), q = random_dense(g, l);
    const double lam = std::uniform_real_distribution<double>(0, 1)(g);
    std::vector<double> mix(l.cells());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = lam * (*p.dense_table())[i] + (1 - lam) * (*q.dense_table())[i];
    const auto pm = PosteriorBlock::dense(l, JointTable(l.dims(), mix, true));
    EXPECT_NEAR(expected_reward(pm, {0, 0}, r), lam * expected_reward(p, {0, 0}, r) + (1 - lam) * expected_reward(q, {0, 0}, r),
                1e-10);
  }
}

TEST(ExpectedReward, MeanFieldMatchesDense) {
  oracle::Engine g(3);
  const auto l = sensor_layout(3, 3, 2, 2);
  const RewardStructure r{{0.3, -1.0, 4.0}};
  for (int rep = 0; rep < 20; ++rep) {
    const auto b = oracle::random_block(g, l);
    const auto mf = PosteriorBlock::mean_field(l, b);
    const auto dense = PosteriorBlock::dense(l, mf.joint());
    EXPECT_NEAR(expected_reward(mf, {0, 0, 0}, r), expected_reward(dense, {0, 0, 0}, r), 1e-12);
    EXPECT_NEAR(negative_expected_entropy(mf, {0, 0, 0}), negative_expected_entropy(dense, {0, 0, 0}), 1e-12);
  }
}

TEST(ExpectedReward, FromFactor) {
  const SensorFactorization f{{2, 2}, 1};
  const auto r = RewardStructure::from_factor(f, 1, {0.0, 1.0});
  EXPECT_EQ(r.values, (std::vector<double>{0, 1, 0, 1}));
  EXPECT_THROW(RewardStructure::from_factor(f, 1, {0.0}), ShapeMismatch);
  EXPECT_THROW(RewardStructure::from_factor(f, 2, {0.0, 1.0}), IndexOutOfAlphabet);
}

TEST(NegativeExpectedEntropy, Examples) {
  const auto l = sensor_layout(2, 2);
  std::vector<double> v(4, 0.0);
  v[2] = 1.0;
  EXPECT_EQ(negative_expected_entropy(PosteriorBlock::dense(l, JointTable(l.dims(), v, true)), {0, 0}), 0.0);
  EXPECT_NEAR(negative_expected_entropy(dense_uniform(l), {0, 0}), -std::log(4.0), 1e-15);
}

TEST(NegativeExpectedEntropy, MatchesDirectSummation) {
  oracle::Engine g(4);
  const auto l = sensor_layout(2, 2, 3, 2);
  for (int rep = 0; rep < 30; ++rep) {
    const auto p = random_dense(g, l);
    // sensor marginal by hand: sensors are the last two dims
    std::vector<double> marg(4, 0.0);
    const auto& t = *p.dense_table();
    for (std::size_t i = 0; i < t.size(); ++i) marg[i % 4] += t[i];
    double acc = 0.0;
    for (double m : marg)
      if (m > 0) acc += m * std::log(m);
    EXPECT_NEAR(negative_expected_entropy(p, {0, 0}), acc, 1e-12);
  }
}

TEST(Motivation, DependsOnlyOnSensorMarginal) {
  // Reshuffle mass among latent cells sharing the same sensor value.
  oracle::Engine g(5);
  const auto l = sensor_layout(2, 1, 3, 2);
  const RewardStructure r{{1.0, 3.0}};
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = random_dense(g, l);
    std::vector<double> v(p.dense_table()->values().begin(), p.dense_table()->values().end());
    std::vector<double> w(v.size(), 0.0);
    double s0 = 0, s1 = 0;
    for (std::size_t i = 0; i < v.size(); ++i) (i % 2 ? s1 : s0) += v[i];
    const auto c = oracle::random_categorical(g, v.size() / 2);
    for (std::size_t j = 0; j < v.size() / 2; ++j) {
      w[2 * j] = s0 * c[j];
      w[2 * j + 1] = s1 * c[j];
    }
    const auto q = PosteriorBlock::dense(l, JointTable(l.dims(), w, true));
    EXPECT_NEAR(expected_reward(p, {0}, r), expected_reward(q, {0}, r), 1e-12);
    EXPECT_NEAR(negative_expected_entropy(p, {0}), negative_expected_entropy(q, {0}), 1e-12);
  }
}

TEST(InducePolicy, Examples) {
  const auto seqs = single_step_sequences(2);
  const auto blocks = dummy_blocks(2);
  auto p = induce_policy(seqs, blocks, TableMotivation({5.0, -3.0}), 0.0, PolicyKind::exact_induced);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  p = induce_policy(seqs, blocks, TableMotivation({1.0, 0.0}), std::log(3.0), PolicyKind::exact_induced);
  EXPECT_NEAR(p[0], 0.75, 1e-15);
  EXPECT_EQ(p.kind, PolicyKind::exact_induced);
  p = induce_policy(seqs, blocks, TableMotivation({2.5, 2.5}), 17.0, PolicyKind::variational_induced);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
  EXPECT_STREQ(to_string(p.kind), "variational-induced");
}

TEST(InducePolicy, ErrorsCarrySequence) {
  const auto seqs = single_step_sequences(3);
  try {
    induce_policy(seqs, dummy_blocks(3), TableMotivation({1.0, 2.0}), 1.0, PolicyKind::exact_induced);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sequence 2"), std::string::npos);
  }
  EXPECT_THROW(induce_policy(seqs, dummy_blocks(2), TableMotivation({1, 2, 3}), 1.0, PolicyKind::exact_induced),
               ShapeMismatch);
}

TEST(InducePolicy, ShiftInvarianceConcentrationArgmax) {
  std::mt19937_64 g(6);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t k = 2 + rep % 6;
    std::vector<double> v(k), w;
    for (auto& x : v) x = u(g);
    // enforce a unique maximum with gap >= 0.1
    const auto best = std::max_element(v.begin(), v.end()) - v.begin();
    for (std::size_t i = 0; i < k; ++i)
      if (static_cast<std::ptrdiff_t>(i) != best) v[i] = std::min(v[i], v[best] - 0.1);
    const double c = u(g) * 100;
    for (double x : v) w.push_back(x + c);
    const auto seqs = single_step_sequences(k);
    const auto blocks = dummy_blocks(k);
    const double gamma = std::abs(u(g));
    const auto a = induce_policy(seqs, blocks, TableMotivation(v), gamma, PolicyKind::exact_induced);
    const auto b = induce_policy(seqs, blocks, TableMotivation(w), gamma, PolicyKind::exact_induced);
    for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);

    const auto sharp = induce_policy(seqs, blocks, TableMotivation(v), 1e4, PolicyKind::exact_induced);
    EXPECT_GE(sharp[best], 0.99);
    EXPECT_GE(sharp[best], 1.0 - (k - 1) * std::exp(-1e4 * 0.1));
    EXPECT_EQ(greedy_action_sequence(sharp), seqs[best]);
    for (double gm : {0.01, 1.0, 100.0})
      EXPECT_EQ(greedy_action_sequence(induce_policy(seqs, blocks, TableMotivation(v), gm, PolicyKind::exact_induced)),
                seqs[best]);
  }
}

TEST(GreedyActionSequence, ArgmaxAndTieBreak) {
  const auto seqs = single_step_sequences(2);
  EXPECT_EQ(greedy_action_sequence({seqs, Categorical({0.75, 0.25}), PolicyKind::exact_induced}), seqs[0]);
  EXPECT_EQ(greedy_action_sequence({seqs, Categorical({0.5, 0.5}), PolicyKind::exact_induced}), seqs[0]);
  EXPECT_EQ(greedy_action_sequence({seqs, Categorical({0.25, 0.75}), PolicyKind::exact_induced}), seqs[1]);
}

TEST(PolicyDistribution, FirstActionMarginalAndCsv) {
  const auto seqs = all_action_sequences(2, 2);
  const PolicyDistribution p{seqs, Categorical({0.1, 0.2, 0.3, 0.4}), PolicyKind::third_policy};
  const auto m = first_action_marginal(p, 2);
  EXPECT_NEAR(m[0], 0.3, 1e-15);
  EXPECT_NEAR(m[1], 0.7, 1e-15);
  std::ostringstream os;
  write_policy_csv(os, {p});
  EXPECT_NE(os.str().find("action_seq,probability,provenance\n0_0,0.10000000000000001,third-policy\n"), std::string::npos);
  EXPECT_THROW(PolicyDistribution(seqs, Categorical::uniform(3), PolicyKind::third_policy), ShapeMismatch);
}

TEST(InducePolicy, ExactBanditProbability) {
  // At t=1 the reward follows action 0 deterministically.
  const GenerativeModel m(oracle::bandit_model(0));
  History h;
  h.append({1, 0});
  const auto exact = exact_active_posterior(m, h);
  const auto p = induce_policy(exact.sequences, exact.blocks(), ExpectedReward({{0, 1}}), 10.0, PolicyKind::exact_induced);
  EXPECT_NEAR(p[0], std::exp(10.0) / (1 + std::exp(10.0)), 1e-12);
}
