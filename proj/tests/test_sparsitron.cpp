#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "spinlearn/sparsitron.hpp"

using namespace spinlearn;

namespace {

SparsitronConfig glm_config(double lambda) {
  SparsitronConfig cfg;
  cfg.lambda = lambda;
  cfg.eps = 0.01;
  cfg.delta = 0.1;
  return cfg;
}

double l1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

// Same rows as the wrapped set with the offset hard-wired to zero.
struct WithoutOffset {
  const oracle::PlantedGlm* base;
  std::size_t size() const { return base->size(); }
  std::size_t dim() const { return base->dim(); }
  int label(std::size_t k) const { return base->label(k); }
  double offset(std::size_t) const { return 0.0; }
  void features(std::size_t k, std::span<double> out) const { base->features(k, out); }
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TEST(Sigmoid, Examples) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  for (double z : {0.1, 1.0, 10.0}) EXPECT_NEAR(sigmoid(-z) + sigmoid(z), 1.0, 1e-15);
  EXPECT_NEAR(sigmoid(1.0), 0.73105857863000487925, 1e-15);
  EXPECT_EQ(sigmoid(-1000.0), 0.0);
  EXPECT_EQ(sigmoid(1000.0), 1.0);
}

TEST(AntiLipschitz, Examples) {
  const auto same = anti_lipschitz_gap(0.4, 0.4);
  EXPECT_EQ(same.lhs, 0.0);
  EXPECT_EQ(same.rhs, 0.0);
  const auto g = anti_lipschitz_gap(0.0, 1.0);
  EXPECT_NEAR(g.lhs, 0.2311, 1e-4);
  EXPECT_NEAR(g.rhs, std::exp(-3.0), 1e-15);
}

TEST(AntiLipschitz, HoldsOnGrid) {
  for (int ia = -1000; ia <= 1000; ++ia)
    for (int ib = -1000; ib <= 1000; ++ib) {
      const auto g = anti_lipschitz_gap(ia * 0.01, ib * 0.01);
      ASSERT_GE(g.lhs, g.rhs) << ia << " " << ib;
    }
}

TEST(Budget, AutoSizingFormula) {
  SparsitronConfig cfg = glm_config(3.0);
  const auto b = sparsitron_budget(cfg, 10);
  EXPECT_EQ(b.iterations, static_cast<std::size_t>(std::ceil(10.0 * 9.0 * std::log(20.0 / 0.001) / 1e-4)));
  EXPECT_EQ(b.holdout, static_cast<std::size_t>(std::ceil(10.0 * std::log(double(b.iterations) / 0.1) / 1e-4)));
  cfg.iterations = 500;
  cfg.holdout = 70;
  const auto fixed = sparsitron_budget(cfg, 10);
  EXPECT_EQ(fixed.iterations, 500u);
  EXPECT_EQ(fixed.holdout, 70u);
}

TEST(Config, RejectsOutOfRangeParameters) {
  SparsitronConfig cfg;
  cfg.lambda = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.lambda = 1.0;
  cfg.eps = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.eps = 0.1;
  cfg.delta = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Sparsitron, ZeroTargetHasSmallRisk) {
  oracle::PlantedGlm data{std::vector<double>(8, 0.0), 1, 0};
  SparsitronConfig cfg = glm_config(1.0);
  const auto b = sparsitron_budget(cfg, 8);
  data.count = b.iterations + b.holdout;
  const auto r = sparsitron(data, cfg);
  EXPECT_LE(data.exact_risk(r.weights), 0.01);
}

TEST(Sparsitron, PlantedTargetMeetsRisk) {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    oracle::PlantedGlm data{oracle::planted_vector(10, 3.0, 1000 + seed), 2000 + seed, 0};
    const SparsitronConfig cfg = glm_config(3.0);
    const auto b = sparsitron_budget(cfg, 10);
    data.count = b.iterations + b.holdout;
    const auto r = sparsitron(data, cfg);
    ok += data.exact_risk(r.weights) <= 0.01;
    EXPECT_LE(l1(r.weights), 3.0 + 1e-9);
  }
  EXPECT_GE(ok, 9);
}

TEST(Sparsitron, OffsetVariantMeetsRisk) {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    oracle::PlantedGlm data{oracle::planted_vector(10, 3.0, 3000 + seed), 4000 + seed, 0, 0.8, -0.3};
    const SparsitronConfig cfg = glm_config(3.0);
    const auto b = sparsitron_budget(cfg, 10);
    data.count = b.iterations + b.holdout;
    ok += data.exact_risk(sparsitron(data, cfg).weights) <= 0.01;
  }
  EXPECT_GE(ok, 9);
}

TEST(Sparsitron, ZeroOffsetIsBitIdenticalToPlain) {
  oracle::PlantedGlm data{oracle::planted_vector(6, 1.5, 5), 6, 60000};
  SparsitronConfig cfg = glm_config(1.5);
  cfg.iterations = 50000;
  cfg.holdout = 10000;
  const auto with = sparsitron(data, cfg);
  const auto without = sparsitron(WithoutOffset{&data}, cfg);
  EXPECT_EQ(with.weights, without.weights);
  EXPECT_EQ(with.chosen_iteration, without.chosen_iteration);
  EXPECT_EQ(with.holdout_risk, without.holdout_risk);
}

TEST(Sparsitron, RiskShrinksAsSamplesDouble) {
  const std::size_t n0 = 20000;
  std::vector<double> medians;
  for (std::size_t scale : {1, 2, 4}) {
    std::vector<double> risks;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      oracle::PlantedGlm data{oracle::planted_vector(10, 3.0, 7000 + seed), 8000 + seed, n0 * scale};
      SparsitronConfig cfg = glm_config(3.0);
      cfg.holdout = data.count / 10;
      cfg.iterations = data.count - cfg.holdout;
      risks.push_back(data.exact_risk(sparsitron(data, cfg).weights));
    }
    medians.push_back(median(risks));
  }
  EXPECT_LE(medians[1], medians[0]);
  EXPECT_LE(medians[2], medians[1]);
}

TEST(Sparsitron, TiesPickEarliestIteration) {
  // all-zero holdout features make every candidate score the same
  DenseExamples train(2);
  DenseExamples holdout(2);
  for (int k = 0; k < 200; ++k) {
    const double x[2] = {k % 2 ? 1.0 : -1.0, k % 3 ? 1.0 : -1.0};
    train.push(x, k % 5 ? 1 : -1);
    const double zero[2] = {0.0, 0.0};
    holdout.push(zero, k % 2 ? 1 : -1);
  }
  SparsitronConfig cfg;
  cfg.iterations = 200;
  cfg.holdout = 200;
  cfg.max_candidates = 0;
  cfg.keep_trace = true;
  const auto r = sparsitron(train, holdout, cfg);
  EXPECT_EQ(r.chosen_iteration, 1u);
  EXPECT_EQ(r.candidates, 200u);
  EXPECT_EQ(r.trace.size(), 200u);
}

TEST(Sparsitron, CandidateStrideKeepsLastIterate) {
  oracle::PlantedGlm data{oracle::planted_vector(4, 1.0, 9), 10, 11000};
  SparsitronConfig cfg = glm_config(1.0);
  cfg.iterations = 10000;
  cfg.holdout = 1000;
  cfg.max_candidates = 7;
  cfg.keep_trace = true;
  const auto r = sparsitron(data, cfg);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front().first, 1u);
  EXPECT_EQ(r.trace.back().first, 10000u);
  EXPECT_LE(r.candidates, 8u);
}

TEST(Sparsitron, RejectsBadLabelsFeaturesAndShortBatches) {
  SparsitronConfig cfg;
  cfg.iterations = 2;
  cfg.holdout = 1;
  DenseExamples bad_label(1);
  const double one[1] = {1.0};
  bad_label.push(one, 0);
  bad_label.push(one, 1);
  bad_label.push(one, 1);
  EXPECT_THROW(sparsitron(bad_label, cfg), ConfigError);

  DenseExamples bad_feature(1);
  const double big[1] = {1.5};
  bad_feature.push(big, 1);
  bad_feature.push(big, 1);
  bad_feature.push(one, 1);
  EXPECT_THROW(sparsitron(bad_feature, cfg), ConfigError);

  DenseExamples short_batch(1);
  short_batch.push(one, 1);
  EXPECT_THROW(sparsitron(short_batch, cfg), BudgetError);

  DenseExamples wrong_dim(2);
  EXPECT_THROW(sparsitron(bad_label, wrong_dim, cfg), DimensionError);
}
