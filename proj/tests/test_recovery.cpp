#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spinlearn/recovery.hpp"

using namespace spinlearn;

namespace {

RecoveryConfig fit_config(std::size_t t, double lambda) {
  RecoveryConfig cfg;
  cfg.t = t;
  cfg.lambda = lambda;
  cfg.budget = BudgetMode::fit;
  return cfg;
}

EnsembleInfo rademacher_info(EnsembleKind kind, double beta, std::size_t n, std::size_t d, std::size_t t,
                             FieldMode field = FieldMode::zero) {
  EnsembleInfo e;
  e.kind = kind;
  e.beta = beta;
  e.n = n;
  e.d = d;
  e.t = t;
  e.weight_dist = WeightDist::rademacher;
  e.field_mode = field;
  return e;
}

double max_abs(const IsingModel& m) {
  double v = 0.0;
  for (double a : m.a_data()) v = std::max(v, std::abs(a));
  for (double h : m.h_data()) v = std::max(v, std::abs(h));
  return v;
}

}  // namespace

TEST(Features, Examples) {
  EXPECT_EQ(expand_features(Config{1, -1}, FeatureMap(2, 1)), (std::vector<double>{1, 1, -1}));
  const FeatureMap fm(3, 2);
  const auto f = expand_features(Config{1, -1, 1}, fm);
  ASSERT_EQ(fm.size(), 7u);
  // constant, x1, x1x2, x1x3, x2, x2x3, x3 in lexicographic order
  EXPECT_EQ(fm.monomial(2), (Monomial{0, 1}));
  EXPECT_EQ(f[2], -1.0);
  EXPECT_EQ(f[3], 1.0);
  EXPECT_EQ(f[5], -1.0);
  EXPECT_EQ(FeatureMap(10, 2).size(), 56u);
  EXPECT_THROW(expand_features(Config{1, 1}, fm), DimensionError);
}

TEST(Features, ExcludedNodeIsAbsent) {
  const FeatureMap fm(5, 2, 3u);
  EXPECT_EQ(fm.size(), 1u + 4u + 6u);
  for (const auto& s : fm.monomials()) EXPECT_FALSE(s.contains(3));
}

TEST(RoundToGrid, Examples) {
  EXPECT_EQ(round_to_grid(0.6, 0.5), 0.5);
  EXPECT_EQ(round_to_grid(-0.3, 0.25), -0.25);
  EXPECT_EQ(round_to_grid(0.25, 0.5), 0.0);
  EXPECT_EQ(round_to_grid(-0.75, 0.5), -0.5);
  EXPECT_EQ(round_to_grid(0.76, 0.5), 1.0);
  EXPECT_THROW(round_to_grid(1.0, 0.0), ConfigError);
  EXPECT_THROW(round_to_grid(1.0, -1.0), ConfigError);
}

TEST(Bounds, AutoLambdaPerEnsemble) {
  RecoveryConfig cfg;
  EnsembleInfo e;
  e.kind = EnsembleKind::sk;
  e.beta = 1.5;
  e.n = 12;
  cfg.ensemble = e;
  EXPECT_NEAR(auto_lambda(cfg, 12), 2.0 * 1.5 * std::sqrt(12.0 * std::log(12.0)), 1e-12);
  cfg.ensemble = rademacher_info(EnsembleKind::random_mrf, 1.0, 10, 3, 3);
  EXPECT_NEAR(auto_lambda(cfg, 10), 2.0 * 16.0, 1e-12);
  cfg.ensemble->weight_dist = WeightDist::gaussian;
  EXPECT_NEAR(auto_lambda(cfg, 10), 32.0 * std::sqrt(3.0 * std::log(10.0)), 1e-12);
  cfg.lambda = 4.0;
  EXPECT_EQ(auto_lambda(cfg, 10), 4.0);
  cfg.lambda = 0.0;
  cfg.ensemble->beta = 0.0;
  EXPECT_EQ(auto_lambda(cfg, 10), 1.0);
  cfg.ensemble.reset();
  EXPECT_THROW(auto_lambda(cfg, 10), ConfigError);
}

TEST(Bounds, AutoSmoothnessAndMedianCount) {
  RecoveryConfig cfg;
  cfg.t = 3;
  cfg.ensemble = rademacher_info(EnsembleKind::random_mrf, 1.0, 10, 3, 3);
  EXPECT_NEAR(auto_smoothness(cfg, 10), 4.0 * (3.0 + 3.0 * std::sqrt(std::log(10.0))), 1e-12);
  EXPECT_EQ(auto_median_samples(cfg, 10), static_cast<std::size_t>(std::ceil(8.0 * std::log(1000.0 / 0.1))));
  cfg.ensemble.reset();
  EXPECT_THROW(auto_smoothness(cfg, 10), ConfigError);
  cfg.budget = BudgetMode::fit;
  EXPECT_EQ(auto_smoothness(cfg, 10), 0.0);
}

TEST(Assemble, AverageNeverWorsensTheWorseNode) {
  // node 0 sees 2*(a + 0.04), node 1 sees 2*(a - 0.02) for the pair coefficient
  const double a = 0.7;
  Polynomial p0(2, 1);
  p0.set(Monomial{1}, 2.0 * (a + 0.04));
  Polynomial p1(2, 1);
  p1.set(Monomial{0}, 2.0 * (a - 0.02));
  const Polynomial avg = assemble({p0, p1}, 2, 2, AssemblyRule::average);
  EXPECT_NEAR(avg.coef({0, 1}), a + 0.01, 1e-15);
  EXPECT_LE(std::abs(avg.coef({0, 1}) - a), 0.04);
  const Polynomial first = assemble({p0, p1}, 2, 2, AssemblyRule::min_index);
  EXPECT_NEAR(first.coef({0, 1}), a + 0.04, 1e-15);
}

TEST(RecoverIsing, ZeroModel) {
  const SampleBatch s = exact_sample(Polynomial(5, 2), 100'000, 1);
  const RecoveryReport r = recover_ising(s, fit_config(2, 1.0));
  ASSERT_TRUE(r.ising_estimate);
  EXPECT_LE(max_abs(*r.ising_estimate), 0.05);
}

TEST(RecoverIsing, SingleEdge) {
  IsingModel m(2);
  m.set_a(0, 1, 1.0);
  const SampleBatch s = exact_sample(ising_to_poly(m), 100'000, 2);
  const RecoveryReport r = recover_ising(s, fit_config(2, 2.0));
  EXPECT_NEAR(r.ising_estimate->a(0, 1), 1.0, 0.1);
}

TEST(RecoverIsing, AgreesWithAveragedMrf) {
  const IsingModel m = gen_sk(6, 1.0, FieldMode::gaussian, 4);
  const SampleBatch s = exact_sample(ising_to_poly(m), 50'000, 5);
  const RecoveryReport ising = recover_ising(s, fit_config(2, 5.0));
  RecoveryConfig cfg = fit_config(2, 5.0);
  cfg.assembly = AssemblyRule::average;
  const RecoveryReport mrf = recover_mrf(s, cfg);
  const IsingModel from_mrf = poly_to_ising(mrf.estimate);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(from_mrf.h(i), ising.ising_estimate->h(i), 1e-9);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(from_mrf.a(i, j), ising.ising_estimate->a(i, j), 1e-9);
  }
}

TEST(RecoverIsing, NonIidSamplesAreFlagged) {
  const SampleBatch s = glauber_chain(Polynomial(3, 2), 20'000, 100, 3, 1);
  const RecoveryReport r = recover_ising(s, fit_config(2, 1.0));
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("non-iid"), std::string::npos);
}

TEST(RecoverIsing, StrictBudgetRejectsShortBatches) {
  RecoveryConfig cfg;
  EnsembleInfo e;
  e.kind = EnsembleKind::sk;
  e.beta = 1.0;
  e.n = 4;
  cfg.ensemble = e;
  const SampleBatch s = exact_sample(Polynomial(4, 2), 1000, 1);
  EXPECT_THROW(recover_ising(s, cfg), BudgetError);
}

TEST(RecoverMrf, ZeroModelThirdOrder) {
  const SampleBatch s = exact_sample(Polynomial(4, 3), 100'000, 3);
  const RecoveryReport r = recover_mrf(s, fit_config(3, 1.0));
  EXPECT_LE(l1_norm(r.estimate), 0.1);
}

TEST(RecoverMrf, TriangleGaussianThirdOrder) {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Polynomial psi = gen_random_mrf(complete_graph(3), 1.0, 3, WeightDist::gaussian, 50 + seed);
    const SampleBatch s = exact_sample(psi, 1'000'000, 60 + seed);
    RecoveryConfig cfg;
    cfg.t = 3;
    cfg.budget = BudgetMode::fit;
    EnsembleInfo e;
    e.kind = EnsembleKind::random_mrf;
    e.beta = 1.0;
    e.n = 3;
    e.d = 2;
    e.t = 3;
    cfg.ensemble = e;
    const RecoveryReport r = recover_mrf(s, cfg);
    ok += l1_distance(psi, r.estimate) <= 0.3;
  }
  EXPECT_GE(ok, 9);
}

TEST(RecoverMrf, AuditRecordsTheBudgetConversion) {
  RecoveryConfig cfg = fit_config(3, 2.5);
  cfg.smoothness = 0.7;
  cfg.eps = 0.2;
  const SampleBatch s = exact_sample(Polynomial(4, 3), 5000, 3);
  const RecoveryReport r = recover_mrf(s, cfg);
  EXPECT_EQ(r.lambda, 2.5);
  EXPECT_EQ(r.smoothness, 0.7);
  EXPECT_DOUBLE_EQ(r.inner_eps, std::exp(-10.0 * 0.7) * 0.04);
  EXPECT_EQ(r.nodes.size(), 4u);
  for (const auto& d : r.nodes) {
    EXPECT_EQ(d.iterations + d.holdout, 5000u);
    EXPECT_GE(d.holdout_risk, 0.0);
  }
  ASSERT_EQ(r.slices.size(), 1u);
  EXPECT_EQ(r.slices[0].end, 5000u);
}

TEST(Structure, EdgelessModelGivesEmptyGraph) {
  const SampleBatch s = exact_sample(Polynomial(6, 2), 50'000, 9);
  RecoveryConfig cfg = fit_config(2, 1.0);
  cfg.eta = 0.5;
  const RecoveryReport r = learn_structure(s, cfg);
  ASSERT_TRUE(r.graph_estimate);
  EXPECT_TRUE(r.graph_estimate->edges().empty());
  EXPECT_EQ(r.slices.size(), 2u);
  EXPECT_EQ(r.slices[1].end - r.slices[1].begin, r.median_samples);
}

TEST(Structure, RequiresPositiveEta) {
  const SampleBatch s = exact_sample(Polynomial(3, 2), 100, 9);
  EXPECT_THROW(structure_from_nodes({Polynomial(3, 1)}, s, 2, 0.0), ConfigError);
}

TEST(Structure, LoweringEtaOnlyAddsCliques) {
  // fixed node polynomials with a spread of coefficient sizes
  std::vector<Polynomial> polys;
  for (std::uint32_t i = 0; i < 6; ++i) {
    Polynomial p = oracle::random_poly(6, 2, 70 + i, 0.5, 0.6);
    Polynomial q(6, 2);
    for (const auto& [s, c] : p.terms())
      if (!s.contains(i)) q.set(s, c);
    polys.push_back(q);
  }
  const SampleBatch tests = exact_sample(Polynomial(6, 2), 101, 4);
  Graph previous = structure_from_nodes(polys, tests, 3, 4.0);
  for (double eta : {2.0, 1.0, 0.5, 0.25, 0.1, 0.01}) {
    const Graph g = structure_from_nodes(polys, tests, 3, eta);
    for (const auto& e : previous.edges()) EXPECT_TRUE(g.has_edge(e.first, e.second)) << eta;
    previous = g;
  }
  EXPECT_FALSE(previous.edges().empty());
}

TEST(Structure, PathGraphRecovered) {
  const Graph g = path_graph(10);
  const Polynomial psi = gen_random_mrf(g, 1.0, 2, WeightDist::rademacher, 11);
  const SampleBatch s = exact_sample(psi, 100'000, 12);
  RecoveryConfig cfg;
  cfg.t = 2;
  cfg.budget = BudgetMode::fit;
  cfg.ensemble = rademacher_info(EnsembleKind::random_mrf, 1.0, 10, 2, 2);
  RecoveryReport r = learn_structure(s, cfg);
  score_report(r, psi, g);
  EXPECT_TRUE(r.structure_exact.value());
}

TEST(ExactRecover, EdgelessIsZero) {
  const SampleBatch s = exact_sample(Polynomial(6, 2), 30'000, 5);
  RecoveryConfig cfg = fit_config(2, 1.0);
  cfg.ensemble = rademacher_info(EnsembleKind::random_ising, 0.5, 6, 0, 2);
  const RecoveryReport r = exact_recover(s, 0.5, 0, 2, cfg);
  EXPECT_TRUE(r.estimate.is_zero());
  EXPECT_EQ(r.slices.size(), 2u);
  EXPECT_EQ(r.slices[0].end, r.slices[1].begin);
}

TEST(ExactRecover, CoefficientsLieOnTheGrid) {
  const Graph g = complete_graph(4);
  const Polynomial psi = gen_random_mrf(g, 1.0, 3, WeightDist::rademacher, 21);
  const SampleBatch s = exact_sample(psi, 30'000, 22);
  RecoveryConfig cfg;
  cfg.budget = BudgetMode::fit;
  cfg.ensemble = rademacher_info(EnsembleKind::random_mrf, 1.0, 4, 3, 3);
  const RecoveryReport r = exact_recover(s, 1.0, 3, 3, cfg);
  const double step = ensemble_scale(1.0, 3, 3);
  for (const auto& [m, c] : r.estimate.terms()) EXPECT_NEAR(c / step, std::round(c / step), 1e-12);
  EXPECT_EQ(r.slices.size(), 3u);
}

TEST(ExactRecover, RejectsGaussianMetadata) {
  RecoveryConfig cfg = fit_config(2, 1.0);
  cfg.ensemble = rademacher_info(EnsembleKind::random_ising, 0.5, 4, 1, 2);
  cfg.ensemble->weight_dist = WeightDist::gaussian;
  const SampleBatch s = exact_sample(Polynomial(4, 2), 100, 5);
  EXPECT_THROW(exact_recover(s, 0.5, 1, 2, cfg), ConfigError);
}

TEST(ScoreReport, IsingErrorsSplitCouplingsAndField) {
  IsingModel truth(3);
  truth.set_a(0, 1, 0.5);
  truth.set_h(2, 1.0);
  RecoveryReport r;
  IsingModel est = truth;
  est.set_a(0, 1, 0.4);
  est.set_h(2, 0.7);
  r.ising_estimate = est;
  r.estimate = ising_to_poly(est);
  score_report(r, ising_to_poly(truth));
  EXPECT_NEAR(*r.linf_error, 0.1, 1e-12);
  EXPECT_NEAR(*r.field_linf_error, 0.3, 1e-12);
  EXPECT_NEAR(*r.l1_error, 0.4, 1e-12);
}
