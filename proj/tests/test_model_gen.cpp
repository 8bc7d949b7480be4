#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "spinlearn/model_gen.hpp"

using namespace spinlearn;

namespace {

double sample_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / double(v.size() - 1);
}

// Brute-force clique check: every pair inside S is an edge.
bool is_clique(const Graph& g, const Monomial& s) {
  auto idx = s.indices();
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b)
      if (!g.has_edge(idx[a], idx[b])) return false;
  return true;
}

}  // namespace

TEST(GenSk, SingleSpinHasNoCouplings) {
  const IsingModel m = gen_sk(1, 1.0, FieldMode::zero, 3);
  EXPECT_EQ(m.n(), 1u);
  EXPECT_EQ(m.a(0, 0), 0.0);
}

TEST(GenSk, CouplingsScaleLinearlyInBeta) {
  const IsingModel zero = gen_sk(6, 0.0, FieldMode::zero, 3);
  const IsingModel one = gen_sk(6, 1.0, FieldMode::zero, 3);
  const IsingModel half = gen_sk(6, 0.5, FieldMode::zero, 3);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_EQ(zero.a(i, j), 0.0);
      EXPECT_DOUBLE_EQ(half.a(i, j), 0.5 * one.a(i, j));
    }
}

TEST(GenSk, OffDiagonalVarianceIsOneOverN) {
  const std::size_t n = 1000;
  const IsingModel m = gen_sk(n, 1.0, FieldMode::zero, 17);
  std::vector<double> draws;
  for (std::size_t i = 0; i < n && draws.size() < 10000; ++i)
    for (std::size_t j = i + 1; j < n && draws.size() < 10000; ++j) draws.push_back(m.a(i, j));
  EXPECT_NEAR(sample_variance(draws) * double(n), 1.0, 0.05);
}

TEST(GenSk, GaussianFieldUsesMeanAndSigma) {
  const IsingModel m = gen_sk(4000, 1.0, FieldMode::gaussian, 5, 2.0, 0.5);
  std::vector<double> h(m.h_data().begin(), m.h_data().end());
  double mean = 0.0;
  for (double v : h) mean += v;
  mean /= double(h.size());
  EXPECT_NEAR(mean, 2.0, 0.05);
  EXPECT_NEAR(std::sqrt(sample_variance(h)), 0.5, 0.05);
}

TEST(GenRandomIsing, EdgelessGraphGivesZeroCouplings) {
  const IsingModel m = gen_random_ising(Graph(5), 1.0, WeightDist::gaussian, FieldMode::zero, 1);
  for (double v : m.a_data()) EXPECT_EQ(v, 0.0);
}

TEST(GenRandomIsing, RademacherMagnitudeIsHalfBetaOnCubicGraph) {
  const Graph g = regular_graph(10, 3);
  const IsingModel m = gen_random_ising(g, 1.3, WeightDist::rademacher, FieldMode::zero, 2);
  for (std::uint32_t i = 0; i < 10; ++i)
    for (std::uint32_t j = 0; j < 10; ++j) {
      if (g.has_edge(i, j))
        EXPECT_EQ(std::abs(m.a(i, j)), 1.3 / 2.0);
      else
        EXPECT_EQ(m.a(i, j), 0.0);
    }
}

TEST(GenRandomIsing, GaussianEdgeVariance) {
  const Graph g = regular_graph(2000, 3);
  const double beta = 1.5;
  std::vector<double> draws;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const IsingModel m = gen_random_ising(g, beta, WeightDist::gaussian, FieldMode::zero, seed);
    for (auto [u, v] : g.edges()) draws.push_back(m.a(u, v));
  }
  ASSERT_GE(draws.size(), 10000u);
  EXPECT_NEAR(sample_variance(draws) / (beta * beta / 4.0), 1.0, 0.05);
}

TEST(GenRandomIsing, RademacherFieldIsUnitMagnitude) {
  const IsingModel m = gen_random_ising(path_graph(8), 1.0, WeightDist::rademacher, FieldMode::rademacher, 4);
  for (double h : m.h_data()) EXPECT_EQ(std::abs(h), 1.0);
}

TEST(GenRandomIsing, WidthBoundHoldsForMostSeeds) {
  const Graph g = regular_graph(100, 3);
  const double beta = 1.0;
  const double bound = 2.0 * beta * std::sqrt(4.0 * std::log(100.0));
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    ok += width(ising_to_poly(gen_random_ising(g, beta, WeightDist::gaussian, FieldMode::zero, seed))) <= bound;
  EXPECT_GE(ok, 95);
}

TEST(GenRandomMrf, PairwiseSpecializesToRandomIsing) {
  const Graph g = regular_graph(8, 3);
  const Polynomial mrf = gen_random_mrf(g, 0.8, 2, WeightDist::gaussian, 9);
  const IsingModel ising = gen_random_ising(g, 0.8, WeightDist::gaussian, FieldMode::zero, 9);
  for (auto [u, v] : g.edges()) EXPECT_EQ(mrf.coef({u, v}), ising.a(u, v));
  // singletons carry the field role; their law matches the pair law
  for (std::uint32_t i = 0; i < 8; ++i) EXPECT_NE(mrf.coef(Monomial{i}), 0.0);
}

TEST(GenRandomMrf, RademacherCoefficientsHaveExactScale) {
  const Graph g = regular_graph(12, 4);
  const Polynomial p = gen_random_mrf(g, 1.2, 3, WeightDist::rademacher, 3);
  const double scale = 1.2 / std::pow(5.0, 1.0);
  ASSERT_FALSE(p.is_zero());
  for (const auto& [s, c] : p.terms()) EXPECT_EQ(std::abs(c), scale);
}

TEST(GenRandomMrf, TriangleTermSet) {
  const Polynomial p = gen_random_mrf(complete_graph(3), 1.0, 3, WeightDist::gaussian, 0);
  std::set<Monomial> want;
  for (std::uint64_t mask = 1; mask < 8; ++mask) {
    std::vector<std::uint32_t> idx;
    for (std::uint32_t i = 0; i < 3; ++i)
      if ((mask >> i) & 1) idx.push_back(i);
    want.insert(Monomial(idx));
  }
  std::set<Monomial> got;
  for (const auto& [s, c] : p.terms()) got.insert(s);
  EXPECT_EQ(got, want);
}

TEST(GenRandomMrf, SupportIsCliquesOnly) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = regular_graph(14, 4);
    const Polynomial p = gen_random_mrf(g, 1.0, 3, WeightDist::gaussian, seed);
    for (const auto& [s, c] : p.terms()) {
      EXPECT_GE(s.size(), 1u);
      EXPECT_LE(s.size(), 3u);
      EXPECT_TRUE(is_clique(g, s));
    }
    // every clique of size <= 3 is present, found by brute force over subsets
    std::size_t cliques = 0;
    for (std::uint32_t a = 0; a < 14; ++a) {
      ++cliques;
      for (std::uint32_t b = a + 1; b < 14; ++b) {
        if (!g.has_edge(a, b)) continue;
        ++cliques;
        for (std::uint32_t c = b + 1; c < 14; ++c) cliques += g.has_edge(a, c) && g.has_edge(b, c);
      }
    }
    EXPECT_EQ(p.size(), cliques);
  }
}

TEST(GenPureSpin, FirstOrderIsPureField) {
  const Polynomial p = gen_pure_p_spin(7, 0.9, 1, 4);
  EXPECT_EQ(p.degree(), 1u);
  EXPECT_EQ(p.size(), 7u);
}

TEST(GenPureSpin, SingleSpinSquaredCollapsesToZero) {
  EXPECT_TRUE(gen_pure_p_spin(1, 1.0, 2, 4).is_zero());
}

TEST(GenPureSpin, PairVarianceCountsBothOrderings) {
  const std::size_t n = 50;
  const double beta = 1.0;
  std::vector<double> draws;
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    const Polynomial p = gen_pure_p_spin(n, beta, 2, seed);
    for (const auto& [s, c] : p.terms()) draws.push_back(c);
  }
  ASSERT_GE(draws.size(), 10000u);
  EXPECT_NEAR(sample_variance(draws) / (2.0 * beta * beta / double(n)), 1.0, 0.05);
}

TEST(GenPureSpin, ThirdOrderDropsConstantAndKeepsOddReductions) {
  const Polynomial p = gen_pure_p_spin(4, 1.0, 3, 8);
  EXPECT_EQ(p.coef(Monomial{}), 0.0);
  for (const auto& [s, c] : p.terms()) EXPECT_TRUE(s.size() == 1 || s.size() == 3);
}

TEST(GenPureSpin, BudgetIsEnforced) {
  EXPECT_THROW(gen_pure_p_spin(100, 1.0, 4, 0, 1'000'000), BudgetError);
}

TEST(Generate, IsDeterministic) {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::random_mrf;
  spec.graph = regular_graph(10, 3);
  spec.t = 3;
  spec.beta = 0.7;
  spec.seed = 99;
  EXPECT_EQ(generate(spec).psi, generate(spec).psi);
  spec.seed = 100;
  const auto other = generate(spec).psi;
  spec.seed = 99;
  EXPECT_NE(generate(spec).psi, other);
}

TEST(Generate, ValidatesSpec) {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::sk;
  spec.n = 4;
  spec.t = 3;
  EXPECT_THROW(generate(spec), ConfigError);
  spec.t = 2;
  spec.beta = -1.0;
  EXPECT_THROW(generate(spec), ConfigError);
  spec.beta = 1.0;
  spec.kind = EnsembleKind::random_ising;
  EXPECT_THROW(generate(spec), ConfigError);
}

TEST(Graphs, RegularGraphIsRegular) {
  const Graph g = regular_graph(14, 3);
  for (std::size_t v = 0; v < 14; ++v) EXPECT_EQ(g.degree(v), 3u);
  EXPECT_THROW(regular_graph(7, 3), ConfigError);
  EXPECT_EQ(named_graph("grid:3:4").edges().size(), 17u);
  EXPECT_THROW(named_graph("torus:3"), ConfigError);
}
