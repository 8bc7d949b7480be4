#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spinlearn/model_gen.hpp"
#include "spinlearn/sampler.hpp"

using namespace spinlearn;

namespace {

Polynomial single_field(double h) {
  Polynomial p(1, 1);
  p.set(Monomial{0}, h);
  return p;
}

std::vector<double> site_means(const SampleBatch& b) {
  std::vector<double> m(b.n(), 0.0);
  for (std::size_t k = 0; k < b.size(); ++k)
    for (std::size_t i = 0; i < b.n(); ++i) m[i] += b.row(k)[i];
  for (auto& v : m) v /= double(b.size());
  return m;
}

}  // namespace

TEST(Enumerate, ZeroPolynomialIsUniform) {
  const GibbsTable t = enumerate_distribution(Polynomial(3, 2));
  for (double q : t.probs) EXPECT_DOUBLE_EQ(q, 1.0 / 8.0);
  EXPECT_NEAR(t.log_z, std::log(8.0), 1e-12);
}

TEST(Enumerate, SingleFieldGivesSigmoid) {
  for (double h : {-2.0, -0.3, 0.0, 0.7, 5.0}) {
    const GibbsTable t = enumerate_distribution(single_field(h));
    EXPECT_NEAR(t.probs[0], sigmoid(2.0 * h), 1e-14);
  }
}

TEST(Enumerate, PairCouplingExample) {
  Polynomial p(2, 2);
  p.set({0, 1}, 0.5);
  const GibbsTable t = enumerate_distribution(p);
  const double want = std::exp(0.5) / (2.0 * std::exp(0.5) + 2.0 * std::exp(-0.5));
  EXPECT_NEAR(t.probs[0], want, 1e-14);
  EXPECT_NEAR(t.probs[0], 0.3655, 1e-4);
}

TEST(Enumerate, MatchesNaiveExponentiationAndIsNormalized) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Polynomial p = oracle::random_poly(8, 3, 500 + seed, 0.4, 0.5);
    const GibbsTable t = enumerate_distribution(p);
    const auto want = oracle::naive_gibbs(p);
    double total = 0.0;
    for (std::size_t x = 0; x < want.size(); ++x) {
      EXPECT_NEAR(t.probs[x], want[x], 1e-12);
      total += t.probs[x];
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(Enumerate, LargeEnergiesStayFinite) {
  Polynomial p(4, 2);
  p.set({0, 1}, 800.0).set({2}, -900.0);
  const GibbsTable t = enumerate_distribution(p);
  EXPECT_TRUE(std::isfinite(t.log_z));
  double total = 0.0;
  for (double q : t.probs) total += q;
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(Enumerate, CapIsEnforced) {
  EXPECT_THROW(enumerate_distribution(Polynomial(25, 2)), BudgetError);
  EXPECT_THROW(enumerate_distribution(Polynomial(10, 2), 8), BudgetError);
}

TEST(Enumerate, LogPartitionLowerBoundAfterRemovingASite) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Polynomial p = oracle::random_poly(8, 3, 900 + seed, 0.5, 0.8);
    const GibbsTable t = enumerate_distribution(p);
    for (std::uint32_t i = 0; i < 8; ++i) {
      const Polynomial g = drop_variable(p, i);
      const auto xs = oracle::all_configs(8);
      double sum = 0.0;
      for (const auto& x : xs) sum += std::exp(oracle::naive_eval(g, x));
      EXPECT_GE(t.log_z, std::log(0.5 * sum) - 1e-12);
    }
  }
}

TEST(ExactSample, UniformSiteMeansNearZero) {
  const SampleBatch b = exact_sample(Polynomial(5, 2), 1'000'000, 1);
  for (double m : site_means(b)) EXPECT_LT(std::abs(m), 0.005);
}

TEST(ExactSample, FixedSeedIsReproducibleAndPrefixStable) {
  const Polynomial p = oracle::random_poly(6, 2, 3);
  const SampleBatch a = exact_sample(p, 5000, 42);
  const SampleBatch b = exact_sample(p, 5000, 42);
  EXPECT_EQ(a.data(), b.data());
  const SampleBatch prefix = exact_sample(p, 1000, 42);
  EXPECT_EQ(prefix.data(), a.slice(0, 1000).data());
  EXPECT_NE(exact_sample(p, 5000, 43).data(), a.data());
}

TEST(ExactSample, EmpiricalTvIsSmall) {
  const IsingModel m = gen_sk(10, 1.0, FieldMode::gaussian, 7);
  const GibbsTable t = enumerate_distribution(ising_to_poly(m));
  const auto emp = empirical_distribution(exact_sample(t, 1'000'000, 8));
  double tv = 0.0;
  for (std::size_t x = 0; x < emp.size(); ++x) tv += std::abs(emp[x] - t.probs[x]);
  EXPECT_LE(0.5 * tv, 0.02);
}

TEST(ExactSample, ZeroCountIsAnError) {
  EXPECT_THROW(exact_sample(Polynomial(2, 1), 0, 1), ConfigError);
}

TEST(ConditionalProb, Examples) {
  EXPECT_EQ(conditional_prob(Polynomial(3, 2), Config{1, 1, -1}, 1), 0.5);
  EXPECT_NEAR(conditional_prob(single_field(0.4), Config{-1}, 0), sigmoid(0.8), 1e-15);
}

TEST(ConditionalProb, MatchesGibbsRatio) {
  const Polynomial p = gen_random_mrf(regular_graph(8, 3), 1.0, 3, WeightDist::gaussian, 12);
  const GibbsTable t = enumerate_distribution(p);
  for (std::uint64_t x = 0; x < 256; ++x)
    for (std::uint32_t i = 0; i < 8; ++i) {
      const std::uint64_t plus = x & ~(std::uint64_t{1} << i);
      const std::uint64_t minus = x | (std::uint64_t{1} << i);
      const double ratio = t.probs[plus] / (t.probs[plus] + t.probs[minus]);
      ASSERT_NEAR(conditional_prob(p, unpack(x, 8), i), ratio, 1e-10);
    }
}

TEST(Glauber, SingleSpinMatchesStationaryLaw) {
  const double h = 0.6;
  const SampleBatch b = glauber_chain(single_field(h), 100'000, 100, 1, 3);
  double plus = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) plus += b.row(k)[0] == 1;
  EXPECT_NEAR(plus / double(b.size()), sigmoid(2.0 * h), 0.01);
  EXPECT_FALSE(b.meta().iid);
  EXPECT_EQ(b.meta().sampler, "glauber");
}

TEST(Glauber, FreeSpinsAverageToZero) {
  // two sweeps between records keep the per-site autocorrelation near 0.1
  const SampleBatch b = glauber_chain(Polynomial(6, 2), 100'000, 100, 12, 5);
  for (double m : site_means(b)) EXPECT_LT(std::abs(m), 0.01);
}

TEST(Glauber, FixedSeedReproducesTrajectory) {
  const Polynomial p = oracle::random_poly(6, 2, 8);
  EXPECT_EQ(glauber_chain(p, 2000, 50, 3, 77).data(), glauber_chain(p, 2000, 50, 3, 77).data());
}

TEST(Glauber, DetailedBalance) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Polynomial p = oracle::random_poly(8, 3, 40 + seed, 0.3, 0.7);
    const GibbsTable t = enumerate_distribution(p);
    const auto k = glauber_kernel(p);
    const std::size_t s = t.size();
    for (std::size_t x = 0; x < s; ++x) {
      double row = 0.0;
      for (std::size_t y = 0; y < s; ++y) {
        row += k[x * s + y];
        ASSERT_NEAR(t.probs[x] * k[x * s + y], t.probs[y] * k[y * s + x], 1e-10);
      }
      ASSERT_NEAR(row, 1.0, 1e-12);
    }
  }
}
