#pragma once

// Structural diagnostics of Gibbs measures: smoothness, flip MGFs and tails,
// anticoncentration, identifiability, and distances between distributions.
// "Exact" functions take a GibbsTable; the SampleBatch overloads are Monte Carlo.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "spinlearn/error.hpp"
#include "spinlearn/features.hpp"
#include "spinlearn/polynomial.hpp"
#include "spinlearn/sampler.hpp"

namespace spinlearn {

inline constexpr std::uint64_t kDefaultFlipSetBudget = 10'000'000;
inline constexpr double kDefaultMgfDivisor = 32.0;

/// Masks of every flip set S with 1 <= |S| <= t over n variables.
inline std::vector<std::uint64_t> flip_masks(std::size_t n, std::size_t t, std::uint64_t budget = kDefaultFlipSetBudget) {
  if (n > 63) throw BudgetError("flip-set enumeration supports at most 63 variables");
  double count = 0.0;
  double binom = 1.0;
  for (std::size_t k = 1; k <= std::min(t, n); ++k) {
    binom = binom * double(n - k + 1) / double(k);
    count += binom;
  }
  if (count > double(budget))
    throw BudgetError("flip-set enumeration of " + std::to_string(static_cast<std::uint64_t>(count)) +
                      " sets exceeds the budget of " + std::to_string(budget));
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(count));
  const FeatureMap fm(n, std::min(t, n));
  for (const auto& m : fm.monomials())
    if (!m.empty()) out.push_back(m.mask());
  return out;
}

/// max over S (1 <= |S| <= t) of |psi(x) - psi(x^S)|.
inline double max_flip_difference(const BitPolynomial& p, std::uint64_t bits, const std::vector<std::uint64_t>& masks) {
  const double base = p(bits);
  double worst = 0.0;
  for (auto m : masks) worst = std::max(worst, std::abs(base - p(bits ^ m)));
  return worst;
}

inline bool membership_in_E(const Polynomial& p, ConfigView x, double C, std::size_t t,
                            std::uint64_t budget = kDefaultFlipSetBudget) {
  if (x.size() != p.n()) throw DimensionError("configuration length vs polynomial n");
  if (t > p.t_max()) throw ConfigError("flip radius t exceeds the polynomial's t_max");
  const BitPolynomial bp(p);
  return max_flip_difference(bp, pack(x), flip_masks(p.n(), t, budget)) <= C;
}

struct SmoothnessReport {
  double C = 0.0;
  double fraction = 0.0;
  double std_error = 0.0;  // 0 in exact mode
  std::string method;
  std::size_t samples = 0;  // states enumerated or samples averaged
  double worst_flip = 0.0;  // max over all evaluated x of the worst flip difference
  double max_derivative_on_E = 0.0;  // max over x in E and i of |d_i psi(x)|
};

namespace detail {

// Worst flip difference per state using energy lookups.
inline std::vector<double> worst_flip_table(const GibbsTable& table, std::size_t t, std::uint64_t budget) {
  const auto masks = flip_masks(table.n, t, budget);
  std::vector<double> worst(table.size(), 0.0);
  for (std::size_t x = 0; x < table.size(); ++x) {
    double w = 0.0;
    for (auto m : masks) w = std::max(w, std::abs(table.energy[x] - table.energy[x ^ m]));
    worst[x] = w;
  }
  return worst;
}

inline double max_site_derivative(const GibbsTable& table, std::size_t x) {
  double d = 0.0;
  for (std::size_t i = 0; i < table.n; ++i)
    d = std::max(d, std::abs(table.energy[x] - table.energy[x ^ (std::size_t{1} << i)]) / 2.0);
  return d;
}

inline double mean_std_error(double sum, double sum_sq, std::size_t count) {
  if (count < 2) return 0.0;
  const double mean = sum / double(count);
  const double var = std::max(0.0, sum_sq / double(count) - mean * mean);
  return std::sqrt(var / double(count - 1));
}

}  // namespace detail

inline SmoothnessReport smoothness_fraction(const GibbsTable& table, double C, std::size_t t,
                                            std::uint64_t budget = kDefaultFlipSetBudget) {
  if (C < 0.0) throw ConfigError("smoothness bound must be nonnegative");
  SmoothnessReport r;
  r.C = C;
  r.method = "exact";
  r.samples = table.size();
  const auto worst = detail::worst_flip_table(table, t, budget);
  for (std::size_t x = 0; x < table.size(); ++x) {
    r.worst_flip = std::max(r.worst_flip, worst[x]);
    if (worst[x] <= C) {
      r.fraction += table.probs[x];
      r.max_derivative_on_E = std::max(r.max_derivative_on_E, detail::max_site_derivative(table, x));
    }
  }
  r.fraction = std::clamp(r.fraction, 0.0, 1.0);
  return r;
}

inline SmoothnessReport smoothness_fraction(const Polynomial& p, const SampleBatch& samples, double C, std::size_t t,
                                            std::uint64_t budget = kDefaultFlipSetBudget) {
  if (C < 0.0) throw ConfigError("smoothness bound must be nonnegative");
  if (samples.n() != p.n()) throw DimensionError("sample width vs polynomial n");
  if (samples.size() == 0) throw BudgetError("Monte Carlo smoothness needs samples");
  SmoothnessReport r;
  r.C = C;
  r.method = "montecarlo";
  r.samples = samples.size();
  const BitPolynomial bp(p);
  const auto masks = flip_masks(p.n(), t, budget);
  std::vector<std::uint64_t> singles(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) singles[i] = std::uint64_t{1} << i;
  double hits = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const std::uint64_t bits = pack(samples.row(k));
    const double w = max_flip_difference(bp, bits, masks);
    r.worst_flip = std::max(r.worst_flip, w);
    if (w <= C) {
      hits += 1.0;
      r.max_derivative_on_E = std::max(r.max_derivative_on_E, max_flip_difference(bp, bits, singles) / 2.0);
    }
  }
  r.fraction = hits / double(samples.size());
  r.std_error = detail::mean_std_error(hits, hits, samples.size());
  return r;
}

/// Smallest C with Pr[X in E(C)] >= mass.
inline double minimal_smoothness(const GibbsTable& table, std::size_t t, double mass = 7.0 / 8.0,
                                 std::uint64_t budget = kDefaultFlipSetBudget) {
  if (!(mass > 0.0 && mass <= 1.0)) throw ConfigError("mass must be in (0, 1]");
  const auto worst = detail::worst_flip_table(table, t, budget);
  std::vector<std::size_t> order(table.size());
  for (std::size_t x = 0; x < order.size(); ++x) order[x] = x;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return worst[a] < worst[b]; });
  double acc = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    acc += table.probs[order[k]];
    // include all states tied at this level before testing
    if (k + 1 < order.size() && worst[order[k + 1]] == worst[order[k]]) continue;
    if (acc >= mass * (1.0 - 1e-12)) return worst[order[k]];
  }
  return worst[order.back()];
}

struct MgfReport {
  Monomial S;
  double B = kDefaultMgfDivisor;
  double log_estimate = 0.0;
  double estimate = 1.0;  // +inf when exp(log_estimate) overflows
  double std_error = 0.0;  // Monte Carlo only
  std::size_t samples = 0;
  bool overflow = false;
};

namespace detail {

inline void finish_mgf(MgfReport& r) {
  r.log_estimate = std::max(r.log_estimate, 0.0);
  r.overflow = r.log_estimate > std::log(std::numeric_limits<double>::max());
  r.estimate = r.overflow ? std::numeric_limits<double>::infinity() : std::exp(r.log_estimate);
}

inline void check_flip_set(const Polynomial& p, const Monomial& s) {
  if (s.empty()) throw ConfigError("flip set must be nonempty");
  if (s.max_index() >= p.n()) throw ConfigError("flip set index out of range");
}

}  // namespace detail

/// E[exp(psi^S(X)^2 / B)] under the exact distribution, in log space.
inline MgfReport mgf_flip_estimate(const GibbsTable& table, const Monomial& s, double B) {
  if (!(B > 0.0)) throw ConfigError("MGF divisor B must be positive");
  if (s.empty() || s.max_index() >= table.n) throw ConfigError("flip set must be nonempty and in range");
  MgfReport r;
  r.S = s;
  r.B = B;
  r.samples = table.size();
  const std::uint64_t m = s.mask();
  std::vector<double> terms(table.size());
  for (std::size_t x = 0; x < table.size(); ++x) {
    const double f = table.energy[x] - table.energy[x ^ m];
    terms[x] = table.log_prob(x) + f * f / B;
  }
  r.log_estimate = log_sum_exp(terms);
  detail::finish_mgf(r);
  return r;
}

inline MgfReport mgf_flip_estimate(const Polynomial& p, const SampleBatch& samples, const Monomial& s, double B) {
  if (!(B > 0.0)) throw ConfigError("MGF divisor B must be positive");
  detail::check_flip_set(p, s);
  if (samples.n() != p.n()) throw DimensionError("sample width vs polynomial n");
  if (samples.size() == 0) throw BudgetError("Monte Carlo MGF needs samples");
  MgfReport r;
  r.S = s;
  r.B = B;
  r.samples = samples.size();
  const BitPolynomial f(flip_polynomial(p, s));
  std::vector<double> exps(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double v = f(pack(samples.row(k)));
    exps[k] = v * v / B;
  }
  r.log_estimate = log_sum_exp(exps) - std::log(double(samples.size()));
  detail::finish_mgf(r);
  if (!r.overflow) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double e : exps) {
      const double v = std::exp(e);
      sum += v;
      sum_sq += v * v;
    }
    r.std_error = detail::mean_std_error(sum, sum_sq, samples.size());
  }
  return r;
}

struct FractionEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Pr[|psi^S(X)|/2 > threshold].
inline double tail_fraction(const GibbsTable& table, const Monomial& s, double threshold) {
  if (threshold < 0.0) throw ConfigError("tail threshold must be nonnegative");
  if (s.empty() || s.max_index() >= table.n) throw ConfigError("flip set must be nonempty and in range");
  const std::uint64_t m = s.mask();
  double mass = 0.0;
  for (std::size_t x = 0; x < table.size(); ++x)
    if (std::abs(table.energy[x] - table.energy[x ^ m]) / 2.0 > threshold) mass += table.probs[x];
  return std::clamp(mass, 0.0, 1.0);
}

inline FractionEstimate tail_fraction(const Polynomial& p, const SampleBatch& samples, const Monomial& s,
                                      double threshold) {
  if (threshold < 0.0) throw ConfigError("tail threshold must be nonnegative");
  detail::check_flip_set(p, s);
  if (samples.n() != p.n()) throw DimensionError("sample width vs polynomial n");
  if (samples.size() == 0) throw BudgetError("Monte Carlo tail estimate needs samples");
  const BitPolynomial f(flip_polynomial(p, s));
  double hits = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k)
    if (std::abs(f(pack(samples.row(k)))) / 2.0 > threshold) hits += 1.0;
  return {hits / double(samples.size()), detail::mean_std_error(hits, hits, samples.size())};
}

/// Pr[|q(X)| >= |q(S)|] for a maximal monomial S of q.
inline double anticoncentration_fraction(const GibbsTable& table, const Polynomial& q, const Monomial& s) {
  if (q.n() != table.n) throw DimensionError("polynomial n vs table n");
  if (!is_maximal(q, s)) throw ConfigError("monomial is not maximal in the polynomial");
  const double level = std::abs(q.coef(s));
  const double slack = kNumericTolerance * std::max(1.0, l1_norm(q));
  const BitPolynomial bq(q);
  double mass = 0.0;
  for (std::size_t x = 0; x < table.size(); ++x)
    if (std::abs(bq(x)) >= level - slack) mass += table.probs[x];
  return std::clamp(mass, 0.0, 1.0);
}

inline FractionEstimate anticoncentration_fraction(const SampleBatch& samples, const Polynomial& q, const Monomial& s) {
  if (q.n() != samples.n()) throw DimensionError("polynomial n vs sample width");
  if (!is_maximal(q, s)) throw ConfigError("monomial is not maximal in the polynomial");
  if (samples.size() == 0) throw BudgetError("Monte Carlo anticoncentration needs samples");
  const double level = std::abs(q.coef(s));
  const double slack = kNumericTolerance * std::max(1.0, l1_norm(q));
  const BitPolynomial bq(q);
  double hits = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k)
    if (std::abs(bq(pack(samples.row(k)))) >= level - slack) hits += 1.0;
  return {hits / double(samples.size()), detail::mean_std_error(hits, hits, samples.size())};
}

/// sum_x P(x) (log P(x) - log Q(x)), from energies and log partition functions.
inline double kl_divergence(const GibbsTable& p, const GibbsTable& q) {
  if (p.n != q.n || p.size() != q.size()) throw DimensionError("KL operands have different n");
  double kl = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p.probs[x] == 0.0) continue;
    kl += p.probs[x] * (p.log_prob(x) - q.log_prob(x));
  }
  return std::max(kl, 0.0);
}

inline double tv_distance(const GibbsTable& p, const GibbsTable& q) {
  if (p.n != q.n || p.size() != q.size()) throw DimensionError("TV operands have different n");
  double tv = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) tv += std::abs(p.probs[x] - q.probs[x]);
  return std::min(1.0, tv / 2.0);
}

inline double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw DimensionError("TV operands have different sizes");
  double tv = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) tv += std::abs(p[x] - q[x]);
  return std::min(1.0, tv / 2.0);
}

/// min over nonconstant maximal monomials of |p(S)|; +inf when there are none.
inline double identifiability_margin(const Polynomial& p) {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& s : maximal_monomials(p))
    if (!s.empty()) margin = std::min(margin, std::abs(p.coef(s)));
  return margin;
}

}  // namespace spinlearn
