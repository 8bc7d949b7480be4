#pragma once

// Exact and Glauber sampling from Pr[x] proportional to exp(psi(x)).
// Packed configuration index: bit i set iff x_i = -1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "spinlearn/error.hpp"
#include "spinlearn/polynomial.hpp"
#include "spinlearn/rng.hpp"

namespace spinlearn {

inline constexpr std::size_t kDefaultEnumerationCap = 24;

inline double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct GibbsTable {
  std::size_t n = 0;
  std::vector<double> energy;  // psi(x)
  std::vector<double> probs;
  double log_z = 0.0;

  std::size_t size() const noexcept { return probs.size(); }
  double log_prob(std::size_t x) const noexcept { return energy[x] - log_z; }
};

inline void check_cap(std::size_t n, std::size_t cap) {
  if (cap > 40) throw ConfigError("enumeration cap above 40 spins is not supported");
  if (n > cap)
    throw BudgetError("n = " + std::to_string(n) + " exceeds the enumeration cap of " + std::to_string(cap));
}

inline double log_sum_exp(const std::vector<double>& v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double mx = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double e : v) s += std::exp(e - mx);
  return mx + std::log(s);
}

inline GibbsTable enumerate_distribution(const Polynomial& p, std::size_t cap = kDefaultEnumerationCap) {
  check_cap(p.n(), cap);
  GibbsTable table;
  table.n = p.n();
  const std::size_t states = std::size_t{1} << p.n();
  const BitPolynomial bp(p);
  table.energy.resize(states);
  for (std::size_t x = 0; x < states; ++x) table.energy[x] = bp(x);
  const double mx = *std::max_element(table.energy.begin(), table.energy.end());
  table.probs.resize(states);
  double z = 0.0;
  for (std::size_t x = 0; x < states; ++x) {
    table.probs[x] = std::exp(table.energy[x] - mx);
    z += table.probs[x];
  }
  for (auto& q : table.probs) q /= z;
  table.log_z = mx + std::log(z);
  return table;
}

struct SampleMeta {
  std::string sampler = "exact";  // exact | glauber
  std::uint64_t seed = 0;
  std::string model_hash;
  bool iid = true;
  std::size_t burn_in = 0;
  std::size_t thinning = 0;
};

/// N configurations in {-1,+1}^n, row major.
class SampleBatch {
 public:
  SampleBatch() = default;
  SampleBatch(std::size_t n, std::size_t count, SampleMeta meta = {})
      : n_(n), count_(count), data_(n * count, Spin{1}), meta_(std::move(meta)) {}
  SampleBatch(std::size_t n, std::vector<Spin> data, SampleMeta meta) : n_(n), data_(std::move(data)), meta_(std::move(meta)) {
    if (n_ == 0 || data_.size() % n_ != 0) throw DimensionError("sample data is not a whole number of rows");
    count_ = data_.size() / n_;
    for (auto s : data_)
      if (s != 1 && s != -1) throw ConfigError("sample entries must be +1 or -1");
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return count_; }
  ConfigView row(std::size_t k) const { return {data_.data() + k * n_, n_}; }
  std::span<Spin> row(std::size_t k) { return {data_.data() + k * n_, n_}; }
  const std::vector<Spin>& data() const noexcept { return data_; }
  const SampleMeta& meta() const noexcept { return meta_; }
  SampleMeta& meta() noexcept { return meta_; }

  /// Rows [begin, end) as a new batch with the same metadata.
  SampleBatch slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > count_) throw BudgetError("sample slice out of range");
    SampleBatch out;
    out.n_ = n_;
    out.count_ = end - begin;
    out.data_.assign(data_.begin() + static_cast<std::ptrdiff_t>(begin * n_),
                     data_.begin() + static_cast<std::ptrdiff_t>(end * n_));
    out.meta_ = meta_;
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::size_t count_ = 0;
  std::vector<Spin> data_;
  SampleMeta meta_;
};

/// Inverse-CDF draws from a Gibbs table. Draw k uses the k-th keyed uniform, so batches
/// are reproducible and any prefix equals the smaller batch with the same seed.
inline SampleBatch exact_sample(const GibbsTable& table, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ConfigError("sample count must be at least 1");
  std::vector<double> cdf(table.size());
  std::partial_sum(table.probs.begin(), table.probs.end(), cdf.begin());
  SampleMeta meta;
  meta.sampler = "exact";
  meta.seed = seed;
  SampleBatch batch(table.n, count, meta);
  const double total = cdf.back();
  for (std::size_t k = 0; k < count; ++k) {
    const double u = rng::uniform(seed, k) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto x = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    auto row = batch.row(k);
    for (std::size_t i = 0; i < table.n; ++i) row[i] = ((x >> i) & 1) ? Spin{-1} : Spin{1};
  }
  return batch;
}

inline SampleBatch exact_sample(const Polynomial& p, std::size_t count, std::uint64_t seed,
                                std::size_t cap = kDefaultEnumerationCap) {
  return exact_sample(enumerate_distribution(p, cap), count, seed);
}

/// Pr[X_i = +1 | X_{-i} = x_{-i}] = sigmoid(2 d_i psi(x)).
inline double conditional_prob(const Polynomial& p, ConfigView x, std::size_t i) {
  return sigmoid(2.0 * eval_poly(partial_derivative(p, i), x));
}

namespace detail {

struct SiteDerivatives {
  explicit SiteDerivatives(const Polynomial& p) {
    site.reserve(p.n());
    for (std::size_t i = 0; i < p.n(); ++i) site.emplace_back(partial_derivative(p, i));
  }
  // sigmoid(2 d_i psi) at packed x; d_i psi does not depend on x_i.
  double prob_plus(std::uint64_t bits, std::size_t i) const { return sigmoid(2.0 * site[i](bits)); }
  std::vector<BitPolynomial> site;
};

}  // namespace detail

/// Single-site heat-bath chain. Records every `thinning`-th state after `burn_in` updates
/// (thinning 0 is treated as 1). The batch is flagged non-iid.
inline SampleBatch glauber_chain(const Polynomial& p, std::size_t count, std::size_t burn_in, std::size_t thinning,
                                 std::uint64_t seed) {
  if (count == 0) throw ConfigError("sample count must be at least 1");
  if (p.n() == 0) throw ConfigError("Glauber chain needs n >= 1");
  const std::size_t n = p.n();
  const std::size_t stride = std::max<std::size_t>(thinning, 1);
  const detail::SiteDerivatives sites(p);
  rng::SplitMix64 gen(rng::mix(seed, rng::hash_string("glauber")));
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (gen.unit() < 0.5) bits |= std::uint64_t{1} << i;

  auto step = [&] {
    const std::size_t i = gen.below(n);
    const bool plus = gen.unit() < sites.prob_plus(bits, i);
    if (plus)
      bits &= ~(std::uint64_t{1} << i);
    else
      bits |= std::uint64_t{1} << i;
  };

  for (std::size_t s = 0; s < burn_in; ++s) step();
  SampleMeta meta;
  meta.sampler = "glauber";
  meta.seed = seed;
  meta.iid = false;
  meta.burn_in = burn_in;
  meta.thinning = thinning;
  SampleBatch batch(n, count, meta);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t s = 0; s < stride; ++s) step();
    auto row = batch.row(k);
    for (std::size_t i = 0; i < n; ++i) row[i] = ((bits >> i) & 1) ? Spin{-1} : Spin{1};
  }
  return batch;
}

/// Dense transition matrix K[x * 2^n + y] of one Glauber update (uniform site, heat bath).
inline std::vector<double> glauber_kernel(const Polynomial& p, std::size_t cap = 12) {
  check_cap(p.n(), cap);
  const std::size_t n = p.n();
  const std::size_t states = std::size_t{1} << n;
  const detail::SiteDerivatives sites(p);
  std::vector<double> k(states * states, 0.0);
  for (std::size_t x = 0; x < states; ++x) {
    for (std::size_t i = 0; i < n; ++i) {
      const double plus = sites.prob_plus(x, i);
      const std::size_t x_plus = x & ~(std::size_t{1} << i);
      const std::size_t x_minus = x | (std::size_t{1} << i);
      k[x * states + x_plus] += plus / double(n);
      k[x * states + x_minus] += (1.0 - plus) / double(n);
    }
  }
  return k;
}

/// Empirical distribution of a batch over packed configurations.
inline std::vector<double> empirical_distribution(const SampleBatch& batch, std::size_t cap = kDefaultEnumerationCap) {
  check_cap(batch.n(), cap);
  std::vector<double> freq(std::size_t{1} << batch.n(), 0.0);
  for (std::size_t k = 0; k < batch.size(); ++k) freq[pack(batch.row(k))] += 1.0;
  for (auto& f : freq) f /= double(batch.size());
  return freq;
}

}  // namespace spinlearn
