#pragma once

// Multiplicative-weights learner for sigmoid-of-linear models under an l1 bound,
// with an optional known per-example offset added inside the link function.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "spinlearn/error.hpp"
#include "spinlearn/rng.hpp"
#include "spinlearn/sampler.hpp"

namespace spinlearn {

struct SparsitronConfig {
  double lambda = 1.0;  // l1 bound on the target vector
  double eps = 0.01;    // target squared risk
  double delta = 0.1;   // failure probability
  std::size_t iterations = 0;  // T; 0 derives it from lambda, eps, delta, dim
  std::size_t holdout = 0;     // M; 0 derives it from T, eps, delta
  double c_t = 10.0;
  double c_m = 10.0;
  // Candidate iterates scored on the holdout; 0 scores all T of them.
  std::size_t max_candidates = 2000;
  bool keep_trace = false;

  void validate() const {
    if (!(lambda > 0.0)) throw ConfigError("sparsitron lambda must be positive");
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("sparsitron eps must be in (0, 1]");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("sparsitron delta must be in (0, 1)");
  }
};

struct SparsitronBudget {
  std::size_t iterations = 0;
  std::size_t holdout = 0;
};

/// T = ceil(c_T lambda^2 ln(2m/(delta eps)) / eps^2), M = ceil(c_M ln(T/delta) / eps^2).
inline SparsitronBudget sparsitron_budget(const SparsitronConfig& cfg, std::size_t dim) {
  cfg.validate();
  SparsitronBudget b;
  const double m2 = 2.0 * static_cast<double>(std::max<std::size_t>(dim, 1));
  const double t = cfg.iterations
                       ? static_cast<double>(cfg.iterations)
                       : std::ceil(cfg.c_t * cfg.lambda * cfg.lambda * std::log(m2 / (cfg.delta * cfg.eps)) /
                                   (cfg.eps * cfg.eps));
  const double m = cfg.holdout ? static_cast<double>(cfg.holdout)
                               : std::ceil(cfg.c_m * std::log(std::max(t, 1.0) / cfg.delta) / (cfg.eps * cfg.eps));
  constexpr double limit = 1e18;
  if (t > limit || m > limit) throw BudgetError("sparsitron budget overflows: T = " + std::to_string(t));
  b.iterations = static_cast<std::size_t>(std::max(t, 1.0));
  b.holdout = static_cast<std::size_t>(std::max(m, 1.0));
  return b;
}

/// Examples with features in [-1, 1]^dim, labels in {-1, +1}, and a known offset g(x).
template <class D>
concept LabeledExamples = requires(const D& d, std::size_t k, std::span<double> out) {
  { d.size() } -> std::convertible_to<std::size_t>;
  { d.dim() } -> std::convertible_to<std::size_t>;
  { d.label(k) } -> std::convertible_to<int>;
  { d.offset(k) } -> std::convertible_to<double>;
  d.features(k, out);
};

/// Owning row-major example set.
class DenseExamples {
 public:
  DenseExamples() = default;
  explicit DenseExamples(std::size_t dim) : dim_(dim) {}

  void push(std::span<const double> x, int y, double offset = 0.0) {
    if (x.size() != dim_) throw DimensionError("example feature length");
    x_.insert(x_.end(), x.begin(), x.end());
    y_.push_back(y);
    g_.push_back(offset);
  }

  std::size_t size() const noexcept { return y_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  int label(std::size_t k) const { return y_[k]; }
  double offset(std::size_t k) const { return g_[k]; }
  void features(std::size_t k, std::span<double> out) const {
    std::copy_n(x_.begin() + static_cast<std::ptrdiff_t>(k * dim_), dim_, out.begin());
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> x_;
  std::vector<int> y_;
  std::vector<double> g_;
};

/// Rows [begin, end) of another example set.
template <LabeledExamples D>
class ExampleRange {
 public:
  ExampleRange(const D& base, std::size_t begin, std::size_t end) : base_(&base), begin_(begin), end_(end) {
    if (begin > end || end > base.size()) throw BudgetError("example range out of bounds");
  }
  std::size_t size() const noexcept { return end_ - begin_; }
  std::size_t dim() const { return base_->dim(); }
  int label(std::size_t k) const { return base_->label(begin_ + k); }
  double offset(std::size_t k) const { return base_->offset(begin_ + k); }
  void features(std::size_t k, std::span<double> out) const { base_->features(begin_ + k, out); }

 private:
  const D* base_;
  std::size_t begin_;
  std::size_t end_;
};

struct SparsitronResult {
  std::vector<double> weights;  // w-hat, ||w-hat||_1 <= lambda
  std::size_t chosen_iteration = 0;  // 1-based index t of the returned lambda p^t
  double holdout_risk = 0.0;
  std::size_t iterations = 0;
  std::size_t holdout = 0;
  std::size_t candidates = 0;
  std::vector<std::pair<std::size_t, double>> trace;  // (iteration, holdout risk)
};

namespace detail {

// Holdout rows grouped by identical (features, offset) so each candidate is scored once per
// distinct row: risk = sum_u [c_u s_u^2 - 2 s_u y_u + y_u] / M with y in {0,1}.
struct CompressedHoldout {
  std::size_t dim = 0;
  std::vector<double> rows;  // dim features then offset, per distinct row
  std::vector<double> count;
  std::vector<double> ones;
  double total = 0.0;

  template <LabeledExamples D>
  CompressedHoldout(const D& data, std::size_t begin, std::size_t end) : dim(data.dim()) {
    std::unordered_map<std::string, std::size_t> index;
    std::vector<double> buf(dim + 1);
    std::string key;
    for (std::size_t k = begin; k < end; ++k) {
      data.features(k, std::span<double>(buf.data(), dim));
      buf[dim] = data.offset(k);
      key.assign(reinterpret_cast<const char*>(buf.data()), buf.size() * sizeof(double));
      auto [it, inserted] = index.try_emplace(key, count.size());
      if (inserted) {
        rows.insert(rows.end(), buf.begin(), buf.end());
        count.push_back(0.0);
        ones.push_back(0.0);
      }
      count[it->second] += 1.0;
      ones[it->second] += data.label(k) > 0 ? 1.0 : 0.0;
    }
    total = static_cast<double>(end - begin);
  }

  double risk(std::span<const double> w) const {
    double sum = 0.0;
    const std::size_t stride = dim + 1;
    for (std::size_t u = 0; u < count.size(); ++u) {
      const double* r = rows.data() + u * stride;
      double z = r[dim];
      for (std::size_t j = 0; j < dim; ++j) z += w[j] * r[j];
      const double s = sigmoid(z);
      sum += count[u] * s * s - 2.0 * s * ones[u] + ones[u];
    }
    return sum / total;
  }
};

}  // namespace detail

/// Hedge over 2*dim signed experts. The first T examples of `train` are consumed once, in
/// order; candidate lambda p^t vectors are scored on `holdout` and the lowest risk wins
/// (earliest iteration on ties).
template <LabeledExamples Train, LabeledExamples Holdout>
SparsitronResult sparsitron(const Train& train, const Holdout& holdout, const SparsitronConfig& cfg) {
  cfg.validate();
  const std::size_t dim = train.dim();
  if (holdout.dim() != dim) throw DimensionError("train and holdout feature dimensions differ");
  if (dim == 0) throw ConfigError("sparsitron needs at least one feature");
  const SparsitronBudget budget = sparsitron_budget(cfg, dim);
  if (train.size() < budget.iterations)
    throw BudgetError("sparsitron needs " + std::to_string(budget.iterations) + " training examples, got " +
                      std::to_string(train.size()));
  if (holdout.size() < budget.holdout)
    throw BudgetError("sparsitron needs " + std::to_string(budget.holdout) + " holdout examples, got " +
                      std::to_string(holdout.size()));

  const std::size_t T = budget.iterations;
  const double lambda = cfg.lambda;
  const double log_beta = -std::log1p(std::sqrt(2.0 * std::log(2.0 * static_cast<double>(dim)) / static_cast<double>(T)));

  const std::size_t stride =
      cfg.max_candidates == 0 ? 1 : std::max<std::size_t>(1, (T + cfg.max_candidates - 1) / cfg.max_candidates);

  // w_plus[j], w_minus[j]: unnormalised expert weights for +x_j and -x_j.
  std::vector<double> w_plus(dim, 1.0);
  std::vector<double> w_minus(dim, 1.0);
  double total = 2.0 * static_cast<double>(dim);
  std::vector<double> x(dim);

  std::vector<std::size_t> cand_iter;
  std::vector<double> cand_weights;
  auto record = [&](std::size_t iter) {
    cand_iter.push_back(iter);
    for (std::size_t j = 0; j < dim; ++j) cand_weights.push_back(lambda * (w_plus[j] - w_minus[j]) / total);
  };

  for (std::size_t t = 0; t < T; ++t) {
    const std::size_t iter = t + 1;
    if ((iter - 1) % stride == 0 || iter == T) record(iter);

    train.features(t, x);
    const int y = train.label(t);
    if (y != 1 && y != -1) throw ConfigError("labels must be +1 or -1");
    double dot = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      if (!(x[j] >= -1.0 && x[j] <= 1.0)) throw ConfigError("feature out of [-1, 1]");
      dot += (w_plus[j] - w_minus[j]) * x[j];
    }
    const double u = sigmoid(lambda * dot / total + train.offset(t));
    const double residual = u - (y > 0 ? 1.0 : 0.0);  // in [-1, 1]
    // Loss of expert (+j) is (1 + residual x_j)/2, of (-j) is (1 - residual x_j)/2; the common
    // 1/2 factor cancels after normalisation.
    const double c = 0.5 * log_beta * residual;
    const double up = std::exp(c);
    const double down = std::exp(-c);
    total = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      double fp;
      double fm;
      if (x[j] == 1.0) {
        fp = up;
        fm = down;
      } else if (x[j] == -1.0) {
        fp = down;
        fm = up;
      } else if (x[j] == 0.0) {
        fp = fm = 1.0;
      } else {
        fp = std::exp(c * x[j]);
        fm = 1.0 / fp;
      }
      w_plus[j] *= fp;
      w_minus[j] *= fm;
      total += w_plus[j] + w_minus[j];
    }
    if (total > 1e200 || total < 1e-200) {
      for (std::size_t j = 0; j < dim; ++j) {
        w_plus[j] /= total;
        w_minus[j] /= total;
      }
      total = 1.0;
    }
  }

  const detail::CompressedHoldout scorer(holdout, 0, budget.holdout);
  SparsitronResult result;
  result.iterations = T;
  result.holdout = budget.holdout;
  result.candidates = cand_iter.size();
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < cand_iter.size(); ++k) {
    const double r = scorer.risk(std::span<const double>(cand_weights.data() + k * dim, dim));
    if (cfg.keep_trace) result.trace.emplace_back(cand_iter[k], r);
    if (r < best) {
      best = r;
      best_k = k;
    }
  }
  result.weights.assign(cand_weights.begin() + static_cast<std::ptrdiff_t>(best_k * dim),
                        cand_weights.begin() + static_cast<std::ptrdiff_t>((best_k + 1) * dim));
  result.chosen_iteration = cand_iter[best_k];
  result.holdout_risk = best;
  return result;
}

/// Uses the first T rows of `data` for training and the following M rows as holdout.
template <LabeledExamples D>
SparsitronResult sparsitron(const D& data, const SparsitronConfig& cfg) {
  const SparsitronBudget b = sparsitron_budget(cfg, data.dim());
  if (data.size() < b.iterations + b.holdout)
    throw BudgetError("sparsitron needs " + std::to_string(b.iterations + b.holdout) + " examples, got " +
                      std::to_string(data.size()));
  return sparsitron(ExampleRange<D>(data, 0, b.iterations),
                    ExampleRange<D>(data, b.iterations, b.iterations + b.holdout), cfg);
}

/// |sigma(a) - sigma(b)| against exp(-|a| - 3) min(1, |a - b|).
struct AntiLipschitzGap {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline AntiLipschitzGap anti_lipschitz_gap(double a, double b) {
  return {std::abs(sigmoid(a) - sigmoid(b)), std::exp(-std::abs(a) - 3.0) * std::min(1.0, std::abs(a - b))};
}

}  // namespace spinlearn
