#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spinlearn/error.hpp"
#include "spinlearn/polynomial.hpp"
#include "spinlearn/sampler.hpp"

namespace spinlearn {

/// Monomial basis of degree <= k over the variables [0, n), optionally excluding one
/// variable (the node being regressed). Constant first, then lexicographic.
class FeatureMap {
 public:
  FeatureMap(std::size_t n, std::size_t degree, std::optional<std::uint32_t> excluded = std::nullopt)
      : n_(n), degree_(degree) {
    if (n > 63) throw BudgetError("feature expansion supports at most 63 variables");
    std::vector<std::uint32_t> vars;
    for (std::uint32_t v = 0; v < n; ++v)
      if (!excluded || *excluded != v) vars.push_back(v);
    std::vector<std::uint32_t> current;
    grow(vars, 0, current);
    std::sort(monomials_.begin(), monomials_.end());
    masks_.reserve(monomials_.size());
    for (const auto& m : monomials_) masks_.push_back(m.mask());
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return monomials_.size(); }
  const std::vector<Monomial>& monomials() const noexcept { return monomials_; }
  const Monomial& monomial(std::size_t j) const { return monomials_.at(j); }

  void expand_packed(std::uint64_t bits, std::span<double> out) const {
    for (std::size_t j = 0; j < masks_.size(); ++j) out[j] = (std::popcount(masks_[j] & bits) & 1) ? -1.0 : 1.0;
  }

 private:
  void grow(const std::vector<std::uint32_t>& vars, std::size_t from, std::vector<std::uint32_t>& current) {
    monomials_.emplace_back(current);
    if (current.size() == degree_) return;
    for (std::size_t k = from; k < vars.size(); ++k) {
      current.push_back(vars[k]);
      grow(vars, k + 1, current);
      current.pop_back();
    }
  }

  std::size_t n_;
  std::size_t degree_;
  std::vector<Monomial> monomials_;
  std::vector<std::uint64_t> masks_;
};

/// Feature vector (chi_S(x))_S in FeatureMap order.
inline std::vector<double> expand_features(ConfigView x, const FeatureMap& fm) {
  if (x.size() != fm.n()) throw DimensionError("configuration length vs feature map n");
  std::vector<double> out(fm.size());
  fm.expand_packed(pack(x), out);
  return out;
}

/// A sample batch with each row packed into a bitmask.
struct PackedSamples {
  std::size_t n = 0;
  std::vector<std::uint64_t> rows;

  PackedSamples() = default;
  explicit PackedSamples(const SampleBatch& batch) : n(batch.n()) {
    if (n > 63) throw BudgetError("packed samples support at most 63 variables");
    rows.reserve(batch.size());
    for (std::size_t k = 0; k < batch.size(); ++k) rows.push_back(pack(batch.row(k)));
  }
  std::size_t size() const noexcept { return rows.size(); }
};

/// Regression view for node i: features chi_S(x) over the map, label x_i, offset g(x).
class NodeExamples {
 public:
  NodeExamples(const PackedSamples& samples, std::size_t begin, std::size_t end, const FeatureMap& fm,
               std::uint32_t node, const BitPolynomial* offset = nullptr)
      : samples_(&samples), begin_(begin), end_(end), fm_(&fm), node_bit_(std::uint64_t{1} << node), offset_(offset) {
    if (begin > end || end > samples.size()) throw BudgetError("node example range out of bounds");
  }

  std::size_t size() const noexcept { return end_ - begin_; }
  std::size_t dim() const noexcept { return fm_->size(); }
  int label(std::size_t k) const noexcept { return (samples_->rows[begin_ + k] & node_bit_) ? -1 : 1; }
  double offset(std::size_t k) const noexcept { return offset_ ? (*offset_)(samples_->rows[begin_ + k]) : 0.0; }
  void features(std::size_t k, std::span<double> out) const { fm_->expand_packed(samples_->rows[begin_ + k], out); }

 private:
  const PackedSamples* samples_;
  std::size_t begin_;
  std::size_t end_;
  const FeatureMap* fm_;
  std::uint64_t node_bit_;
  const BitPolynomial* offset_;
};

}  // namespace spinlearn
