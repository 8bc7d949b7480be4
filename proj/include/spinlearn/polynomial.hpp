#pragma once

// Sparse multilinear polynomials over {-1,+1}^n and the Ising parameterisation.

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinlearn/error.hpp"

namespace spinlearn {

using Spin = std::int8_t;
using Config = std::vector<Spin>;
using ConfigView = std::span<const Spin>;

inline constexpr double kNumericTolerance = 1e-12;

/// A set of variable indices, stored strictly increasing.
class Monomial {
 public:
  Monomial() = default;
  Monomial(std::initializer_list<std::uint32_t> idx) : Monomial(std::vector<std::uint32_t>(idx)) {}
  explicit Monomial(std::vector<std::uint32_t> idx) : idx_(std::move(idx)) {
    for (std::size_t k = 1; k < idx_.size(); ++k)
      if (idx_[k - 1] >= idx_[k]) throw ConfigError("monomial indices must be strictly increasing");
  }

  // Accepts any order; duplicates are an error.
  static Monomial from_unsorted(std::vector<std::uint32_t> idx) {
    std::sort(idx.begin(), idx.end());
    return Monomial(std::move(idx));
  }

  std::span<const std::uint32_t> indices() const noexcept { return idx_; }
  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }
  std::uint32_t max_index() const noexcept { return idx_.empty() ? 0 : idx_.back(); }

  bool contains(std::uint32_t i) const noexcept { return std::binary_search(idx_.begin(), idx_.end(), i); }

  Monomial without(std::uint32_t i) const {
    Monomial m;
    m.idx_.reserve(idx_.size());
    for (auto j : idx_)
      if (j != i) m.idx_.push_back(j);
    return m;
  }

  Monomial with(std::uint32_t i) const {
    Monomial m = *this;
    auto it = std::lower_bound(m.idx_.begin(), m.idx_.end(), i);
    if (it == m.idx_.end() || *it != i) m.idx_.insert(it, i);
    return m;
  }

  bool is_subset_of(const Monomial& other) const noexcept {
    return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
  }

  std::size_t overlap(const Monomial& other) const noexcept {
    std::size_t count = 0;
    auto a = idx_.begin();
    auto b = other.idx_.begin();
    while (a != idx_.end() && b != other.idx_.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++count;
        ++a;
        ++b;
      }
    }
    return count;
  }

  Monomial set_minus(const Monomial& other) const {
    Monomial m;
    std::set_difference(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                        std::back_inserter(m.idx_));
    return m;
  }

  // chi_S(x) = prod_{i in S} x_i
  double chi(ConfigView x) const noexcept {
    int sign = 1;
    for (auto i : idx_) sign *= x[i];
    return sign;
  }

  // Bitmask over variables, valid for indices < 64.
  std::uint64_t mask() const noexcept {
    std::uint64_t m = 0;
    for (auto i : idx_) m |= std::uint64_t{1} << i;
    return m;
  }

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<std::uint32_t> idx_;
};

/// Multilinear polynomial on n variables with monomials of size at most t_max.
/// Zero coefficients are never stored; terms iterate in lexicographic order.
class Polynomial {
 public:
  using Terms = std::map<Monomial, double>;

  Polynomial() = default;
  Polynomial(std::size_t n, std::size_t t_max) : n_(n), t_max_(t_max) {}

  std::size_t n() const noexcept { return n_; }
  std::size_t t_max() const noexcept { return t_max_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  double coef(const Monomial& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? 0.0 : it->second;
  }

  // Builder operations. Setting a coefficient to exactly zero removes the term.
  Polynomial& set(const Monomial& s, double c) {
    check(s);
    if (c == 0.0)
      terms_.erase(s);
    else
      terms_[s] = c;
    return *this;
  }

  Polynomial& add(const Monomial& s, double c) {
    check(s);
    if (c == 0.0) return *this;
    auto [it, inserted] = terms_.try_emplace(s, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
    return *this;
  }

  Polynomial& erase(const Monomial& s) {
    terms_.erase(s);
    return *this;
  }

  std::size_t degree() const noexcept {
    std::size_t d = 0;
    for (const auto& [s, c] : terms_) d = std::max(d, s.size());
    return d;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_ == b.n_ && a.t_max_ == b.t_max_ && a.terms_ == b.terms_;
  }

 private:
  void check(const Monomial& s) const {
    if (s.size() > t_max_) throw ConfigError("monomial size exceeds t_max");
    if (!s.empty() && s.max_index() >= n_) throw ConfigError("monomial index out of range");
  }

  std::size_t n_ = 0;
  std::size_t t_max_ = 0;
  Terms terms_;
};

inline double eval_poly(const Polynomial& p, ConfigView x) {
  if (x.size() != p.n()) throw DimensionError("configuration length " + std::to_string(x.size()) +
                                              " vs polynomial n " + std::to_string(p.n()));
  double sum = 0.0;
  for (const auto& [s, c] : p.terms()) sum += c * s.chi(x);
  return sum;
}

/// Flat bitmask form for fast evaluation on packed configurations.
/// Bit i of a packed configuration is set iff x_i = -1.
class BitPolynomial {
 public:
  BitPolynomial() = default;
  explicit BitPolynomial(const Polynomial& p) : n_(p.n()) {
    if (p.n() > 63) throw BudgetError("packed evaluation supports at most 63 variables");
    masks_.reserve(p.size());
    coefs_.reserve(p.size());
    for (const auto& [s, c] : p.terms()) {
      masks_.push_back(s.mask());
      coefs_.push_back(c);
    }
  }

  std::size_t n() const noexcept { return n_; }

  double operator()(std::uint64_t bits) const noexcept {
    double sum = 0.0;
    for (std::size_t k = 0; k < masks_.size(); ++k)
      sum += (std::popcount(masks_[k] & bits) & 1) ? -coefs_[k] : coefs_[k];
    return sum;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> masks_;
  std::vector<double> coefs_;
};

inline std::uint64_t pack(ConfigView x) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < 0) bits |= std::uint64_t{1} << i;
  return bits;
}

inline Config unpack(std::uint64_t bits, std::size_t n) {
  Config x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = ((bits >> i) & 1) ? Spin{-1} : Spin{1};
  return x;
}

inline void check_index(const Polynomial& p, std::size_t i) {
  if (i >= p.n()) throw ConfigError("index " + std::to_string(i) + " out of range for n = " + std::to_string(p.n()));
}

/// Coefficient on S\{i} is p(S) for every S containing i, so that
/// p(x) = x_i * d_i p(x) + (terms without x_i).
inline Polynomial partial_derivative(const Polynomial& p, std::size_t i) {
  check_index(p, i);
  Polynomial d(p.n(), p.t_max() == 0 ? 0 : p.t_max() - 1);
  const auto v = static_cast<std::uint32_t>(i);
  for (const auto& [s, c] : p.terms())
    if (s.contains(v)) d.add(s.without(v), c);
  return d;
}

/// Derivative with respect to every variable of T: sum over S containing T of p(S) chi_{S\T}.
inline Polynomial partial_derivative(const Polynomial& p, const Monomial& t) {
  for (auto i : t.indices()) check_index(p, i);
  Polynomial d(p.n(), p.t_max() >= t.size() ? p.t_max() - t.size() : 0);
  for (const auto& [s, c] : p.terms())
    if (t.is_subset_of(s)) d.add(s.set_minus(t), c);
  return d;
}

/// p restricted to monomials not containing x_i.
inline Polynomial drop_variable(const Polynomial& p, std::size_t i) {
  check_index(p, i);
  Polynomial r(p.n(), p.t_max());
  const auto v = static_cast<std::uint32_t>(i);
  for (const auto& [s, c] : p.terms())
    if (!s.contains(v)) r.set(s, c);
  return r;
}

/// psi^S(x) = psi(x) - psi(x^S) = 2 * sum_{|T cap S| odd} psi(T) chi_T(x).
inline Polynomial flip_polynomial(const Polynomial& p, const Monomial& flip) {
  for (auto i : flip.indices()) check_index(p, i);
  Polynomial out(p.n(), p.t_max());
  for (const auto& [s, c] : p.terms())
    if (s.overlap(flip) % 2 == 1) out.set(s, 2.0 * c);
  return out;
}

inline Config flip(ConfigView x, const Monomial& s) {
  Config y(x.begin(), x.end());
  for (auto i : s.indices()) y[i] = static_cast<Spin>(-y[i]);
  return y;
}

inline std::size_t hamming(ConfigView x, ConfigView y) {
  if (x.size() != y.size()) throw DimensionError("hamming distance operands");
  std::size_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
  return d;
}

inline std::vector<Monomial> maximal_monomials(const Polynomial& p) {
  std::vector<Monomial> out;
  for (const auto& [s, c] : p.terms()) {
    bool maximal = true;
    for (const auto& [u, cu] : p.terms()) {
      if (u.size() > s.size() && s.is_subset_of(u)) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(s);
  }
  return out;
}

inline bool is_maximal(const Polynomial& p, const Monomial& s) {
  if (p.terms().find(s) == p.terms().end()) return false;
  for (const auto& [u, c] : p.terms())
    if (u.size() > s.size() && s.is_subset_of(u)) return false;
  return true;
}

namespace detail {

inline Config boost_witness(const Polynomial& p, const Monomial& s, Config x) {
  if (s.empty()) return x;
  const std::uint32_t i = s.indices().back();
  const Polynomial dp = partial_derivative(p, i);
  const Polynomial rest = drop_variable(p, i);
  Config z = boost_witness(dp, s.without(i), std::move(x));
  const double prod = eval_poly(dp, z) * eval_poly(rest, z);
  z[i] = prod >= 0.0 ? Spin{1} : Spin{-1};
  return z;
}

}  // namespace detail

/// Constructs y within Hamming distance |S| of x with |p(y)| >= |p(S)| by
/// fixing one coordinate of S at a time, innermost derivative first.
inline Config find_boost_witness(const Polynomial& p, const Monomial& s, ConfigView x) {
  if (x.size() != p.n()) throw DimensionError("witness start configuration");
  if (!is_maximal(p, s)) throw ConfigError("monomial is not maximal in the polynomial");
  return detail::boost_witness(p, s, Config(x.begin(), x.end()));
}

inline double l1_norm(const Polynomial& p) {
  double sum = 0.0;
  for (const auto& [s, c] : p.terms()) sum += std::abs(c);
  return sum;
}

inline double l1_distance(const Polynomial& p, const Polynomial& q) {
  if (p.n() != q.n() || p.t_max() != q.t_max())
    throw DimensionError("l1_distance requires matching n and t_max");
  double sum = 0.0;
  auto a = p.terms().begin();
  auto b = q.terms().begin();
  while (a != p.terms().end() || b != q.terms().end()) {
    if (b == q.terms().end() || (a != p.terms().end() && a->first < b->first)) {
      sum += std::abs(a->second);
      ++a;
    } else if (a == p.terms().end() || b->first < a->first) {
      sum += std::abs(b->second);
      ++b;
    } else {
      sum += std::abs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return sum;
}

inline double linf_distance(const Polynomial& p, const Polynomial& q) {
  if (p.n() != q.n() || p.t_max() != q.t_max())
    throw DimensionError("linf_distance requires matching n and t_max");
  double worst = 0.0;
  for (const auto& [s, c] : p.terms()) worst = std::max(worst, std::abs(c - q.coef(s)));
  for (const auto& [s, c] : q.terms())
    if (p.terms().find(s) == p.terms().end()) worst = std::max(worst, std::abs(c));
  return worst;
}

/// lambda(p) = max_i ||d_i p||_1
inline double width(const Polynomial& p) {
  std::vector<double> row(p.n(), 0.0);
  for (const auto& [s, c] : p.terms())
    for (auto i : s.indices()) row[i] += std::abs(c);
  return row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
}

inline Polynomial scaled(const Polynomial& p, double factor) {
  Polynomial out(p.n(), p.t_max());
  for (const auto& [s, c] : p.terms()) out.set(s, c * factor);
  return out;
}

inline Polynomial with_t_max(const Polynomial& p, std::size_t t_max) {
  Polynomial out(p.n(), t_max);
  for (const auto& [s, c] : p.terms()) out.set(s, c);
  return out;
}

/// Symmetric interaction matrix with zero diagonal (both triangle slots stored) and field h.
class IsingModel {
 public:
  IsingModel() = default;
  explicit IsingModel(std::size_t n) : n_(n), a_(n * n, 0.0), h_(n, 0.0) {}
  IsingModel(std::size_t n, std::vector<double> a, std::vector<double> h)
      : n_(n), a_(std::move(a)), h_(std::move(h)) {
    if (a_.size() != n_ * n_ || h_.size() != n_) throw DimensionError("Ising model arrays");
    for (std::size_t i = 0; i < n_; ++i) {
      if (a_[i * n_ + i] != 0.0) throw ConfigError("Ising interaction matrix must have a zero diagonal");
      for (std::size_t j = 0; j < i; ++j)
        if (a_[i * n_ + j] != a_[j * n_ + i]) throw ConfigError("Ising interaction matrix must be symmetric");
    }
  }

  std::size_t n() const noexcept { return n_; }
  double a(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }
  double h(std::size_t i) const noexcept { return h_[i]; }
  std::span<const double> a_data() const noexcept { return a_; }
  std::span<const double> h_data() const noexcept { return h_; }

  void set_a(std::size_t i, std::size_t j, double v) {
    if (i >= n_ || j >= n_) throw ConfigError("Ising index out of range");
    if (i == j) throw ConfigError("Ising diagonal entries are fixed at zero");
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }
  void set_h(std::size_t i, double v) {
    if (i >= n_) throw ConfigError("Ising index out of range");
    h_[i] = v;
  }

  friend bool operator==(const IsingModel&, const IsingModel&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
  std::vector<double> h_;
};

inline Polynomial ising_to_poly(const IsingModel& m) {
  Polynomial p(m.n(), 2);
  for (std::uint32_t i = 0; i < m.n(); ++i) {
    p.set(Monomial{i}, m.h(i));
    for (std::uint32_t j = i + 1; j < m.n(); ++j) p.set(Monomial{i, j}, m.a(i, j));
  }
  return p;
}

/// Inverse of ising_to_poly. A constant term is dropped; the flag reports whether one was present.
inline IsingModel poly_to_ising(const Polynomial& p, bool* dropped_constant = nullptr) {
  if (p.degree() > 2) throw ConfigError("poly_to_ising requires degree at most 2");
  IsingModel m(p.n());
  bool dropped = false;
  for (const auto& [s, c] : p.terms()) {
    auto idx = s.indices();
    if (idx.empty())
      dropped = true;
    else if (idx.size() == 1)
      m.set_h(idx[0], c);
    else
      m.set_a(idx[0], idx[1], c);
  }
  if (dropped_constant) *dropped_constant = dropped;
  return m;
}

inline double ising_width(const IsingModel& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.n(); ++i) {
    double row = std::abs(m.h(i));
    for (std::size_t j = 0; j < m.n(); ++j) row += std::abs(m.a(i, j));
    worst = std::max(worst, row);
  }
  return worst;
}

}  // namespace spinlearn
