#pragma once

// Seeded generators for the random ensembles: SK, random Ising on a graph,
// random t-MRF on a graph, and the pure t-spin model. Each coefficient is a
// pure function of (seed, term), so enumeration order never changes a model.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinlearn/error.hpp"
#include "spinlearn/graph.hpp"
#include "spinlearn/polynomial.hpp"
#include "spinlearn/rng.hpp"

namespace spinlearn {

enum class EnsembleKind { sk, random_ising, random_mrf, pure_spin };
enum class WeightDist { gaussian, rademacher };
enum class FieldMode { zero, gaussian, rademacher };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::sk;
  std::size_t n = 0;  // used by SK and pure spin; graph kinds take n from the graph
  double beta = 1.0;
  std::size_t t = 2;
  WeightDist weight_dist = WeightDist::gaussian;
  FieldMode field_mode = FieldMode::zero;
  double field_mean = 0.0;   // Gaussian field only
  double field_sigma = 1.0;  // Gaussian field only
  std::optional<Graph> graph;
  std::string graph_spec;  // provenance of `graph` when built from a named constructor
  std::uint64_t seed = 0;
  std::uint64_t max_multi_indices = 100'000'000;

  void validate() const {
    if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
    if (t < 1) throw ConfigError("t must be at least 1");
    if (kind == EnsembleKind::sk && t != 2) throw ConfigError("SK ensembles have t = 2");
    if (kind == EnsembleKind::random_ising && t != 2) throw ConfigError("random Ising ensembles have t = 2");
    if ((kind == EnsembleKind::random_ising || kind == EnsembleKind::random_mrf) && !graph)
      throw ConfigError("graph ensembles need a graph");
    if ((kind == EnsembleKind::sk || kind == EnsembleKind::pure_spin) && n == 0)
      throw ConfigError("n must be at least 1");
    if (field_sigma < 0.0) throw ConfigError("field sigma must be nonnegative");
  }

  std::size_t vertex_count() const { return graph ? graph->n() : n; }
  std::size_t max_degree() const { return graph ? graph->max_degree() : (n == 0 ? 0 : n - 1); }
};

namespace detail {

constexpr std::uint64_t kFieldStream = 0x6669656c64ULL;

inline std::uint64_t term_key(const Monomial& s) { return rng::hash_indices(s.indices()); }

inline double unit_weight(WeightDist dist, std::uint64_t seed, std::uint64_t key) {
  return dist == WeightDist::gaussian ? rng::normal(seed, key) : rng::rademacher(seed, key);
}

inline double field_value(const EnsembleSpec& spec, std::uint32_t i) {
  const std::uint64_t key = rng::mix(kFieldStream, i);
  switch (spec.field_mode) {
    case FieldMode::zero:
      return 0.0;
    case FieldMode::gaussian:
      return spec.field_mean + spec.field_sigma * rng::normal(spec.seed, key);
    case FieldMode::rademacher:
      return rng::rademacher(spec.seed, key);
  }
  return 0.0;
}

}  // namespace detail

/// Coefficient magnitude of Rademacher graph ensembles: beta / (d+1)^((t-1)/2).
inline double ensemble_scale(double beta, std::size_t d, std::size_t t) {
  return beta / std::pow(static_cast<double>(d + 1), (static_cast<double>(t) - 1.0) / 2.0);
}

inline IsingModel gen_sk(std::size_t n, double beta, FieldMode field_mode, std::uint64_t seed,
                         double field_mean = 0.0, double field_sigma = 1.0) {
  if (n == 0) throw ConfigError("SK model needs n >= 1");
  EnsembleSpec spec;
  spec.kind = EnsembleKind::sk;
  spec.n = n;
  spec.beta = beta;
  spec.field_mode = field_mode;
  spec.field_mean = field_mean;
  spec.field_sigma = field_sigma;
  spec.seed = seed;
  spec.validate();
  const double scale = beta / std::sqrt(static_cast<double>(n));
  IsingModel m(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    m.set_h(i, detail::field_value(spec, i));
    for (std::uint32_t j = i + 1; j < n; ++j)
      m.set_a(i, j, scale * rng::normal(seed, detail::term_key(Monomial{i, j})));
  }
  return m;
}

inline IsingModel gen_random_ising(const Graph& g, double beta, WeightDist weights, FieldMode field_mode,
                                   std::uint64_t seed, double field_mean = 0.0, double field_sigma = 1.0) {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::random_ising;
  spec.graph = g;
  spec.beta = beta;
  spec.weight_dist = weights;
  spec.field_mode = field_mode;
  spec.field_mean = field_mean;
  spec.field_sigma = field_sigma;
  spec.seed = seed;
  spec.validate();
  const double scale = ensemble_scale(beta, g.max_degree(), 2);
  IsingModel m(g.n());
  for (std::uint32_t i = 0; i < g.n(); ++i) m.set_h(i, detail::field_value(spec, i));
  for (auto [u, v] : g.edges())
    m.set_a(u, v, scale * detail::unit_weight(weights, seed, detail::term_key(Monomial{u, v})));
  return m;
}

/// One term per clique of size 1..t with coefficient beta/(d+1)^((t-1)/2) times a unit draw.
inline Polynomial gen_random_mrf(const Graph& g, double beta, std::size_t t, WeightDist weights,
                                 std::uint64_t seed) {
  if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
  if (t < 1) throw ConfigError("t must be at least 1");
  const double scale = ensemble_scale(beta, g.max_degree(), t);
  Polynomial p(g.n(), t);
  for (const auto& s : g.cliques(t)) p.set(s, scale * detail::unit_weight(weights, seed, detail::term_key(s)));
  return p;
}

/// One standard normal per ordered multi-index in [n]^t, reduced by x_i^2 = 1 and summed
/// exactly per multilinear monomial; the constant term is dropped.
inline Polynomial gen_pure_p_spin(std::size_t n, double beta, std::size_t t, std::uint64_t seed,
                                  std::uint64_t max_multi_indices = 100'000'000) {
  if (n == 0) throw ConfigError("pure spin model needs n >= 1");
  if (t < 1) throw ConfigError("t must be at least 1");
  if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
  double count = std::pow(static_cast<double>(n), static_cast<double>(t));
  if (count > static_cast<double>(max_multi_indices))
    throw BudgetError("n^t = " + std::to_string(count) + " multi-indices exceeds the generation budget");
  const double scale = beta / std::pow(static_cast<double>(n), (static_cast<double>(t) - 1.0) / 2.0);
  const auto total = static_cast<std::uint64_t>(count);

  std::map<Monomial, double> acc;
  std::vector<std::uint32_t> tuple(t, 0);
  std::vector<std::uint32_t> odd;
  for (std::uint64_t k = 0; k < total; ++k) {
    std::uint64_t rem = k;
    for (std::size_t j = 0; j < t; ++j) {
      tuple[t - 1 - j] = static_cast<std::uint32_t>(rem % n);
      rem /= n;
    }
    auto sorted = tuple;
    std::sort(sorted.begin(), sorted.end());
    odd.clear();
    for (std::size_t a = 0; a < sorted.size();) {
      std::size_t b = a;
      while (b < sorted.size() && sorted[b] == sorted[a]) ++b;
      if ((b - a) % 2 == 1) odd.push_back(sorted[a]);
      a = b;
    }
    if (odd.empty()) continue;
    acc[Monomial(odd)] += rng::normal(seed, k);
  }
  Polynomial p(n, t);
  for (const auto& [s, c] : acc) p.set(s, scale * c);
  return p;
}

struct GeneratedModel {
  Polynomial psi;
  std::optional<IsingModel> ising;  // present for the pairwise kinds
  std::optional<Graph> graph;       // generating graph, when there is one
};

inline GeneratedModel generate(const EnsembleSpec& spec) {
  spec.validate();
  GeneratedModel out;
  switch (spec.kind) {
    case EnsembleKind::sk:
      out.ising = gen_sk(spec.n, spec.beta, spec.field_mode, spec.seed, spec.field_mean, spec.field_sigma);
      out.graph = complete_graph(spec.n);
      break;
    case EnsembleKind::random_ising:
      out.ising = gen_random_ising(*spec.graph, spec.beta, spec.weight_dist, spec.field_mode, spec.seed,
                                   spec.field_mean, spec.field_sigma);
      out.graph = spec.graph;
      break;
    case EnsembleKind::random_mrf:
      out.psi = gen_random_mrf(*spec.graph, spec.beta, spec.t, spec.weight_dist, spec.seed);
      out.graph = spec.graph;
      return out;
    case EnsembleKind::pure_spin:
      out.psi = gen_pure_p_spin(spec.n, spec.beta, spec.t, spec.seed, spec.max_multi_indices);
      return out;
  }
  out.psi = ising_to_poly(*out.ising);
  return out;
}

}  // namespace spinlearn
