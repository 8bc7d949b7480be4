#pragma once

// Nodewise recovery pipelines built on the sparsitron learner: Ising parameters,
// MRF factorisation polynomials, dependency structure, and exact recovery of
// Rademacher ensembles by rounding stage by stage from the top degree down.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spinlearn/error.hpp"
#include "spinlearn/features.hpp"
#include "spinlearn/graph.hpp"
#include "spinlearn/model_gen.hpp"
#include "spinlearn/parallel.hpp"
#include "spinlearn/polynomial.hpp"
#include "spinlearn/sampler.hpp"
#include "spinlearn/sparsitron.hpp"

namespace spinlearn {

/// What the caller knows about the generating ensemble; drives the automatic bounds.
struct EnsembleInfo {
  EnsembleKind kind = EnsembleKind::sk;
  double beta = 1.0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t t = 2;
  WeightDist weight_dist = WeightDist::gaussian;
  FieldMode field_mode = FieldMode::zero;
  double field_mean = 0.0;
  double field_sigma = 1.0;
};

inline EnsembleInfo describe(const EnsembleSpec& spec) {
  EnsembleInfo info;
  info.kind = spec.kind;
  info.beta = spec.beta;
  info.n = spec.vertex_count();
  info.d = spec.max_degree();
  info.t = spec.t;
  info.weight_dist = spec.kind == EnsembleKind::sk || spec.kind == EnsembleKind::pure_spin ? WeightDist::gaussian
                                                                                          : spec.weight_dist;
  info.field_mode = spec.kind == EnsembleKind::random_mrf || spec.kind == EnsembleKind::pure_spin
                        ? FieldMode::zero
                        : spec.field_mode;
  info.field_mean = spec.field_mean;
  info.field_sigma = spec.field_sigma;
  return info;
}

enum class BudgetMode {
  strict,  // sample sizes derived from the inner risk target; too few samples is an error
  fit,     // use every available sample: holdout_fraction of each slice scores candidates
};

enum class AssemblyRule {
  min_index,  // psi(S) read from node min(S)
  average,    // psi(S) averaged over all nodes in S
};

struct RecoveryConfig {
  std::size_t t = 2;
  double eps = 0.1;
  double delta = 0.1;
  double lambda = 0.0;           // 0: automatic width bound from `ensemble`
  double lambda_constant = 2.0;  // multiplier in the automatic width bound
  double smoothness = 0.0;       // C; 0: c_C (beta^2 t + beta t sqrt(log n))
  double c_smooth = 4.0;
  double c_budget = 10.0;        // inner risk uses exp(-c_budget C)
  double eta = 0.0;              // identifiability threshold; 0: automatic from `ensemble`
  std::size_t median_samples = 0;  // K; 0: ceil(c_median ln(n^t / delta))
  double c_median = 8.0;
  BudgetMode budget = BudgetMode::strict;
  double holdout_fraction = 0.1;
  std::size_t max_candidates = 2000;
  double c_t = 10.0;
  double c_m = 10.0;
  std::optional<AssemblyRule> assembly;  // default: average for Ising, min_index otherwise
  std::optional<EnsembleInfo> ensemble;
  std::size_t jobs = 1;

  void validate() const {
    if (t < 1) throw ConfigError("recovery t must be at least 1");
    if (!(eps > 0.0)) throw ConfigError("recovery eps must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("recovery delta must be in (0, 1)");
    if (lambda < 0.0 || smoothness < 0.0 || eta < 0.0) throw ConfigError("recovery bounds must be nonnegative");
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) throw ConfigError("holdout fraction must be in (0, 1)");
  }
};

struct NodeDiagnostics {
  std::size_t node = 0;
  std::size_t stage = 0;  // degree being recovered (exact recovery), else t
  double holdout_risk = 0.0;
  std::size_t chosen_iteration = 0;
  std::size_t iterations = 0;
  std::size_t holdout = 0;
};

struct SliceLog {
  std::string purpose;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct RecoveryReport {
  std::string pipeline;
  Polynomial estimate;
  std::optional<IsingModel> ising_estimate;
  std::optional<Graph> graph_estimate;

  std::optional<double> linf_error;
  std::optional<double> l1_error;
  std::optional<double> field_linf_error;
  std::optional<double> structure_precision;
  std::optional<double> structure_recall;
  std::optional<bool> structure_exact;

  double lambda = 0.0;
  double smoothness = 0.0;
  double inner_eps = 0.0;
  double eta = 0.0;
  std::size_t median_samples = 0;
  std::size_t samples_used = 0;
  std::vector<NodeDiagnostics> nodes;
  std::vector<SliceLog> slices;
  std::vector<std::string> warnings;
  double wallclock_s = 0.0;
  RecoveryConfig config;
};

// ---------------------------------------------------------------- bounds

inline double auto_smoothness(const RecoveryConfig& cfg, std::size_t n) {
  if (cfg.smoothness > 0.0) return cfg.smoothness;
  if (!cfg.ensemble) {
    // fit mode never uses the inner risk target, so C is only reported
    if (cfg.budget == BudgetMode::fit) return 0.0;
    throw ConfigError("smoothness bound C is 0 (auto) but no ensemble metadata was given");
  }
  const double b = cfg.ensemble->beta;
  const double t = static_cast<double>(cfg.t);
  const double logn = std::log(std::max<double>(static_cast<double>(n), 2.0));
  return cfg.c_smooth * (b * b * t + b * t * std::sqrt(logn));
}

inline double field_bound(const EnsembleInfo& e) {
  const double logn = std::log(std::max<double>(2.0 * static_cast<double>(e.n), 2.0));
  switch (e.field_mode) {
    case FieldMode::zero:
      return 0.0;
    case FieldMode::rademacher:
      return 1.0;
    case FieldMode::gaussian:
      return std::abs(e.field_mean) + e.field_sigma * std::sqrt(2.0 * logn);
  }
  return 0.0;
}

/// Bound on ||2 d_i psi||_1 used as the sparsitron l1 radius.
inline double auto_lambda(const RecoveryConfig& cfg, std::size_t n) {
  if (cfg.lambda > 0.0) return cfg.lambda;
  if (!cfg.ensemble) throw ConfigError("lambda is 0 (auto) but no ensemble metadata was given");
  const auto& e = *cfg.ensemble;
  const double nn = static_cast<double>(std::max<std::size_t>(n, 2));
  const double logn = std::log(nn);
  const double t = static_cast<double>(e.t);
  const double grow = std::pow(static_cast<double>(e.d + 1), (t + 1.0) / 2.0);
  double interaction = 0.0;
  switch (e.kind) {
    case EnsembleKind::sk:
      interaction = e.beta * std::sqrt(nn * logn);
      break;
    case EnsembleKind::pure_spin:
      interaction = e.beta * std::sqrt(t * std::pow(nn, t + 1.0) * logn);
      break;
    case EnsembleKind::random_ising:
    case EnsembleKind::random_mrf:
      interaction = e.weight_dist == WeightDist::rademacher ? e.beta * grow : e.beta * grow * std::sqrt(t * logn);
      break;
  }
  const double bound = cfg.lambda_constant * (interaction + field_bound(e));
  // a zero model still needs a positive l1 radius
  return bound > 0.0 ? bound : 1.0;
}

inline double auto_eta(const RecoveryConfig& cfg, std::size_t n, std::vector<std::string>& warnings) {
  if (cfg.eta > 0.0) return cfg.eta;
  if (!cfg.ensemble) throw ConfigError("eta is 0 (auto) but no ensemble metadata was given");
  const auto& e = *cfg.ensemble;
  if (e.weight_dist == WeightDist::rademacher && (e.kind == EnsembleKind::random_ising || e.kind == EnsembleKind::random_mrf))
    return ensemble_scale(e.beta, e.d, e.t);
  warnings.push_back("automatic eta for Gaussian ensembles is beta/(2 n^(5t/2)); the implied sample cost may be infeasible");
  return e.beta / (2.0 * std::pow(static_cast<double>(n), 2.5 * static_cast<double>(cfg.t)));
}

inline std::size_t auto_median_samples(const RecoveryConfig& cfg, std::size_t n) {
  if (cfg.median_samples > 0) return cfg.median_samples;
  const double v = cfg.c_median * std::log(std::pow(static_cast<double>(std::max<std::size_t>(n, 2)), double(cfg.t)) / cfg.delta);
  return static_cast<std::size_t>(std::ceil(v));
}

/// Nearest multiple of step; exact midpoints go toward zero.
inline double round_to_grid(double v, double step) {
  if (!(step > 0.0)) throw ConfigError("grid step must be positive");
  const double k = std::abs(v) / step;
  double whole = std::floor(k);
  if (k - whole > 0.5) whole += 1.0;
  return std::copysign(whole * step, v) + 0.0;
}

// ---------------------------------------------------------------- nodewise learning

struct NodeFit {
  Polynomial poly;  // learned p_i on the full variable set
  SparsitronResult result;
};

namespace detail {

inline SparsitronConfig node_config(const RecoveryConfig& cfg, double lambda, double inner_eps) {
  SparsitronConfig s;
  s.lambda = lambda;
  s.eps = std::min(1.0, inner_eps);
  s.delta = std::min(0.5, cfg.delta / 2.0);
  s.c_t = cfg.c_t;
  s.c_m = cfg.c_m;
  s.max_candidates = cfg.max_candidates;
  return s;
}

/// Splits [begin, end) into training prefix and holdout suffix.
inline SparsitronBudget split_slice(const RecoveryConfig& cfg, const SparsitronConfig& scfg, std::size_t dim,
                                    std::size_t len) {
  if (cfg.budget == BudgetMode::fit) {
    SparsitronBudget b;
    b.holdout = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(cfg.holdout_fraction * double(len))));
    if (len <= b.holdout) throw BudgetError("too few samples to split into training and holdout");
    b.iterations = len - b.holdout;
    return b;
  }
  const SparsitronBudget b = sparsitron_budget(scfg, dim);
  if (b.iterations + b.holdout > len)
    throw BudgetError("inner risk target needs " + std::to_string(b.iterations + b.holdout) +
                      " samples per node but only " + std::to_string(len) + " are available");
  return b;
}

inline Polynomial weights_to_poly(const FeatureMap& fm, std::span<const double> w, std::size_t t_max) {
  Polynomial p(fm.n(), t_max);
  for (std::size_t j = 0; j < fm.size(); ++j) p.add(fm.monomial(j), w[j]);
  return p;
}

}  // namespace detail

/// Learns p_i ~ 2 d_i(psi - g) for every node on rows [begin, end), with feature degree
/// `degree` and optional known offsets offsets[i] = 2 d_i g.
inline std::vector<NodeFit> fit_nodes(const PackedSamples& samples, std::size_t begin, std::size_t end,
                                      std::size_t degree, const RecoveryConfig& cfg, double lambda,
                                      double inner_eps, const std::vector<Polynomial>* offsets = nullptr) {
  const std::size_t n = samples.n;
  std::vector<NodeFit> fits(n);
  const SparsitronConfig scfg = detail::node_config(cfg, lambda, inner_eps);
  parallel_for(n, cfg.jobs, [&](std::size_t i) {
    const FeatureMap fm(n, degree, static_cast<std::uint32_t>(i));
    const SparsitronBudget b = detail::split_slice(cfg, scfg, fm.size(), end - begin);
    SparsitronConfig local = scfg;
    local.iterations = b.iterations;
    local.holdout = b.holdout;
    std::optional<BitPolynomial> g;
    if (offsets) g.emplace((*offsets)[i]);
    const BitPolynomial* gp = g ? &*g : nullptr;
    const NodeExamples train(samples, begin, begin + b.iterations, fm, static_cast<std::uint32_t>(i), gp);
    const NodeExamples hold(samples, begin + b.iterations, begin + b.iterations + b.holdout, fm,
                            static_cast<std::uint32_t>(i), gp);
    fits[i].result = sparsitron(train, hold, local);
    fits[i].poly = detail::weights_to_poly(fm, fits[i].result.weights, degree);
  });
  return fits;
}

/// Builds psi-tilde from node polynomials: psi(S) = p_i(S \ {i}) / 2 for i = min(S), or the
/// mean over i in S. Only monomials with 1 <= |S| <= max_size are produced.
inline Polynomial assemble(const std::vector<Polynomial>& node_polys, std::size_t n, std::size_t t_max,
                           AssemblyRule rule, std::size_t min_size = 1, std::size_t max_size = SIZE_MAX) {
  std::map<Monomial, std::pair<double, std::size_t>> acc;
  for (std::uint32_t i = 0; i < node_polys.size(); ++i) {
    for (const auto& [f, c] : node_polys[i].terms()) {
      if (f.contains(i)) continue;
      const Monomial s = f.with(i);
      if (s.size() < min_size || s.size() > std::min(max_size, t_max)) continue;
      if (rule == AssemblyRule::min_index && s.indices().front() != i) continue;
      auto& slot = acc[s];
      slot.first += c / 2.0;
      slot.second += 1;
    }
  }
  Polynomial out(n, t_max);
  for (const auto& [s, v] : acc) {
    if (rule == AssemblyRule::average)
      out.set(s, v.first / static_cast<double>(s.size()));
    else
      out.set(s, v.first);
  }
  return out;
}

namespace detail {

inline void audit(RecoveryReport& r, const std::vector<NodeFit>& fits, std::size_t stage) {
  for (std::size_t i = 0; i < fits.size(); ++i) {
    NodeDiagnostics d;
    d.node = i;
    d.stage = stage;
    d.holdout_risk = fits[i].result.holdout_risk;
    d.chosen_iteration = fits[i].result.chosen_iteration;
    d.iterations = fits[i].result.iterations;
    d.holdout = fits[i].result.holdout;
    r.nodes.push_back(d);
  }
}

inline void check_samples(const SampleBatch& samples, RecoveryReport& r) {
  if (samples.size() == 0) throw BudgetError("no samples");
  if (!samples.meta().iid) r.warnings.push_back("non-iid samples: guarantees void");
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// MRF parameter recovery: p_i over monomials of degree <= t-1, then assembly.
inline RecoveryReport recover_mrf(const SampleBatch& samples, const RecoveryConfig& cfg) {
  cfg.validate();
  if (cfg.t < 2) throw ConfigError("recover_mrf needs t >= 2");
  detail::Stopwatch clock;
  RecoveryReport r;
  r.pipeline = "mrf";
  r.config = cfg;
  detail::check_samples(samples, r);
  const std::size_t n = samples.n();
  const PackedSamples packed(samples);
  r.lambda = auto_lambda(cfg, n);
  r.smoothness = auto_smoothness(cfg, n);
  r.inner_eps = std::exp(-cfg.c_budget * r.smoothness) * cfg.eps * cfg.eps;
  const auto fits = fit_nodes(packed, 0, samples.size(), cfg.t - 1, cfg, r.lambda, r.inner_eps);
  r.slices.push_back({"nodewise sparsitron", 0, samples.size()});
  r.samples_used = samples.size();
  detail::audit(r, fits, cfg.t);
  std::vector<Polynomial> polys;
  for (const auto& f : fits) polys.push_back(f.poly);
  r.estimate = assemble(polys, n, cfg.t, cfg.assembly.value_or(AssemblyRule::min_index));
  r.wallclock_s = clock.seconds();
  return r;
}

/// Ising recovery: A_ij from the x_j weight of node i halved, h_i from the constant weight
/// halved, and A symmetrised by averaging the two node estimates.
inline RecoveryReport recover_ising(const SampleBatch& samples, const RecoveryConfig& cfg) {
  RecoveryConfig c = cfg;
  c.t = 2;
  if (!c.assembly) c.assembly = AssemblyRule::average;
  RecoveryReport r = recover_mrf(samples, c);
  r.pipeline = "ising";
  r.ising_estimate = poly_to_ising(r.estimate);
  return r;
}

/// Edges from median tests on learned node polynomials: for every node i and every
/// monomial S (1 <= |S| <= t-1, i not in S) add the clique S+{i} when the median over
/// `tests` of |d_S p_i(X)|/2 exceeds eta/2.
inline Graph structure_from_nodes(const std::vector<Polynomial>& node_polys, const SampleBatch& tests,
                                  std::size_t t, double eta) {
  if (!(eta > 0.0)) throw ConfigError("structure learning needs eta > 0");
  if (tests.size() == 0) throw BudgetError("structure learning needs at least one median-test sample");
  const std::size_t n = tests.n();
  Graph g(n);
  const PackedSamples packed(tests);
  std::vector<double> values(tests.size());
  for (std::uint32_t i = 0; i < node_polys.size(); ++i) {
    std::set<Monomial> candidates;
    for (const auto& [s, c] : node_polys[i].terms())
      for (std::size_t k = 1; k <= s.size() && k + 1 <= t; ++k) {
        // every nonempty subset of s with |S| <= t-1 can have a nonzero derivative
        std::vector<std::uint32_t> idx(s.indices().begin(), s.indices().end());
        std::vector<bool> pick(idx.size(), false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
        do {
          std::vector<std::uint32_t> sub;
          for (std::size_t a = 0; a < idx.size(); ++a)
            if (pick[a]) sub.push_back(idx[a]);
          candidates.insert(Monomial(sub));
        } while (std::prev_permutation(pick.begin(), pick.end()));
      }
    for (const auto& s : candidates) {
      if (s.contains(i)) continue;
      const BitPolynomial ds(partial_derivative(node_polys[i], s));
      for (std::size_t k = 0; k < packed.size(); ++k) values[k] = std::abs(ds(packed.rows[k])) / 2.0;
      std::vector<double> tmp = values;
      const std::size_t mid = tmp.size() / 2;
      std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid), tmp.end());
      double median = tmp[mid];
      if (tmp.size() % 2 == 0) {
        const double lower = *std::max_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid));
        median = 0.5 * (median + lower);
      }
      if (median > eta / 2.0) g.add_clique(s.with(i));
    }
  }
  return g;
}

inline RecoveryReport learn_structure(const SampleBatch& samples, const RecoveryConfig& cfg) {
  cfg.validate();
  if (cfg.t < 2) throw ConfigError("structure learning needs t >= 2");
  detail::Stopwatch clock;
  RecoveryReport r;
  r.pipeline = "structure";
  r.config = cfg;
  detail::check_samples(samples, r);
  const std::size_t n = samples.n();
  r.eta = auto_eta(cfg, n, r.warnings);
  if (!(r.eta > 0.0)) throw ConfigError("eta must be positive");
  r.lambda = auto_lambda(cfg, n);
  r.smoothness = auto_smoothness(cfg, n);
  r.inner_eps = r.eta * r.eta / (std::pow(2.0, double(cfg.t) + 4.0) * std::exp(cfg.c_budget * r.smoothness + 6.0));
  r.median_samples = auto_median_samples(cfg, n);
  if (samples.size() <= r.median_samples)
    throw BudgetError("structure learning needs more than K = " + std::to_string(r.median_samples) + " samples");
  const std::size_t train_end = samples.size() - r.median_samples;
  const PackedSamples packed(samples);
  const auto fits = fit_nodes(packed, 0, train_end, cfg.t - 1, cfg, r.lambda, r.inner_eps);
  r.slices.push_back({"nodewise sparsitron", 0, train_end});
  r.slices.push_back({"median tests", train_end, samples.size()});
  r.samples_used = samples.size();
  detail::audit(r, fits, cfg.t);
  std::vector<Polynomial> polys;
  for (const auto& f : fits) polys.push_back(f.poly);
  r.graph_estimate = structure_from_nodes(polys, samples.slice(train_end, samples.size()), cfg.t, r.eta);
  r.estimate = assemble(polys, n, cfg.t, cfg.assembly.value_or(AssemblyRule::min_index));
  r.wallclock_s = clock.seconds();
  return r;
}

/// Exact recovery of a Rademacher ensemble whose coefficients are multiples of
/// beta/(d+1)^((t-1)/2). Stage j = t..1 uses its own slice of samples, learns the degree-j
/// part with the already recovered higher-degree terms as a known offset, and rounds.
inline RecoveryReport exact_recover(const SampleBatch& samples, double beta, std::size_t d, std::size_t t,
                                    const RecoveryConfig& cfg) {
  cfg.validate();
  if (t < 1) throw ConfigError("exact recovery needs t >= 1");
  if (!(beta > 0.0)) throw ConfigError("exact recovery needs beta > 0");
  if (cfg.ensemble && cfg.ensemble->weight_dist != WeightDist::rademacher)
    throw ConfigError("exact recovery requires a Rademacher ensemble");
  detail::Stopwatch clock;
  RecoveryReport r;
  r.pipeline = "exact";
  r.config = cfg;
  r.config.t = t;
  detail::check_samples(samples, r);
  const std::size_t n = samples.n();
  RecoveryConfig c = cfg;
  c.t = t;
  r.lambda = auto_lambda(c, n);
  r.smoothness = auto_smoothness(c, n);
  r.inner_eps = std::exp(-cfg.c_budget * r.smoothness - 6.0) * beta * beta /
                (16.0 * std::pow(2.0 * static_cast<double>(d), static_cast<double>(t)));
  const double step = ensemble_scale(beta, d, t);
  // Rademacher Ising fields are unscaled +-1, so singletons live on the unit grid.
  const bool unit_field = cfg.ensemble && cfg.ensemble->kind == EnsembleKind::random_ising &&
                          cfg.ensemble->field_mode == FieldMode::rademacher;
  const std::size_t per_stage = samples.size() / t;
  if (per_stage == 0) throw BudgetError("fewer samples than recovery stages");
  const PackedSamples packed(samples);
  const AssemblyRule rule = cfg.assembly.value_or(AssemblyRule::min_index);

  Polynomial recovered(n, t);
  for (std::size_t j = t; j >= 1; --j) {
    const std::size_t stage = t - j;
    const std::size_t begin = stage * per_stage;
    const std::size_t end = begin + per_stage;
    std::vector<Polynomial> offsets;
    offsets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) offsets.push_back(scaled(partial_derivative(recovered, i), 2.0));
    const auto fits = fit_nodes(packed, begin, end, j - 1, c, r.lambda, r.inner_eps, &offsets);
    r.slices.push_back({"stage degree " + std::to_string(j), begin, end});
    detail::audit(r, fits, j);
    std::vector<Polynomial> polys;
    for (const auto& f : fits) polys.push_back(f.poly);
    const Polynomial level = assemble(polys, n, t, rule, j, j);
    const double grid = j == 1 && unit_field ? 1.0 : step;
    for (const auto& [s, v] : level.terms()) recovered.set(s, round_to_grid(v, grid));
  }
  r.samples_used = per_stage * t;
  r.estimate = recovered;
  r.wallclock_s = clock.seconds();
  return r;
}

/// Fills error fields of a report against a known model.
inline void score_report(RecoveryReport& r, const Polynomial& truth, const std::optional<Graph>& truth_graph = std::nullopt) {
  const Polynomial est = with_t_max(r.estimate, std::max(r.estimate.t_max(), truth.t_max()));
  const Polynomial ref = with_t_max(truth, est.t_max());
  r.l1_error = l1_distance(ref, est);
  if (r.ising_estimate) {
    const IsingModel t = poly_to_ising(truth);
    double a = 0.0;
    double h = 0.0;
    for (std::size_t i = 0; i < t.n(); ++i) {
      h = std::max(h, std::abs(t.h(i) - r.ising_estimate->h(i)));
      for (std::size_t j = 0; j < t.n(); ++j) a = std::max(a, std::abs(t.a(i, j) - r.ising_estimate->a(i, j)));
    }
    r.linf_error = a;
    r.field_linf_error = h;
  } else {
    r.linf_error = linf_distance(ref, est);
  }
  if (r.graph_estimate) {
    const Graph g = truth_graph ? *truth_graph : dependency_graph(truth);
    const auto s = score_structure(g, *r.graph_estimate);
    r.structure_precision = s.precision;
    r.structure_recall = s.recall;
    r.structure_exact = s.exact;
  }
}

}  // namespace spinlearn
