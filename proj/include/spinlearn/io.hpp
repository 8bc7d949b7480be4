#pragma once

// JSON and CSV serialisation. Models, samples and reports are written
// deterministically; every emitted file carries the library version and a config hash.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spinlearn/diagnostics.hpp"
#include "spinlearn/error.hpp"
#include "spinlearn/graph.hpp"
#include "spinlearn/model_gen.hpp"
#include "spinlearn/polynomial.hpp"
#include "spinlearn/recovery.hpp"
#include "spinlearn/rng.hpp"
#include "spinlearn/sampler.hpp"

namespace spinlearn {

using json = nlohmann::json;

inline constexpr std::string_view kVersion = "spinlearn 0.1.0";

// ---------------------------------------------------------------- text helpers

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  if (s == "NA" || s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

/// Hash of the canonical (key-sorted, compact) dump of a JSON value.
inline std::string config_hash(const json& j) { return hex64(rng::hash_string(j.dump())); }

inline json meta_block(const std::string& cfg_hash) { return json{{"version", kVersion}, {"config_hash", cfg_hash}}; }

inline std::string csv_preamble(const std::string& cfg_hash) {
  return "# " + std::string(kVersion) + " config_hash=" + cfg_hash + "\n";
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << content;
  if (!f) throw ConfigError("write failed for " + path);
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + what + ": " + e.what());
  }
}

inline json read_json(const std::string& path) { return parse_json(read_file(path), path); }

namespace detail {

template <class T>
T get_field(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ConfigError(ctx + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(ctx + ": field '" + key + "' has the wrong type");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& ctx) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return get_field<T>(j, key, ctx);
}

inline void reject_unknown(const json& j, std::initializer_list<std::string_view> keys, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    bool known = k == "meta";
    for (auto allowed : keys) known = known || k == allowed;
    if (!known) throw ConfigError(ctx + ": unknown field '" + k + "'");
  }
}

}  // namespace detail

// ---------------------------------------------------------------- models

inline json to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [s, c] : p.terms())
    terms.push_back(json{{"indices", std::vector<std::uint32_t>(s.indices().begin(), s.indices().end())}, {"coef", c}});
  return json{{"n", p.n()}, {"t_max", p.t_max()}, {"terms", terms}};
}

inline json to_json(const IsingModel& m) {
  return json{{"n", m.n()}, {"A", m.a_data()}, {"h", m.h_data()}};
}

inline IsingModel ising_from_json(const json& j) {
  const std::string ctx = "Ising model";
  detail::reject_unknown(j, {"n", "A", "h"}, ctx);
  const auto n = detail::get_field<std::size_t>(j, "n", ctx);
  const auto a = detail::get_field<std::vector<double>>(j, "A", ctx);
  const auto h = detail::get_field<std::vector<double>>(j, "h", ctx);
  return IsingModel(n, a, h);
}

inline Polynomial polynomial_from_json(const json& j) {
  const std::string ctx = "polynomial model";
  detail::reject_unknown(j, {"n", "t_max", "terms"}, ctx);
  const auto n = detail::get_field<std::size_t>(j, "n", ctx);
  const auto t_max = detail::get_field<std::size_t>(j, "t_max", ctx);
  if (!j.at("terms").is_array()) throw ConfigError(ctx + ": terms must be an array");
  Polynomial p(n, t_max);
  for (const auto& term : j.at("terms")) {
    detail::reject_unknown(term, {"indices", "coef"}, ctx + " term");
    const auto idx = detail::get_field<std::vector<std::uint32_t>>(term, "indices", ctx);
    const auto c = detail::get_field<double>(term, "coef", ctx);
    p.add(Monomial::from_unsorted(idx), c);
  }
  return p;
}

/// Either model format; Ising JSON is converted to its polynomial.
inline Polynomial model_from_json(const json& j) {
  if (j.is_object() && j.contains("A")) return ising_to_poly(ising_from_json(j));
  return polynomial_from_json(j);
}

inline std::string model_hash(const Polynomial& p) { return config_hash(to_json(p)); }

inline json with_meta(json j, const std::string& cfg_hash) {
  j["meta"] = meta_block(cfg_hash);
  return j;
}

// ---------------------------------------------------------------- enums

inline std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::sk: return "sk";
    case EnsembleKind::random_ising: return "random_ising";
    case EnsembleKind::random_mrf: return "random_mrf";
    case EnsembleKind::pure_spin: return "pure_spin";
  }
  return "?";
}
inline std::string to_string(WeightDist w) { return w == WeightDist::gaussian ? "gaussian" : "rademacher"; }
inline std::string to_string(FieldMode f) {
  switch (f) {
    case FieldMode::zero: return "zero";
    case FieldMode::gaussian: return "gaussian";
    case FieldMode::rademacher: return "rademacher";
  }
  return "?";
}
inline std::string to_string(BudgetMode b) { return b == BudgetMode::strict ? "strict" : "fit"; }
inline std::string to_string(AssemblyRule a) { return a == AssemblyRule::min_index ? "min_index" : "average"; }

inline EnsembleKind parse_ensemble_kind(const std::string& s) {
  if (s == "sk") return EnsembleKind::sk;
  if (s == "random_ising") return EnsembleKind::random_ising;
  if (s == "random_mrf") return EnsembleKind::random_mrf;
  if (s == "pure_spin") return EnsembleKind::pure_spin;
  throw ConfigError("unknown ensemble kind '" + s + "'");
}
inline WeightDist parse_weight_dist(const std::string& s) {
  if (s == "gaussian") return WeightDist::gaussian;
  if (s == "rademacher") return WeightDist::rademacher;
  throw ConfigError("unknown weight distribution '" + s + "'");
}
inline FieldMode parse_field_mode(const std::string& s) {
  if (s == "zero") return FieldMode::zero;
  if (s == "gaussian") return FieldMode::gaussian;
  if (s == "rademacher") return FieldMode::rademacher;
  throw ConfigError("unknown field mode '" + s + "'");
}
inline BudgetMode parse_budget_mode(const std::string& s) {
  if (s == "strict") return BudgetMode::strict;
  if (s == "fit") return BudgetMode::fit;
  throw ConfigError("unknown budget mode '" + s + "'");
}
inline AssemblyRule parse_assembly(const std::string& s) {
  if (s == "min_index") return AssemblyRule::min_index;
  if (s == "average") return AssemblyRule::average;
  throw ConfigError("unknown assembly rule '" + s + "'");
}

// ---------------------------------------------------------------- configs

inline json to_json(const EnsembleSpec& s) {
  json j{{"kind", to_string(s.kind)},         {"beta", s.beta},
         {"t", s.t},                          {"weights", to_string(s.weight_dist)},
         {"field", to_string(s.field_mode)},  {"field_mean", s.field_mean},
         {"field_sigma", s.field_sigma},      {"seed", s.seed},
         {"max_multi_indices", s.max_multi_indices}};
  if (s.n) j["n"] = s.n;
  if (!s.graph_spec.empty()) {
    j["graph"] = s.graph_spec;
  } else if (s.graph) {
    json edges = json::array();
    for (const auto& [u, v] : s.graph->edges()) edges.push_back({u, v});
    j["graph"] = json{{"n", s.graph->n()}, {"edges", edges}};
  }
  return j;
}

inline Graph graph_from_json(const json& j) {
  if (j.is_string()) return named_graph(j.get<std::string>());
  const std::string ctx = "graph";
  detail::reject_unknown(j, {"n", "edges"}, ctx);
  Graph g(detail::get_field<std::size_t>(j, "n", ctx));
  for (const auto& e : detail::get_field<std::vector<std::vector<std::uint32_t>>>(j, "edges", ctx)) {
    if (e.size() != 2) throw ConfigError("graph edges must be pairs");
    g.add_edge(e[0], e[1]);
  }
  return g;
}

inline EnsembleSpec ensemble_from_json(const json& j) {
  const std::string ctx = "ensemble spec";
  detail::reject_unknown(
      j, {"kind", "n", "beta", "t", "weights", "field", "field_mean", "field_sigma", "graph", "seed", "max_multi_indices"},
      ctx);
  EnsembleSpec s;
  s.kind = parse_ensemble_kind(detail::get_field<std::string>(j, "kind", ctx));
  s.n = detail::get_or<std::size_t>(j, "n", 0, ctx);
  s.beta = detail::get_or<double>(j, "beta", s.beta, ctx);
  s.t = detail::get_or<std::size_t>(j, "t", s.t, ctx);
  s.weight_dist = parse_weight_dist(detail::get_or<std::string>(j, "weights", "gaussian", ctx));
  s.field_mode = parse_field_mode(detail::get_or<std::string>(j, "field", "zero", ctx));
  s.field_mean = detail::get_or<double>(j, "field_mean", s.field_mean, ctx);
  s.field_sigma = detail::get_or<double>(j, "field_sigma", s.field_sigma, ctx);
  s.seed = detail::get_or<std::uint64_t>(j, "seed", 0, ctx);
  s.max_multi_indices = detail::get_or<std::uint64_t>(j, "max_multi_indices", s.max_multi_indices, ctx);
  if (j.contains("graph") && !j.at("graph").is_null()) {
    s.graph = graph_from_json(j.at("graph"));
    if (j.at("graph").is_string()) s.graph_spec = j.at("graph").get<std::string>();
  }
  s.validate();
  return s;
}

inline json to_json(const EnsembleInfo& e) {
  return json{{"kind", to_string(e.kind)},        {"beta", e.beta},
              {"n", e.n},                         {"d", e.d},
              {"t", e.t},                         {"weights", to_string(e.weight_dist)},
              {"field", to_string(e.field_mode)}, {"field_mean", e.field_mean},
              {"field_sigma", e.field_sigma}};
}

inline EnsembleInfo ensemble_info_from_json(const json& j) {
  const std::string ctx = "ensemble info";
  detail::reject_unknown(j, {"kind", "beta", "n", "d", "t", "weights", "field", "field_mean", "field_sigma"}, ctx);
  EnsembleInfo e;
  e.kind = parse_ensemble_kind(detail::get_field<std::string>(j, "kind", ctx));
  e.beta = detail::get_field<double>(j, "beta", ctx);
  e.n = detail::get_or<std::size_t>(j, "n", 0, ctx);
  e.d = detail::get_or<std::size_t>(j, "d", 0, ctx);
  e.t = detail::get_or<std::size_t>(j, "t", 2, ctx);
  e.weight_dist = parse_weight_dist(detail::get_or<std::string>(j, "weights", "gaussian", ctx));
  e.field_mode = parse_field_mode(detail::get_or<std::string>(j, "field", "zero", ctx));
  e.field_mean = detail::get_or<double>(j, "field_mean", 0.0, ctx);
  e.field_sigma = detail::get_or<double>(j, "field_sigma", 1.0, ctx);
  return e;
}

inline json to_json(const RecoveryConfig& c) {
  json j{{"t", c.t},
         {"eps", c.eps},
         {"delta", c.delta},
         {"lambda", c.lambda},
         {"lambda_constant", c.lambda_constant},
         {"C", c.smoothness},
         {"c_C", c.c_smooth},
         {"c_E", c.c_budget},
         {"eta", c.eta},
         {"K", c.median_samples},
         {"c_K", c.c_median},
         {"budget", to_string(c.budget)},
         {"holdout_fraction", c.holdout_fraction},
         {"max_candidates", c.max_candidates},
         {"c_T", c.c_t},
         {"c_M", c.c_m},
         {"jobs", c.jobs}};
  j["assembly"] = c.assembly ? json(to_string(*c.assembly)) : json(nullptr);
  j["ensemble"] = c.ensemble ? to_json(*c.ensemble) : json(nullptr);
  return j;
}

inline RecoveryConfig recovery_config_from_json(const json& j) {
  const std::string ctx = "recovery config";
  detail::reject_unknown(j,
                         {"t", "eps", "delta", "lambda", "lambda_constant", "C", "c_C", "c_E", "eta", "K", "c_K",
                          "budget", "holdout_fraction", "max_candidates", "c_T", "c_M", "jobs", "assembly", "ensemble"},
                         ctx);
  RecoveryConfig c;
  c.t = detail::get_or<std::size_t>(j, "t", c.t, ctx);
  c.eps = detail::get_or<double>(j, "eps", c.eps, ctx);
  c.delta = detail::get_or<double>(j, "delta", c.delta, ctx);
  c.lambda = detail::get_or<double>(j, "lambda", c.lambda, ctx);
  c.lambda_constant = detail::get_or<double>(j, "lambda_constant", c.lambda_constant, ctx);
  c.smoothness = detail::get_or<double>(j, "C", c.smoothness, ctx);
  c.c_smooth = detail::get_or<double>(j, "c_C", c.c_smooth, ctx);
  c.c_budget = detail::get_or<double>(j, "c_E", c.c_budget, ctx);
  c.eta = detail::get_or<double>(j, "eta", c.eta, ctx);
  c.median_samples = detail::get_or<std::size_t>(j, "K", c.median_samples, ctx);
  c.c_median = detail::get_or<double>(j, "c_K", c.c_median, ctx);
  c.budget = parse_budget_mode(detail::get_or<std::string>(j, "budget", "strict", ctx));
  c.holdout_fraction = detail::get_or<double>(j, "holdout_fraction", c.holdout_fraction, ctx);
  c.max_candidates = detail::get_or<std::size_t>(j, "max_candidates", c.max_candidates, ctx);
  c.c_t = detail::get_or<double>(j, "c_T", c.c_t, ctx);
  c.c_m = detail::get_or<double>(j, "c_M", c.c_m, ctx);
  c.jobs = detail::get_or<std::size_t>(j, "jobs", c.jobs, ctx);
  if (j.contains("assembly") && !j.at("assembly").is_null())
    c.assembly = parse_assembly(detail::get_field<std::string>(j, "assembly", ctx));
  if (j.contains("ensemble") && !j.at("ensemble").is_null()) c.ensemble = ensemble_info_from_json(j.at("ensemble"));
  c.validate();
  return c;
}

// ---------------------------------------------------------------- samples

inline json to_json(const SampleMeta& m, std::size_t n, std::size_t count) {
  return json{{"n", n},
              {"count", count},
              {"sampler", m.sampler},
              {"seed", m.seed},
              {"model_hash", m.model_hash},
              {"iid", m.iid},
              {"burn_in", m.burn_in},
              {"thinning", m.thinning}};
}

inline SampleMeta sample_meta_from_json(const json& j) {
  const std::string ctx = "sample meta";
  detail::reject_unknown(j, {"n", "count", "sampler", "seed", "model_hash", "iid", "burn_in", "thinning"}, ctx);
  SampleMeta m;
  m.sampler = detail::get_or<std::string>(j, "sampler", m.sampler, ctx);
  m.seed = detail::get_or<std::uint64_t>(j, "seed", 0, ctx);
  m.model_hash = detail::get_or<std::string>(j, "model_hash", "", ctx);
  m.iid = detail::get_or<bool>(j, "iid", m.sampler != "glauber", ctx);
  m.burn_in = detail::get_or<std::size_t>(j, "burn_in", 0, ctx);
  m.thinning = detail::get_or<std::size_t>(j, "thinning", 0, ctx);
  return m;
}

/// One row per configuration, comma separated +1/-1, after a '#' provenance line.
inline std::string samples_to_csv(const SampleBatch& batch, const std::string& cfg_hash) {
  std::string out = csv_preamble(cfg_hash);
  out.reserve(out.size() + batch.size() * batch.n() * 3);
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const auto row = batch.row(k);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i] > 0 ? "1" : "-1";
    }
    out += '\n';
  }
  return out;
}

inline SampleBatch samples_from_csv(const std::string& text, SampleMeta meta = {}) {
  std::vector<Spin> data;
  std::size_t n = 0;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t count = 0;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell == "1" || cell == "+1")
        data.push_back(1);
      else if (cell == "-1")
        data.push_back(-1);
      else
        throw ConfigError("sample CSV line " + std::to_string(line_no) + ": entry '" + cell + "' is not +1 or -1");
      ++count;
    }
    if (n == 0) n = count;
    if (count != n) throw DimensionError("sample CSV line " + std::to_string(line_no) + " has " + std::to_string(count) +
                                         " entries, expected " + std::to_string(n));
  }
  if (n == 0) throw ConfigError("sample CSV has no rows");
  return SampleBatch(n, std::move(data), std::move(meta));
}

// ---------------------------------------------------------------- reports

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return json{{"n", g.n()}, {"edges", edges}};
}

inline json to_json(const RecoveryReport& r, bool include_timing = false) {
  json nodes = json::array();
  for (const auto& d : r.nodes)
    nodes.push_back(json{{"node", d.node},
                         {"stage", d.stage},
                         {"holdout_risk", d.holdout_risk},
                         {"chosen_iteration", d.chosen_iteration},
                         {"iterations", d.iterations},
                         {"holdout", d.holdout}});
  json slices = json::array();
  for (const auto& s : r.slices) slices.push_back(json{{"purpose", s.purpose}, {"begin", s.begin}, {"end", s.end}});
  json j{{"pipeline", r.pipeline},
         {"estimate", to_json(r.estimate)},
         {"linf_error", optional_number(r.linf_error)},
         {"l1_error", optional_number(r.l1_error)},
         {"field_linf_error", optional_number(r.field_linf_error)},
         {"structure_precision", optional_number(r.structure_precision)},
         {"structure_recall", optional_number(r.structure_recall)},
         {"structure_exact", r.structure_exact ? json(*r.structure_exact) : json(nullptr)},
         {"audit",
          json{{"lambda", r.lambda},
               {"C", r.smoothness},
               {"inner_eps", r.inner_eps},
               {"eta", r.eta},
               {"K", r.median_samples},
               {"samples_used", r.samples_used}}},
         {"nodes", nodes},
         {"slices", slices},
         {"warnings", r.warnings},
         {"config", to_json(r.config)}};
  j["ising_estimate"] = r.ising_estimate ? to_json(*r.ising_estimate) : json(nullptr);
  j["graph_estimate"] = r.graph_estimate ? to_json(*r.graph_estimate) : json(nullptr);
  j["wallclock_s"] = include_timing ? json(r.wallclock_s) : json(nullptr);
  return j;
}

inline json to_json(const SmoothnessReport& r) {
  return json{{"C", r.C},
              {"fraction", r.fraction},
              {"std_error", r.std_error},
              {"method", r.method},
              {"samples", r.samples},
              {"worst_flip", r.worst_flip},
              {"max_derivative_on_E", r.max_derivative_on_E}};
}

inline json to_json(const MgfReport& r) {
  return json{{"S", std::vector<std::uint32_t>(r.S.indices().begin(), r.S.indices().end())},
              {"B", r.B},
              {"log_estimate", r.log_estimate},
              {"estimate", r.overflow ? json(nullptr) : json(r.estimate)},
              {"std_error", r.std_error},
              {"samples", r.samples},
              {"overflow", r.overflow}};
}

}  // namespace spinlearn
