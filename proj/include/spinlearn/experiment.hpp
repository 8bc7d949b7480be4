#pragma once

// Seeded end-to-end runs: generate -> sample -> learn -> evaluate, with a summary CSV
// per plan and a long-format curve export.

#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinlearn/diagnostics.hpp"
#include "spinlearn/io.hpp"
#include "spinlearn/parallel.hpp"
#include "spinlearn/recovery.hpp"

namespace spinlearn {

enum class Pipeline { ising, mrf, structure, exact };

inline std::string to_string(Pipeline p) {
  switch (p) {
    case Pipeline::ising: return "ising";
    case Pipeline::mrf: return "mrf";
    case Pipeline::structure: return "structure";
    case Pipeline::exact: return "exact";
  }
  return "?";
}

inline Pipeline parse_pipeline(const std::string& s) {
  if (s == "ising") return Pipeline::ising;
  if (s == "mrf") return Pipeline::mrf;
  if (s == "structure") return Pipeline::structure;
  if (s == "exact") return Pipeline::exact;
  throw ConfigError("unknown pipeline '" + s + "'");
}

struct SamplerSpec {
  std::string kind = "exact";  // exact | glauber
  std::size_t burn_in = 0;
  std::size_t thinning = 1;
  std::size_t cap = kDefaultEnumerationCap;
};

struct ExperimentPlan {
  EnsembleSpec ensemble;
  SamplerSpec sampler;
  std::vector<std::size_t> sample_sizes;  // one entry, or a sweep
  std::vector<double> betas;              // empty: use ensemble.beta
  Pipeline pipeline = Pipeline::ising;
  RecoveryConfig recovery;
  std::vector<std::uint64_t> seeds;
  std::string output;
  bool record_timing = false;
  std::size_t jobs = 1;

  void validate() const {
    if (seeds.empty()) throw ConfigError("plan needs at least one seed");
    if (sample_sizes.empty()) throw ConfigError("plan needs a sample size N");
    for (auto n : sample_sizes)
      if (n == 0) throw ConfigError("sample size must be positive");
    if (sampler.kind != "exact" && sampler.kind != "glauber") throw ConfigError("sampler must be exact or glauber");
    if (sampler.kind == "exact") check_cap(ensemble.vertex_count(), sampler.cap);
    ensemble.validate();
    recovery.validate();
  }
};

inline json to_json(const ExperimentPlan& p) {
  json j{{"ensemble", to_json(p.ensemble)},
         {"sampler",
          json{{"kind", p.sampler.kind},
               {"burn_in", p.sampler.burn_in},
               {"thinning", p.sampler.thinning},
               {"cap", p.sampler.cap}}},
         {"N", p.sample_sizes},
         {"pipeline", to_string(p.pipeline)},
         {"recovery", to_json(p.recovery)},
         {"seeds", p.seeds},
         {"output", p.output},
         {"record_timing", p.record_timing},
         {"jobs", p.jobs}};
  if (!p.betas.empty()) j["betas"] = p.betas;
  return j;
}

inline ExperimentPlan plan_from_json(const json& j) {
  const std::string ctx = "experiment plan";
  detail::reject_unknown(j, {"ensemble", "sampler", "N", "betas", "pipeline", "recovery", "seeds", "output",
                             "record_timing", "jobs"},
                         ctx);
  ExperimentPlan p;
  if (!j.contains("ensemble")) throw ConfigError(ctx + ": missing field 'ensemble'");
  p.ensemble = ensemble_from_json(j.at("ensemble"));
  if (j.contains("sampler")) {
    const auto& s = j.at("sampler");
    detail::reject_unknown(s, {"kind", "burn_in", "thinning", "cap"}, "sampler");
    p.sampler.kind = detail::get_or<std::string>(s, "kind", "exact", "sampler");
    p.sampler.burn_in = detail::get_or<std::size_t>(s, "burn_in", 0, "sampler");
    p.sampler.thinning = detail::get_or<std::size_t>(s, "thinning", 1, "sampler");
    p.sampler.cap = detail::get_or<std::size_t>(s, "cap", kDefaultEnumerationCap, "sampler");
  }
  if (!j.contains("N")) throw ConfigError(ctx + ": missing field 'N'");
  if (j.at("N").is_array())
    p.sample_sizes = detail::get_field<std::vector<std::size_t>>(j, "N", ctx);
  else
    p.sample_sizes = {detail::get_field<std::size_t>(j, "N", ctx)};
  p.betas = detail::get_or<std::vector<double>>(j, "betas", {}, ctx);
  p.pipeline = parse_pipeline(detail::get_or<std::string>(j, "pipeline", "ising", ctx));
  if (j.contains("recovery")) p.recovery = recovery_config_from_json(j.at("recovery"));
  p.seeds = detail::get_field<std::vector<std::uint64_t>>(j, "seeds", ctx);
  p.output = detail::get_or<std::string>(j, "output", "", ctx);
  p.record_timing = detail::get_or<bool>(j, "record_timing", false, ctx);
  p.jobs = detail::get_or<std::size_t>(j, "jobs", 1, ctx);
  p.validate();
  return p;
}

/// Hash of the plan without execution-only fields (parallelism, output location).
inline std::string plan_hash(const ExperimentPlan& p) {
  json j = to_json(p);
  j.erase("jobs");
  j.erase("output");
  j["recovery"].erase("jobs");
  return config_hash(j);
}

struct RunRow {
  std::uint64_t seed = 0;
  std::size_t N = 0;
  double beta = 0.0;
  std::string status = "ok";
  int exit_code = 0;
  std::optional<double> linf_error;
  std::optional<double> l1_error;
  std::optional<double> structure_precision;
  std::optional<double> structure_recall;
  std::optional<double> kl;
  std::optional<double> tv;
  std::optional<double> wallclock_s;
  std::optional<RecoveryReport> report;
};

struct ExperimentResult {
  std::string config_hash;
  std::vector<RunRow> rows;
  std::string summary_csv;
  bool all_completed = true;
  int exit_code = 0;  // first failing run's code, 0 when all completed
};

inline constexpr std::string_view kSummaryHeader =
    "seed,N,beta,status,linf_error,l1_error,structure_precision,structure_recall,kl,tv,wallclock_s";

namespace detail {

constexpr std::uint64_t kSampleStream = 0x73616d706c65ULL;

inline std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

inline std::string csv_status(const std::string& s) {
  std::string out;
  for (char c : s) out += (c == ',' || c == '\n' || c == '\r') ? ' ' : c;
  return out;
}

inline RecoveryReport run_pipeline(const ExperimentPlan& plan, const EnsembleSpec& spec, const SampleBatch& samples) {
  RecoveryConfig cfg = plan.recovery;
  if (!cfg.ensemble) cfg.ensemble = describe(spec);
  cfg.jobs = 1;
  if (plan.pipeline != Pipeline::ising && plan.pipeline != Pipeline::exact) cfg.t = spec.t;
  switch (plan.pipeline) {
    case Pipeline::ising:
      return recover_ising(samples, cfg);
    case Pipeline::mrf:
      return recover_mrf(samples, cfg);
    case Pipeline::structure:
      return learn_structure(samples, cfg);
    case Pipeline::exact:
      return exact_recover(samples, spec.beta, spec.max_degree(), spec.t, cfg);
  }
  throw ConfigError("unknown pipeline");
}

inline RunRow run_one(const ExperimentPlan& plan, std::uint64_t seed, std::size_t N, double beta) {
  RunRow row;
  row.seed = seed;
  row.N = N;
  row.beta = beta;
  try {
    EnsembleSpec spec = plan.ensemble;
    spec.beta = beta;
    spec.seed = seed;
    const GeneratedModel model = generate(spec);
    const std::uint64_t sample_seed = rng::mix(seed, kSampleStream);
    SampleBatch samples;
    if (plan.sampler.kind == "exact")
      samples = exact_sample(model.psi, N, sample_seed, plan.sampler.cap);
    else
      samples = glauber_chain(model.psi, N, plan.sampler.burn_in, plan.sampler.thinning, sample_seed);
    samples.meta().model_hash = model_hash(model.psi);
    RecoveryReport report = run_pipeline(plan, spec, samples);
    score_report(report, model.psi, model.graph);
    row.linf_error = report.linf_error;
    row.l1_error = report.l1_error;
    row.structure_precision = report.structure_precision;
    row.structure_recall = report.structure_recall;
    if (spec.vertex_count() <= plan.sampler.cap && spec.vertex_count() <= kDefaultEnumerationCap) {
      const auto p = enumerate_distribution(model.psi, plan.sampler.cap);
      const auto q = enumerate_distribution(report.estimate, plan.sampler.cap);
      row.kl = kl_divergence(p, q);
      row.tv = tv_distance(p, q);
    }
    if (plan.record_timing) row.wallclock_s = report.wallclock_s;
    row.report = std::move(report);
  } catch (const Error& e) {
    row.status = std::string("error: ") + e.what();
    row.exit_code = static_cast<int>(e.code());
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
    row.exit_code = static_cast<int>(ExitCode::invariant);
  }
  return row;
}

}  // namespace detail

inline std::string summary_to_csv(const std::vector<RunRow>& rows, const std::string& cfg_hash) {
  std::ostringstream out;
  out << csv_preamble(cfg_hash) << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.seed << ',' << r.N << ',' << format_double(r.beta) << ',' << detail::csv_status(r.status) << ','
        << detail::cell(r.linf_error) << ',' << detail::cell(r.l1_error) << ',' << detail::cell(r.structure_precision)
        << ',' << detail::cell(r.structure_recall) << ',' << detail::cell(r.kl) << ',' << detail::cell(r.tv) << ','
        << detail::cell(r.wallclock_s) << '\n';
  }
  return out.str();
}

/// Runs every (N, beta, seed) combination. Runs execute concurrently up to plan.jobs but
/// rows and files are ordered by (N, beta, seed), so output is independent of scheduling.
inline ExperimentResult run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  ExperimentResult result;
  result.config_hash = plan_hash(plan);
  const std::vector<double> betas = plan.betas.empty() ? std::vector<double>{plan.ensemble.beta} : plan.betas;
  struct Job {
    std::size_t N;
    double beta;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (auto N : plan.sample_sizes)
    for (double b : betas)
      for (auto s : plan.seeds) jobs.push_back({N, b, s});
  result.rows.resize(jobs.size());
  parallel_for(jobs.size(), plan.jobs, [&](std::size_t k) {
    result.rows[k] = detail::run_one(plan, jobs[k].seed, jobs[k].N, jobs[k].beta);
  });
  for (const auto& r : result.rows)
    if (r.exit_code != 0 && result.all_completed) {
      result.all_completed = false;
      result.exit_code = r.exit_code;
    }
  result.summary_csv = summary_to_csv(result.rows, result.config_hash);

  if (!plan.output.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(plan.output);
    write_file((fs::path(plan.output) / "summary.csv").string(), result.summary_csv);
    write_file((fs::path(plan.output) / "plan.json").string(),
               with_meta(to_json(plan), result.config_hash).dump(2) + "\n");
    for (const auto& r : result.rows) {
      if (!r.report) continue;
      const std::string name =
          "report_N" + std::to_string(r.N) + "_beta" + format_double(r.beta) + "_seed" + std::to_string(r.seed) + ".json";
      json j = with_meta(to_json(*r.report, plan.record_timing), result.config_hash);
      j["seed"] = r.seed;
      j["N"] = r.N;
      j["beta"] = r.beta;
      write_file((fs::path(plan.output) / name).string(), j.dump(2) + "\n");
    }
  }
  return result;
}

// ---------------------------------------------------------------- curves

struct CurvePoint {
  std::string run;
  std::size_t N = 0;
  double beta = 0.0;
  std::string metric;
  double value = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

inline constexpr std::string_view kCurveHeader = "run,N,beta,metric,value";

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace detail

/// Tidy rows from summary CSVs; NA cells and failed runs are skipped.
inline std::vector<CurvePoint> curves_from_summaries(const std::vector<std::pair<std::string, std::string>>& named_csvs) {
  static const std::vector<std::string> metrics = {"linf_error", "l1_error", "structure_precision", "structure_recall",
                                                   "kl",         "tv",       "wallclock_s"};
  std::vector<CurvePoint> out;
  for (const auto& [run, text] : named_csvs) {
    const auto lines = detail::data_lines(text);
    if (lines.empty() || lines[0] != kSummaryHeader) throw ConfigError("summary CSV schema mismatch in run '" + run + "'");
    const auto header = detail::split_csv(lines[0]);
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const auto cells = detail::split_csv(lines[k]);
      if (cells.size() != header.size()) throw ConfigError("summary CSV row has the wrong number of cells in run '" + run + "'");
      std::map<std::string, std::string> row;
      for (std::size_t c = 0; c < header.size(); ++c) row[header[c]] = cells[c];
      if (row["status"] != "ok") continue;
      for (const auto& m : metrics) {
        if (row[m] == "NA") continue;
        CurvePoint p;
        p.run = run;
        p.N = static_cast<std::size_t>(std::stoull(row["N"]));
        p.beta = parse_double(row["beta"]);
        p.metric = m;
        p.value = parse_double(row[m]);
        out.push_back(p);
      }
    }
  }
  return out;
}

/// Hash over the run names and the exact bytes of each input summary.
inline std::string curves_hash(const std::vector<std::pair<std::string, std::string>>& named_csvs) {
  json j = json::array();
  for (const auto& [run, text] : named_csvs) j.push_back({run, hex64(rng::hash_string(text))});
  return config_hash(j);
}

inline std::string curves_to_csv(const std::vector<CurvePoint>& points, const std::string& cfg_hash) {
  std::ostringstream out;
  out << csv_preamble(cfg_hash) << kCurveHeader << '\n';
  for (const auto& p : points)
    out << detail::csv_status(p.run) << ',' << p.N << ',' << format_double(p.beta) << ',' << p.metric << ','
        << format_double(p.value) << '\n';
  return out.str();
}

inline std::vector<CurvePoint> curves_from_csv(const std::string& text) {
  const auto lines = detail::data_lines(text);
  if (lines.empty() || lines[0] != kCurveHeader) throw ConfigError("curve CSV schema mismatch");
  std::vector<CurvePoint> out;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = detail::split_csv(lines[k]);
    if (cells.size() != 5) throw ConfigError("curve CSV row has the wrong number of cells");
    out.push_back({cells[0], static_cast<std::size_t>(std::stoull(cells[1])), parse_double(cells[2]), cells[3],
                   parse_double(cells[4])});
  }
  return out;
}

}  // namespace spinlearn
