// spinlearn command line: gen, sample, learn, diagnose, eval, run, curves.

#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinlearn/diagnostics.hpp"
#include "spinlearn/experiment.hpp"
#include "spinlearn/io.hpp"
#include "spinlearn/model_gen.hpp"
#include "spinlearn/recovery.hpp"
#include "spinlearn/sampler.hpp"

namespace fs = std::filesystem;
using namespace spinlearn;

namespace {

// Flags that were given on the command line, as JSON fields. Merged with a config file:
// flags win unless --config-priority is set.
struct FlagSet {
  json fields = json::object();

  template <class T>
  void bind(CLI::App* app, const std::string& flag, const std::string& key, T& target, const std::string& help) {
    opts.push_back({app->add_option(flag, target, help), key, [&target] { return json(target); }});
  }

  void collect() {
    for (auto& o : opts)
      if (o.option->count() > 0) fields[o.key] = o.value();
  }

  json merge(const json& config, bool config_priority) const {
    json out = config.is_null() ? json::object() : config;
    for (const auto& [k, v] : fields.items())
      if (!config_priority || !out.contains(k)) out[k] = v;
    return out;
  }

 private:
  struct Bound {
    CLI::Option* option;
    std::string key;
    std::function<json()> value;
  };
  std::vector<Bound> opts;
};

json load_optional(const std::string& path) { return path.empty() ? json() : read_json(path); }

void write_json_out(const std::string& path, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

std::string default_meta_path(const std::string& samples_path) { return samples_path + ".meta.json"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate, sample, learn and diagnose Ising models and higher-order Markov random fields"};
  app.require_subcommand(1);
  app.fallthrough();
  bool config_priority = false;
  std::size_t jobs = 1;
  app.add_flag("--config-priority", config_priority, "Config file values win over command line flags");
  app.add_option("--jobs", jobs, "Maximum parallel workers (0 = hardware concurrency)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a model from an ensemble spec");
  std::string gen_spec, gen_out = "-", gen_format = "poly";
  std::string g_kind, g_graph, g_weights, g_field;
  std::size_t g_n = 0, g_t = 2;
  double g_beta = 1.0, g_mean = 0.0, g_sigma = 1.0;
  std::uint64_t g_seed = 0;
  FlagSet gen_flags;
  gen->add_option("--spec", gen_spec, "Ensemble spec JSON file");
  gen->add_option("-o,--output", gen_out, "Model JSON output (- for stdout)");
  gen->add_option("--format", gen_format, "poly or ising")->check(CLI::IsMember({"poly", "ising"}));
  gen_flags.bind(gen, "--kind", "kind", g_kind, "sk | random_ising | random_mrf | pure_spin");
  gen_flags.bind(gen, "--n", "n", g_n, "Number of spins (sk, pure_spin)");
  gen_flags.bind(gen, "--beta", "beta", g_beta, "Inverse temperature");
  gen_flags.bind(gen, "--t", "t", g_t, "Order");
  gen_flags.bind(gen, "--graph", "graph", g_graph, "complete:n | regular:n:d | grid:r:c | path:n | empty:n | edges:<file>");
  gen_flags.bind(gen, "--weights", "weights", g_weights, "gaussian | rademacher");
  gen_flags.bind(gen, "--field", "field", g_field, "zero | gaussian | rademacher");
  gen_flags.bind(gen, "--field-mean", "field_mean", g_mean, "Gaussian field mean");
  gen_flags.bind(gen, "--field-sigma", "field_sigma", g_sigma, "Gaussian field standard deviation");
  gen_flags.bind(gen, "--seed", "seed", g_seed, "Seed");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw samples from a model");
  std::string s_model, s_out, s_meta, s_sampler = "exact";
  std::size_t s_count = 1000, s_burn = 0, s_thin = 1, s_cap = kDefaultEnumerationCap;
  std::uint64_t s_seed = 0;
  sample->add_option("--model", s_model, "Model JSON")->required();
  sample->add_option("-o,--output", s_out, "Samples CSV")->required();
  sample->add_option("--meta", s_meta, "Meta JSON sidecar (default <output>.meta.json)");
  sample->add_option("-N,--count", s_count, "Number of samples");
  sample->add_option("--seed", s_seed, "Seed");
  sample->add_option("--sampler", s_sampler, "exact or glauber")->check(CLI::IsMember({"exact", "glauber"}));
  sample->add_option("--burn-in", s_burn, "Glauber burn-in updates");
  sample->add_option("--thinning", s_thin, "Glauber updates between recorded states");
  sample->add_option("--cap", s_cap, "Exact sampler enumeration cap");

  // learn
  auto* learn = app.add_subcommand("learn", "Recover a model or its structure from samples");
  std::string l_samples, l_meta, l_config, l_mode = "ising", l_out = "-", l_report, l_truth, l_ensemble, l_budget,
                                            l_assembly;
  double l_eps = 0.1, l_delta = 0.1, l_lambda = 0, l_lc = 2, l_C = 0, l_eta = 0, l_holdout = 0.1, l_beta = 0;
  std::size_t l_t = 2, l_K = 0, l_maxc = 2000, l_d = 0;
  bool l_timing = false;
  FlagSet learn_flags;
  learn->add_option("--samples", l_samples, "Samples CSV")->required();
  learn->add_option("--meta", l_meta, "Sample meta JSON (default <samples>.meta.json when present)");
  learn->add_option("--config", l_config, "Recovery config JSON");
  learn->add_option("--mode", l_mode, "Pipeline")->check(CLI::IsMember({"ising", "mrf", "structure", "exact"}));
  learn->add_option("-o,--output", l_out, "Estimated model JSON (- for stdout)");
  learn->add_option("--report", l_report, "Recovery report JSON");
  learn->add_option("--truth", l_truth, "Ground-truth model JSON for error reporting");
  learn->add_option("--ensemble", l_ensemble, "Ensemble spec JSON used for automatic bounds");
  learn->add_option("--beta", l_beta, "Ensemble beta (exact mode)");
  learn->add_option("--d", l_d, "Maximum degree (exact mode)");
  learn->add_flag("--timing", l_timing, "Record wall-clock time in the report");
  learn_flags.bind(learn, "--t", "t", l_t, "Order");
  learn_flags.bind(learn, "--eps", "eps", l_eps, "Target accuracy");
  learn_flags.bind(learn, "--delta", "delta", l_delta, "Failure probability");
  learn_flags.bind(learn, "--lambda", "lambda", l_lambda, "Width bound (0 = automatic)");
  learn_flags.bind(learn, "--lambda-constant", "lambda_constant", l_lc, "Constant in the automatic width bound");
  learn_flags.bind(learn, "--C", "C", l_C, "Smoothness bound (0 = automatic)");
  learn_flags.bind(learn, "--eta", "eta", l_eta, "Identifiability threshold (0 = automatic)");
  learn_flags.bind(learn, "--K", "K", l_K, "Median-test samples (0 = automatic)");
  learn_flags.bind(learn, "--budget", "budget", l_budget, "strict or fit");
  learn_flags.bind(learn, "--holdout-fraction", "holdout_fraction", l_holdout, "Holdout share in fit mode");
  learn_flags.bind(learn, "--max-candidates", "max_candidates", l_maxc, "Candidate iterates scored (0 = all)");
  learn_flags.bind(learn, "--assembly", "assembly", l_assembly, "min_index or average");

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "Structural diagnostics of a model");
  std::string d_model, d_out = "-", d_method = "exact";
  double d_C = 0, d_B = kDefaultMgfDivisor, d_threshold = -1;
  std::size_t d_t = 0, d_count = 100000, d_cap = kDefaultEnumerationCap;
  std::uint64_t d_seed = 0;
  diagnose->add_option("--model", d_model, "Model JSON")->required();
  diagnose->add_option("-o,--output", d_out, "Report JSON (- for stdout)");
  diagnose->add_option("--method", d_method, "exact or montecarlo")->check(CLI::IsMember({"exact", "montecarlo"}));
  diagnose->add_option("--C", d_C, "Smoothness bound to test (0: report only the minimal bound)");
  diagnose->add_option("--t", d_t, "Flip radius (default: model t_max)");
  diagnose->add_option("--B", d_B, "MGF divisor");
  diagnose->add_option("--threshold", d_threshold, "Tail threshold (negative: skip)");
  diagnose->add_option("-N,--count", d_count, "Monte Carlo sample count");
  diagnose->add_option("--seed", d_seed, "Monte Carlo seed");
  diagnose->add_option("--cap", d_cap, "Enumeration cap");

  // eval
  auto* eval = app.add_subcommand("eval", "Compare two models");
  std::string e_truth, e_est, e_out = "-";
  std::size_t e_cap = kDefaultEnumerationCap;
  eval->add_option("--truth", e_truth, "Reference model JSON")->required();
  eval->add_option("--estimate", e_est, "Estimated model JSON")->required();
  eval->add_option("-o,--output", e_out, "Output JSON (- for stdout)");
  eval->add_option("--cap", e_cap, "Enumeration cap for KL and TV");

  // run
  auto* run = app.add_subcommand("run", "Run an experiment plan");
  std::string r_plan, r_output;
  bool r_timing = false;
  FlagSet run_flags;
  run->add_option("--plan", r_plan, "Experiment plan JSON")->required();
  run_flags.bind(run, "--output", "output", r_output, "Output directory");
  run->add_flag("--timing", r_timing, "Record wall-clock seconds (breaks bit-identical reruns)");

  // curves
  auto* curves = app.add_subcommand("curves", "Merge summary CSVs into long-format curves");
  std::vector<std::string> c_inputs;
  std::string c_out = "-";
  curves->add_option("inputs", c_inputs, "Summary CSVs, optionally as name=path")->required();
  curves->add_option("-o,--output", c_out, "Output CSV (- for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::config);
  }

  try {
    if (gen->parsed()) {
      gen_flags.collect();
      const json spec_json = gen_flags.merge(load_optional(gen_spec), config_priority);
      const EnsembleSpec spec = ensemble_from_json(spec_json);
      const GeneratedModel model = generate(spec);
      const std::string hash = config_hash(to_json(spec));
      if (gen_format == "ising") {
        if (!model.ising) throw ConfigError("ising format requires a pairwise ensemble");
        write_json_out(gen_out, with_meta(to_json(*model.ising), hash));
      } else {
        write_json_out(gen_out, with_meta(to_json(model.psi), hash));
      }
      return 0;
    }

    if (sample->parsed()) {
      const Polynomial p = model_from_json(read_json(s_model));
      SampleBatch batch = s_sampler == "exact" ? exact_sample(p, s_count, s_seed, s_cap)
                                               : glauber_chain(p, s_count, s_burn, s_thin, s_seed);
      batch.meta().model_hash = model_hash(p);
      json meta = to_json(batch.meta(), batch.n(), batch.size());
      const std::string hash = config_hash(meta);
      write_file(s_out, samples_to_csv(batch, hash));
      write_json_out(s_meta.empty() ? default_meta_path(s_out) : s_meta, with_meta(meta, hash));
      if (!batch.meta().iid) std::cerr << "warning: non-iid samples: guarantees void\n";
      return 0;
    }

    if (learn->parsed()) {
      learn_flags.collect();
      json cfg_json = learn_flags.merge(load_optional(l_config), config_priority);
      std::optional<EnsembleSpec> ens;
      if (!l_ensemble.empty()) {
        ens = ensemble_from_json(read_json(l_ensemble));
        if (!cfg_json.contains("ensemble") || cfg_json["ensemble"].is_null()) cfg_json["ensemble"] = to_json(describe(*ens));
      }
      RecoveryConfig cfg = recovery_config_from_json(cfg_json);
      if (app.count("--jobs") > 0) cfg.jobs = jobs;
      SampleMeta meta;
      const std::string meta_path = l_meta.empty() ? default_meta_path(l_samples) : l_meta;
      if (!l_meta.empty() || fs::exists(meta_path)) meta = sample_meta_from_json(read_json(meta_path));
      const SampleBatch batch = samples_from_csv(read_file(l_samples), meta);

      RecoveryReport report;
      if (l_mode == "ising") {
        report = recover_ising(batch, cfg);
      } else if (l_mode == "mrf") {
        report = recover_mrf(batch, cfg);
      } else if (l_mode == "structure") {
        report = learn_structure(batch, cfg);
      } else {
        double beta = l_beta;
        std::size_t d = l_d;
        std::size_t t = cfg.t;
        if (ens) {
          if (learn->count("--beta") == 0) beta = ens->beta;
          if (learn->count("--d") == 0) d = ens->max_degree();
          if (cfg_json.count("t") == 0) t = ens->t;
        }
        if (!(beta > 0.0) || d == 0) throw ConfigError("exact mode needs --beta and --d, or --ensemble");
        report = exact_recover(batch, beta, d, t, cfg);
      }
      if (!l_truth.empty()) {
        const Polynomial truth = model_from_json(read_json(l_truth));
        score_report(report, truth);
      }
      const std::string hash = config_hash(to_json(cfg));
      if (report.ising_estimate)
        write_json_out(l_out, with_meta(to_json(*report.ising_estimate), hash));
      else
        write_json_out(l_out, with_meta(to_json(report.estimate), hash));
      if (!l_report.empty()) write_json_out(l_report, with_meta(to_json(report, l_timing), hash));
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      return 0;
    }

    if (diagnose->parsed()) {
      const Polynomial p = model_from_json(read_json(d_model));
      const std::size_t t = d_t ? d_t : std::max<std::size_t>(p.t_max(), 1);
      json out{{"n", p.n()}, {"t", t}, {"method", d_method}, {"B", d_B}};
      out["identifiability_margin"] = identifiability_margin(p);
      out["width"] = width(p);
      json mgf = json::array();
      json tail = json::array();
      if (d_method == "exact") {
        const GibbsTable table = enumerate_distribution(p, d_cap);
        out["minimal_smoothness"] = minimal_smoothness(table, t);
        if (d_C > 0) out["smoothness"] = to_json(smoothness_fraction(table, d_C, t));
        for (std::uint32_t i = 0; i < p.n(); ++i) {
          mgf.push_back(to_json(mgf_flip_estimate(table, Monomial{i}, d_B)));
          if (d_threshold >= 0) tail.push_back(tail_fraction(table, Monomial{i}, d_threshold));
        }
      } else {
        const SampleBatch batch = exact_sample(p, d_count, d_seed, d_cap);
        if (d_C > 0) out["smoothness"] = to_json(smoothness_fraction(p, batch, d_C, t));
        for (std::uint32_t i = 0; i < p.n(); ++i) {
          mgf.push_back(to_json(mgf_flip_estimate(p, batch, Monomial{i}, d_B)));
          if (d_threshold >= 0) tail.push_back(tail_fraction(p, batch, Monomial{i}, d_threshold).value);
        }
      }
      out["mgf"] = mgf;
      if (d_threshold >= 0) {
        out["tail_threshold"] = d_threshold;
        out["tail_fraction"] = tail;
      }
      if (std::isinf(identifiability_margin(p))) out["identifiability_margin"] = nullptr;
      write_json_out(d_out, with_meta(out, config_hash(to_json(p))));
      return 0;
    }

    if (eval->parsed()) {
      const Polynomial a = model_from_json(read_json(e_truth));
      const Polynomial b = model_from_json(read_json(e_est));
      const std::size_t t_max = std::max(a.t_max(), b.t_max());
      const Polynomial a2 = with_t_max(a, t_max);
      const Polynomial b2 = with_t_max(b, t_max);
      json out{{"l1", l1_distance(a2, b2)}, {"linf", linf_distance(a2, b2)}};
      if (a.n() <= e_cap) {
        const GibbsTable pa = enumerate_distribution(a, e_cap);
        const GibbsTable pb = enumerate_distribution(b, e_cap);
        out["kl"] = kl_divergence(pa, pb);
        out["tv"] = tv_distance(pa, pb);
      }
      const json inputs{{"truth", model_hash(a)}, {"estimate", model_hash(b)}, {"cap", e_cap}};
      write_json_out(e_out, with_meta(out, config_hash(inputs)));
      return 0;
    }

    if (run->parsed()) {
      run_flags.collect();
      json plan_json = run_flags.merge(read_json(r_plan), config_priority);
      plan_json.erase("meta");
      if (app.count("--jobs") > 0) plan_json["jobs"] = jobs;
      if (r_timing) plan_json["record_timing"] = true;
      const ExperimentPlan plan = plan_from_json(plan_json);
      const ExperimentResult result = run_experiment(plan);
      if (plan.output.empty()) std::cout << result.summary_csv;
      for (const auto& row : result.rows)
        if (row.exit_code != 0) std::cerr << "seed " << row.seed << " N " << row.N << ": " << row.status << "\n";
      return result.exit_code;
    }

    if (curves->parsed()) {
      std::vector<std::pair<std::string, std::string>> named;
      for (const auto& in : c_inputs) {
        const auto eq = in.find('=');
        if (eq == std::string::npos)
          named.emplace_back(fs::path(in).parent_path().filename().string().empty() ? fs::path(in).stem().string()
                                                                                   : fs::path(in).parent_path().filename().string(),
                             read_file(in));
        else
          named.emplace_back(in.substr(0, eq), read_file(in.substr(eq + 1)));
      }
      const std::string text = curves_to_csv(curves_from_summaries(named), curves_hash(named));
      if (c_out.empty() || c_out == "-")
        std::cout << text;
      else
        write_file(c_out, text);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::invariant);
  }
  return 0;
}
