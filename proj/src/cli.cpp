// Copyright 2026 The threadtree Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "threadtree/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "threadtree/asymptotics.hpp"
#include "threadtree/estimation.hpp"
#include "threadtree/generator.hpp"
#include "threadtree/io.hpp"
#include "threadtree/metrics.hpp"
#include "threadtree/model_compare.hpp"
#include "threadtree/parallel.hpp"

namespace threadtree {
namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string model;
  std::size_t replicates = 100;
  std::size_t sample_size = 0;
  std::size_t restarts = 5;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format;
  bool strict = false;
  std::optional<std::size_t> jobs;

  std::optional<double> alpha, tau, beta, log_beta;
  std::string sizes_from;
  std::optional<std::size_t> size;
  std::optional<std::size_t> count;
  std::string sampler = "composition";

  std::string synthetic;
  bool simulate = false;

  std::size_t experiments = 100;
  std::vector<std::size_t> thread_counts = {50, 500, 5000};

  std::size_t k = 10;
  std::size_t t_max = 1000;
  std::size_t x_min = 10;
};

// An output file: its name under --out and its full content.
struct Artifact {
  std::string name;
  std::string content;
};

struct CommandOutput {
  std::vector<Artifact> artifacts;
  // Index of the artifact printed to standard output without --out.
  std::size_t primary = 0;
};

Json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

Json spec_json(const ModelSpec& s) {
  return {{"variant", std::string(to_string(s.variant()))},
          {"alpha", s.alpha()},
          {"tau", s.tau()},
          {"beta", s.beta()},
          {"log_beta", number(std::log(s.beta()))}};
}

Json fit_json(const FitResult& f) {
  Json j = spec_json(f.spec);
  j["neg_log_lik"] = number(f.neg_log_lik);
  j["node_count"] = f.node_count;
  j["neg_log_lik_per_node"] =
      number(f.node_count ? f.neg_log_lik / static_cast<double>(f.node_count) : NAN);
  j["converged"] = f.converged;
  Json restarts = Json::array();
  for (const auto& r : f.restarts) {
    restarts.push_back({{"initial", spec_json(r.initial)},
                        {"final", spec_json(r.final)},
                        {"objective", number(r.objective)},
                        {"converged", r.converged},
                        {"iterations", r.iterations},
                        {"method", r.method}});
  }
  j["restarts"] = std::move(restarts);
  return j;
}

Json summary_json(const BootstrapSummary& s) {
  auto ps = [](const ParameterSummary& p) {
    return Json{{"mean", number(p.mean)}, {"sd", number(p.sd)}};
  };
  return {{"alpha", ps(s.alpha)},       {"tau", ps(s.tau)},
          {"beta", ps(s.beta)},         {"log_beta", ps(s.log_beta)},
          {"neg_log_lik", ps(s.neg_log_lik)}, {"converged", s.converged},
          {"total", s.total}};
}

std::string fits_csv(const std::vector<FitResult>& fits) {
  std::string s = "variant,alpha,tau,beta,log_beta,neg_log_lik,node_count,converged\n";
  char buf[512];
  for (const auto& f : fits) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%llu,%d\n",
                  std::string(to_string(f.spec.variant())).c_str(), f.spec.alpha(),
                  f.spec.tau(), f.spec.beta(), std::log(f.spec.beta()),
                  f.neg_log_lik, static_cast<unsigned long long>(f.node_count),
                  f.converged ? 1 : 0);
    s += buf;
  }
  return s;
}

template <typename Writer>
std::string capture(Writer&& w) {
  std::ostringstream os;
  w(os);
  return os.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

bool json_format(const Options& o, bool json_default) {
  if (o.format.empty()) return json_default;
  return o.format == "json";
}

std::vector<Variant> selected_variants(const Options& o, const char* fallback) {
  const std::string m = o.model.empty() ? fallback : o.model;
  if (m == "all") return {kAllVariants.begin(), kAllVariants.end()};
  try {
    return {parse_variant(m)};
  } catch (const std::invalid_argument&) {
    throw UsageError("unknown model '" + m + "'");
  }
}

ModelSpec spec_from_flags(const Options& o) {
  const auto variants = selected_variants(o, "fm");
  if (variants.size() != 1) throw UsageError("--model all is not valid here");
  const Variant v = variants[0];
  if (o.beta && o.log_beta) throw UsageError("--beta and --log-beta are exclusive");
  std::optional<double> beta = o.beta;
  if (o.log_beta) beta = std::exp(*o.log_beta);
  auto need = [&](const std::optional<double>& x, Variant pinned, double pin,
                  const char* flag) {
    if (v == pinned) return pin;
    if (!x) throw UsageError(std::string("missing ") + flag);
    return *x;
  };
  const double a = need(o.alpha, Variant::kNoAlpha, 0, "--alpha");
  const double t = need(o.tau, Variant::kNoTau, 1, "--tau");
  const double b = need(beta, Variant::kNoBias, 0, "--beta or --log-beta");
  try {
    return ModelSpec::constrained(v, a, t, b);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

FitConfig fit_config(const Options& o) {
  FitConfig cfg;
  cfg.restarts = o.restarts;
  cfg.bootstrap_replicates = o.replicates;
  cfg.sample_size = o.sample_size;
  cfg.seed = o.seed.value_or(0);
  cfg.jobs = *o.jobs;
  return cfg;
}

ThreadDataset load(const Options& o, const std::string& path, std::ostream& err) {
  IngestResult r = ingest_file(path, o.strict);
  for (const auto& e : r.skipped) {
    err << path << ": line " << e.line << ": skipped: " << e.message << '\n';
  }
  err << path << ": " << r.dataset.count() << " threads, "
      << r.dataset.total_nodes() << " nodes";
  if (!r.skipped.empty()) err << ", " << r.skipped.size() << " lines skipped";
  err << '\n';
  return std::move(r.dataset);
}

CommandOutput cmd_fit(const Options& o, std::ostream& err) {
  const ThreadDataset data = load(o, o.input, err);
  const FitConfig cfg = fit_config(o);
  const auto variants = selected_variants(o, "fm");
  std::vector<FitResult> fits;
  if (variants.size() == 4) {
    const auto all = fit_all(data, cfg);
    fits.assign(all.begin(), all.end());
  } else {
    fits.push_back(fit(data, variants[0], cfg));
  }
  Json j{{"source", o.input},
         {"threads", data.count()},
         {"sample_size", o.sample_size},
         {"seed", cfg.seed},
         {"fits", Json::array()}};
  for (const auto& f : fits) j["fits"].push_back(fit_json(f));
  CommandOutput out;
  out.artifacts = {{"fit.json", dump(j)}, {"fit.csv", fits_csv(fits)}};
  out.primary = json_format(o, true) ? 0 : 1;
  return out;
}

CommandOutput cmd_bootstrap(const Options& o, std::ostream& err) {
  const ThreadDataset data = load(o, o.input, err);
  const FitConfig cfg = fit_config(o);
  const auto variants = selected_variants(o, "fm");
  std::vector<FitResult> fits;
  if (variants.size() == 4) {
    const auto all = bootstrap_all(data, cfg);
    fits.assign(all.begin(), all.end());
  } else {
    fits.push_back(bootstrap_fit(data, variants[0], cfg));
  }
  Json j{{"source", o.input},
         {"threads", data.count()},
         {"replicates", cfg.bootstrap_replicates},
         {"sample_size", o.sample_size},
         {"seed", cfg.seed},
         {"variants", Json::array()}};
  std::ostringstream table;
  bool header = true;
  for (const auto& f : fits) {
    Json v = fit_json(f);
    v["bootstrap"] = summary_json(summarize(f.replicates));
    j["variants"].push_back(std::move(v));
    write_replicates_csv(table, f.spec.variant(), f.replicates, header);
    header = false;
  }
  CommandOutput out;
  out.artifacts = {{"bootstrap.json", dump(j)}, {"replicates.csv", table.str()}};
  out.primary = json_format(o, false) ? 0 : 1;
  return out;
}

CommandOutput cmd_compare(const Options& o, std::ostream& err) {
  if (!o.model.empty() && o.model != "all") {
    throw UsageError("compare always uses all four models");
  }
  const ThreadDataset data = load(o, o.input, err);
  const FitConfig cfg = fit_config(o);
  if (cfg.bootstrap_replicates < 2) throw UsageError("compare needs --replicates >= 2");
  const auto fits = bootstrap_all(data, cfg);
  const ComparisonReport report = compare_variants(fits);
  std::ostringstream table;
  Json j{{"source", o.input}, {"fits", Json::array()}};
  bool header = true;
  for (const auto& f : fits) {
    j["fits"].push_back(fit_json(f));
    write_replicates_csv(table, f.spec.variant(), f.replicates, header);
    header = false;
  }
  CommandOutput out;
  out.artifacts = {
      {"range.csv", capture([&](std::ostream& s) { write_range_csv(s, report); })},
      {"comparison.json",
       capture([&](std::ostream& s) { write_comparison_json(s, report); })},
      {"replicates.csv", table.str()},
      {"fits.json", dump(j)}};
  out.primary = json_format(o, false) ? 1 : 0;
  return out;
}

ParentSampler parse_sampler(const std::string& s) {
  if (s == "composition") return ParentSampler::kComposition;
  if (s == "inverse-cdf") return ParentSampler::kInverseCdf;
  throw UsageError("unknown sampler '" + s + "'");
}

CommandOutput cmd_generate(const Options& o, std::ostream& err) {
  const ModelSpec spec = spec_from_flags(o);
  GenConfig gen;
  gen.seed = *o.seed;
  gen.jobs = *o.jobs;
  gen.sampler = parse_sampler(o.sampler);
  if (!o.sizes_from.empty() && o.size) {
    throw UsageError("--sizes-from and --size are exclusive");
  }
  if (!o.sizes_from.empty()) {
    const ThreadDataset ref = load(o, o.sizes_from, err);
    gen.sizes = SizeHistogram{ref.size_histogram()};
    gen.count = o.count.value_or(ref.count());
  } else {
    if (!o.count) throw UsageError("--count is required without --sizes-from");
    gen.count = *o.count;
    if (o.size) {
      if (*o.size == 0) throw UsageError("--size must be positive");
      gen.sizes = ExplicitSizes{std::vector<std::size_t>(gen.count, *o.size)};
    } else {
      gen.sizes = news_site_sizes();
    }
  }
  if (gen.count == 0) throw UsageError("--count must be positive");
  const ThreadDataset data = generate_dataset(spec, gen);
  err << "generated " << data.count() << " threads, " << data.total_nodes()
      << " nodes\n";
  const bool csv = !json_format(o, true);
  CommandOutput out;
  out.artifacts = {{csv ? "synthetic.csv" : "synthetic.jsonl",
                    capture([&](std::ostream& s) {
                      write_dataset(s, data, csv ? DatasetFormat::kCsv
                                                 : DatasetFormat::kJsonLines);
                    })}};
  return out;
}

// The dataset to set against the real one, if any.
std::optional<ThreadDataset> matched_synthetic(const Options& o,
                                               const ThreadDataset& real,
                                               std::ostream& err) {
  if (!o.synthetic.empty() && o.simulate) {
    throw UsageError("--synthetic and --simulate are exclusive");
  }
  if (!o.synthetic.empty()) return load(o, o.synthetic, err);
  if (!o.simulate) return std::nullopt;
  GenConfig gen;
  gen.seed = o.seed.value_or(0);
  gen.jobs = *o.jobs;
  gen.sampler = parse_sampler(o.sampler);
  std::vector<std::size_t> sizes;
  sizes.reserve(real.count());
  for (const auto& pv : real.threads()) sizes.push_back(pv.size());
  gen.sizes = ExplicitSizes{std::move(sizes)};
  return generate_dataset(spec_from_flags(o), gen);
}

CommandOutput cmd_metrics(const Options& o, std::ostream& err) {
  const ThreadDataset data = load(o, o.input, err);
  const auto synth = matched_synthetic(o, data, err);
  const StructureReport real = structure_report(data);

  CommandOutput out;
  auto add_report = [&](const StructureReport& r, const std::string& prefix) {
    out.artifacts.push_back({prefix + "degree.csv", capture([&](std::ostream& s) {
                               write_histogram_csv(s, r.degree, "degree");
                             })});
    out.artifacts.push_back({prefix + "subtree.csv", capture([&](std::ostream& s) {
                               write_histogram_csv(s, r.subtree_size, "subtree_size");
                             })});
    out.artifacts.push_back({prefix + "sizes.csv", capture([&](std::ostream& s) {
                               write_histogram_csv(s, r.size, "size");
                             })});
    out.artifacts.push_back({prefix + "depth.csv", capture([&](std::ostream& s) {
                               write_depth_csv(s, r);
                             })});
    out.artifacts.push_back({prefix + "depth_bins.csv", capture([&](std::ostream& s) {
                               write_log_bins_csv(s, log_binned_depths(r));
                             })});
  };
  Json j{{"source", o.input}, {"threads", real.threads}, {"nodes", real.nodes}};
  out.artifacts.push_back({"metrics.json", ""});
  add_report(real, "");
  if (synth) {
    const StructureReport sr = structure_report(*synth);
    add_report(sr, "synthetic_");
    const ReportDivergence d = compare_reports(real, sr);
    out.artifacts.push_back({"degree_overlay.csv", capture([&](std::ostream& s) {
                               write_overlay_csv(s, d.degree_overlay, "degree");
                             })});
    out.artifacts.push_back({"subtree_overlay.csv", capture([&](std::ostream& s) {
                               write_overlay_csv(s, d.subtree_overlay, "subtree_size");
                             })});
    j["synthetic"] = {{"threads", sr.threads}, {"nodes", sr.nodes}};
    j["divergence"] = {{"degree_tv", d.degree_tv},
                       {"subtree_tv", d.subtree_tv},
                       {"size_tv", d.size_tv},
                       {"depth_gap", d.depth_gap}};
  }
  out.artifacts[0].content = dump(j);
  out.primary = json_format(o, true) ? 0 : 1;
  return out;
}

CommandOutput cmd_evolve(const Options& o, std::ostream& err) {
  const ThreadDataset data = load(o, o.input, err);
  const auto synth = matched_synthetic(o, data, err);
  CommandOutput out;
  out.artifacts.push_back({"evolution.csv", capture([&](std::ostream& s) {
                             write_evolution_csv(s, evolution_trace(data));
                           })});
  if (synth) {
    out.artifacts.push_back({"synthetic_evolution.csv", capture([&](std::ostream& s) {
                               write_evolution_csv(s, evolution_trace(*synth));
                             })});
  }
  return out;
}

CommandOutput cmd_residuals(const Options& o, std::ostream& err) {
  if (!o.input.empty()) {
    throw UsageError("residuals simulates its own data and takes no input dataset");
  }
  ResidualConfig cfg;
  cfg.variants = selected_variants(o, "all");
  cfg.thread_counts = o.thread_counts;
  cfg.experiments = o.experiments;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed.value_or(0);
  cfg.jobs = *o.jobs;
  if (cfg.experiments == 0 || cfg.thread_counts.empty()) {
    throw UsageError("residuals needs experiments and thread counts");
  }
  err << "residuals: " << cfg.variants.size() << " variants x "
      << cfg.thread_counts.size() << " sizes x " << cfg.experiments
      << " experiments\n";
  const ResidualTable table = residual_experiment(cfg);
  CommandOutput out;
  out.artifacts = {
      {"residual_summary.csv",
       capture([&](std::ostream& s) { write_residual_summary_csv(s, table); })},
      {"residuals.csv",
       capture([&](std::ostream& s) { write_residuals_csv(s, table); })}};
  return out;
}

CommandOutput cmd_asymptotics(const Options& o, std::ostream& err) {
  Options full = o;
  if (full.model.empty()) full.model = "fm";
  const ModelSpec spec = spec_from_flags(full);
  const std::vector<std::size_t> times = geometric_times(o.k, o.t_max);
  std::optional<DegreeBounds> bounds;
  Json j{{"model", spec_json(spec)}, {"k", o.k}, {"t_max", o.t_max}};
  if (spec.alpha() > 0 && spec.tau() > 0 && spec.tau() < 1) {
    bounds = degree_bound_sequences(spec.alpha(), spec.tau(), spec.beta(), o.k, o.t_max);
    j["log_correction"] = bounds->log_correction;
    j["correction_bound_log"] = correction_bound_log(spec.tau());
    j["final_ratio"] = bounds->ratio.back();
  } else {
    err << "asymptotics: bound recursions need alpha > 0 and 0 < tau < 1; "
           "reporting the simulation only\n";
  }
  std::vector<DegreeCurvePoint> curve;
  if (o.replicates > 0) {
    curve = monte_carlo_degree_mean(spec, o.k, o.t_max, o.replicates,
                                    o.seed.value_or(0), *o.jobs);
  }
  if (o.count && *o.count > 0) {
    GenConfig gen;
    gen.count = *o.count;
    gen.sizes = ExplicitSizes{std::vector<std::size_t>(gen.count, o.t_max)};
    // Kept apart from the degree-curve streams.
    gen.seed = mix64(o.seed.value_or(0) ^ 0x7461696cULL);
    gen.jobs = *o.jobs;
    const StructureReport r = structure_report(generate_dataset(spec, gen));
    const TailFit tail = tail_exponent(ccdf(r.degree), o.x_min);
    j["tail"] = {{"threads", gen.count}, {"x_min", o.x_min},
                 {"slope", tail.slope}, {"points", tail.points}};
  }
  CommandOutput out;
  std::ostringstream csv;
  if (bounds) {
    write_degree_curve_csv(csv, *bounds, curve, times);
  } else {
    csv << "t,lower,upper,empirical_mean,ci_low,ci_high\n";
    char buf[256];
    for (const auto& p : curve) {
      std::snprintf(buf, sizeof buf, "%zu,,,%.17g,%.17g,%.17g\n", p.t, p.mean,
                    p.ci_low, p.ci_high);
      csv << buf;
    }
  }
  out.artifacts = {{"degree_bounds.csv", csv.str()},
                   {"asymptotics.json", dump(j)}};
  out.primary = json_format(o, false) ? 1 : 0;
  return out;
}

std::size_t parse_jobs(const std::string& s) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw UsageError("invalid THREADTREE_JOBS '" + s + "'");
  }
  return v;
}

void emit(const CommandOutput& result, const Options& o, std::ostream& out,
          std::ostream& err) {
  if (o.out_dir.empty()) {
    out << result.artifacts[result.primary].content;
    return;
  }
  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  for (const auto& a : result.artifacts) {
    const auto path = dir / a.name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << a.content;
    if (!f) throw std::runtime_error("cannot write " + path.string());
    err << "wrote " << path.string() << '\n';
  }
}

}  // namespace

CliEnvironment CliEnvironment::from_process() {
  CliEnvironment env;
  if (const char* v = std::getenv("THREADTREE_OUT")) env.out_dir = v;
  if (const char* v = std::getenv("THREADTREE_JOBS")) env.jobs = v;
  return env;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, const CliEnvironment& env) {
  CLI::App app{"Growth models for discussion threads", "threadtree"};
  app.require_subcommand(1);
  Options o;
  std::size_t jobs_flag = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Master random seed");
    sub->add_option("--out", o.out_dir, "Output directory");
    sub->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", jobs_flag, "Worker threads (0 = all cores)");
  };
  auto input = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("input", o.input, "Dataset (.jsonl or .csv)");
    if (required) opt->required();
    sub->add_flag("--strict", o.strict, "Abort on the first malformed line");
  };
  auto fitting = [&](CLI::App* sub) {
    sub->add_option("--sample-size", o.sample_size, "Threads per (re)sample");
    sub->add_option("--restarts", o.restarts, "Random restarts per fit");
  };
  auto params = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha);
    sub->add_option("--tau", o.tau);
    sub->add_option("--beta", o.beta);
    sub->add_option("--log-beta", o.log_beta, "Natural log of beta");
    sub->add_option("--sampler", o.sampler)
        ->check(CLI::IsMember({"composition", "inverse-cdf"}));
  };
  const std::vector<std::string> model_names = {"fm", "no-alpha", "no-tau",
                                                "no-bias", "all"};
  auto model = [&](CLI::App* sub) {
    sub->add_option("--model", o.model)->check(CLI::IsMember(model_names));
  };

  auto* fit_cmd = app.add_subcommand("fit", "Maximum-likelihood fit");
  common(fit_cmd), input(fit_cmd, true), fitting(fit_cmd), model(fit_cmd);

  auto* boot_cmd = app.add_subcommand("bootstrap", "Bootstrap fits");
  common(boot_cmd), input(boot_cmd, true), fitting(boot_cmd), model(boot_cmd);
  boot_cmd->add_option("--replicates", o.replicates);

  auto* cmp_cmd = app.add_subcommand("compare", "LRT and ANOVA/Tukey over all models");
  common(cmp_cmd), input(cmp_cmd, true), fitting(cmp_cmd), model(cmp_cmd);
  cmp_cmd->add_option("--replicates", o.replicates);

  auto* gen_cmd = app.add_subcommand("generate", "Simulate a corpus");
  common(gen_cmd), params(gen_cmd), model(gen_cmd);
  gen_cmd->add_option("--sizes-from", o.sizes_from, "Copy the size distribution of a dataset");
  gen_cmd->add_option("--size", o.size, "Fixed thread size");
  gen_cmd->add_option("--count", o.count, "Number of threads");
  gen_cmd->add_flag("--strict", o.strict);

  auto* met_cmd = app.add_subcommand("metrics", "Structure tables");
  auto* evo_cmd = app.add_subcommand("evolve", "Width/depth evolution tables");
  for (auto* sub : {met_cmd, evo_cmd}) {
    common(sub), input(sub, true), params(sub), model(sub);
    sub->add_option("--synthetic", o.synthetic, "Dataset to compare against");
    sub->add_flag("--simulate", o.simulate, "Compare against a matched simulation");
  }

  auto* res_cmd = app.add_subcommand("residuals", "Parameter-recovery experiment");
  common(res_cmd), model(res_cmd), input(res_cmd, false);
  res_cmd->add_option("--restarts", o.restarts);
  res_cmd->add_option("--experiments", o.experiments);
  res_cmd->add_option("--thread-counts", o.thread_counts)->delimiter(',');

  auto* asy_cmd = app.add_subcommand("asymptotics", "Degree bounds and tail exponent");
  common(asy_cmd), params(asy_cmd), model(asy_cmd);
  asy_cmd->add_option("--k", o.k);
  asy_cmd->add_option("--t-max", o.t_max);
  asy_cmd->add_option("--replicates", o.replicates);
  asy_cmd->add_option("--count", o.count, "Threads for the tail fit");
  asy_cmd->add_option("--x-min", o.x_min);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    auto* sub = app.get_subcommands().front();
    if (sub->count("--jobs") > 0) {
      o.jobs = jobs_flag;
    } else if (env.jobs) {
      o.jobs = parse_jobs(*env.jobs);
    } else {
      o.jobs = 0;
    }
    if (*o.jobs == 0) o.jobs = default_jobs();
    if (o.out_dir.empty() && env.out_dir && sub->count("--out") == 0) {
      o.out_dir = *env.out_dir;
    }
    const std::string name = sub->get_name();
    if ((name == "generate" || name == "bootstrap") && !o.seed) {
      throw UsageError(name + " requires --seed");
    }
    using Handler = CommandOutput (*)(const Options&, std::ostream&);
    static const std::map<std::string, Handler> handlers = {
        {"fit", cmd_fit},           {"bootstrap", cmd_bootstrap},
        {"compare", cmd_compare},   {"generate", cmd_generate},
        {"metrics", cmd_metrics},   {"evolve", cmd_evolve},
        {"residuals", cmd_residuals}, {"asymptotics", cmd_asymptotics}};
    emit(handlers.at(name)(o, err), o, out, err);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IngestError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIngest;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCompute;
  }
}

}  // namespace threadtree
