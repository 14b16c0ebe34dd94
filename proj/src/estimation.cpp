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

#include "threadtree/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "threadtree/generator.hpp"
#include "threadtree/optimize.hpp"
#include "threadtree/parallel.hpp"

namespace threadtree {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Starts on a pinned boundary are pulled this far inside (in optimizer
// coordinates) so the logistic/exp map still has a usable slope there.
constexpr double kStartBound = 12;
constexpr double kStartFloor = 1e-3;

OptimOptions optim_options(const FitConfig& cfg) {
  OptimOptions o;
  o.f_tol = cfg.f_tol;
  o.g_tol = cfg.g_tol;
  o.max_iterations = cfg.max_iterations;
  o.lower = -Parameterization::kBound;
  o.upper = Parameterization::kBound;
  return o;
}

std::vector<std::size_t> draw_indices(std::size_t population, std::size_t n,
                                      Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = rng.below(population);
  return idx;
}

void require_informative(const SufficientStats& stats) {
  if (stats.observations() == 0) {
    throw std::invalid_argument(
        "dataset has no thread with 3 or more nodes; the likelihood is "
        "constant");
  }
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

ParameterSummary mean_sd(const std::vector<double>& v) {
  ParameterSummary s;
  if (v.empty()) return {kNaN, kNaN};
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

std::size_t variant_index(Variant v) {
  return static_cast<std::size_t>(v);
}

}  // namespace

ModelSpec ParameterBox::draw(Variant variant, Rng& rng) const {
  const double alpha = rng.uniform(alpha_lo, alpha_hi);
  const double tau = rng.uniform(tau_lo, tau_hi);
  const double beta = rng.uniform(beta_lo, beta_hi);
  return ModelSpec::constrained(variant, alpha, tau, beta);
}

ModelSpec ParameterBox::draw_start(Variant variant, Rng& rng) const {
  const double alpha = std::max(rng.uniform(alpha_lo, alpha_hi), kStartFloor);
  const double tau = std::min(rng.uniform(tau_lo, tau_hi), 1 - kStartFloor);
  const double beta = std::max(rng.uniform(beta_lo, beta_hi), kStartFloor);
  return ModelSpec::constrained(variant, alpha, tau, beta);
}

FitResult fit_stats(const SufficientStats& stats, Variant variant,
                    const FitConfig& cfg, Rng& rng,
                    const std::vector<ModelSpec>& extra_starts) {
  require_informative(stats);
  if (cfg.restarts < 1 && extra_starts.empty()) {
    throw std::invalid_argument("fit: restarts must be >= 1");
  }
  const Objective objective(stats, variant);
  const Parameterization& param = objective.parameterization();
  const OptimOptions opts = optim_options(cfg);
  const GradientFunction fn = [&objective](std::span<const double> x,
                                           std::span<double> g) {
    return objective.value_and_gradient(x, g);
  };

  std::vector<ModelSpec> starts;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    starts.push_back(cfg.box.draw_start(variant, rng));
  }
  for (const ModelSpec& s : extra_starts) {
    starts.push_back(ModelSpec::constrained(variant, s.alpha(), s.tau(),
                                            s.beta()));
  }

  FitResult result;
  result.node_count = stats.observations();
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  bool best_converged = false;
  for (const ModelSpec& start : starts) {
    std::vector<double> x0 = param.from_spec(start);
    for (double& v : x0) v = std::clamp(v, -kStartBound, kStartBound);
    const OptimResult r = minimize_bfgs(fn, x0, opts);
    RestartRecord rec{param.to_spec(x0), param.to_spec(r.x), r.value,
                      r.converged, r.iterations, r.method};
    result.restarts.push_back(rec);
    if (r.value < best) {
      best = r.value;
      best_x = r.x;
      best_converged = r.converged;
    }
  }
  if (best_x.empty()) {
    // Every restart ended at an infeasible point.
    result.spec = result.restarts.front().final;
    result.neg_log_lik = std::numeric_limits<double>::infinity();
    return result;
  }
  result.spec = param.to_spec(best_x);
  result.neg_log_lik = best;
  result.converged = best_converged;
  return result;
}

std::array<FitResult, 4> fit_nested(const SufficientStats& stats,
                                    const FitConfig& cfg, Rng& rng) {
  std::array<FitResult, 4> out;
  std::vector<ModelSpec> reduced_optima;
  for (Variant v : {Variant::kNoAlpha, Variant::kNoTau, Variant::kNoBias}) {
    out[variant_index(v)] = fit_stats(stats, v, cfg, rng);
    reduced_optima.push_back(out[variant_index(v)].spec);
  }
  FitResult full = fit_stats(stats, Variant::kFull, cfg, rng, reduced_optima);
  // A reduced optimum is itself a full-model point with one parameter on the
  // boundary; keep it when the interior search cannot beat it.
  for (const ModelSpec& r : reduced_optima) {
    const ModelSpec as_full(Variant::kFull, r.alpha(), r.tau(), r.beta());
    const double v = evaluate(stats, as_full);
    if (v < full.neg_log_lik) {
      full.spec = as_full;
      full.neg_log_lik = v;
      full.converged = true;
      full.restarts.push_back({as_full, as_full, v, true, 0, "nested"});
    }
  }
  out[variant_index(Variant::kFull)] = std::move(full);
  return out;
}

FitResult fit(const ThreadDataset& data, Variant variant,
              const FitConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("fit: empty dataset");
  const ObservationCache cache(data);
  Rng rng = Rng::stream(cfg.seed, 0);
  SufficientStats stats;
  if (cfg.sample_size > 0) {
    stats = cache.sample(draw_indices(data.count(), cfg.sample_size, rng));
  } else {
    stats = cache.all();
  }
  return fit_stats(stats, variant, cfg, rng);
}

std::array<FitResult, 4> fit_all(const ThreadDataset& data,
                                 const FitConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("fit: empty dataset");
  const ObservationCache cache(data);
  Rng rng = Rng::stream(cfg.seed, 0);
  const SufficientStats stats =
      cfg.sample_size > 0
          ? cache.sample(draw_indices(data.count(), cfg.sample_size, rng))
          : cache.all();
  return fit_nested(stats, cfg, rng);
}

FitResult bootstrap_fit(const ThreadDataset& data, Variant variant,
                        const FitConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("bootstrap: empty dataset");
  const ObservationCache cache(data);
  const SufficientStats full_stats = cache.all();
  Rng rng = Rng::stream(cfg.seed, 0);
  FitResult result = fit_stats(full_stats, variant, cfg, rng);

  const std::size_t n = cfg.sample_size > 0 ? cfg.sample_size : data.count();
  result.replicates.resize(cfg.bootstrap_replicates);
  parallel_for(cfg.bootstrap_replicates, cfg.jobs, [&](std::size_t r) {
    Rng rep_rng = Rng::stream(cfg.seed, r + 1);
    const SufficientStats stats =
        cache.sample(draw_indices(data.count(), n, rep_rng));
    ReplicateRecord rec;
    rec.replicate = r;
    rec.node_count = stats.observations();
    try {
      const FitResult f = fit_stats(stats, variant, cfg, rep_rng);
      rec.spec = f.spec;
      rec.neg_log_lik = f.neg_log_lik;
      rec.converged = f.converged && std::isfinite(f.neg_log_lik);
    } catch (const std::invalid_argument&) {
      // A resample made only of tiny threads carries no information.
      rec.spec = ModelSpec::uniform();
      rec.neg_log_lik = kNaN;
      rec.converged = false;
    }
    result.replicates[r] = rec;
  });
  return result;
}

std::array<FitResult, 4> bootstrap_all(const ThreadDataset& data,
                                       const FitConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("bootstrap: empty dataset");
  const ObservationCache cache(data);
  const SufficientStats full_stats = cache.all();
  Rng rng = Rng::stream(cfg.seed, 0);
  std::array<FitResult, 4> out = fit_nested(full_stats, cfg, rng);

  const std::size_t n = cfg.sample_size > 0 ? cfg.sample_size : data.count();
  for (auto& f : out) f.replicates.resize(cfg.bootstrap_replicates);
  parallel_for(cfg.bootstrap_replicates, cfg.jobs, [&](std::size_t r) {
    Rng rep_rng = Rng::stream(cfg.seed, r + 1);
    const SufficientStats stats =
        cache.sample(draw_indices(data.count(), n, rep_rng));
    std::array<FitResult, 4> fits;
    bool ok = true;
    try {
      fits = fit_nested(stats, cfg, rep_rng);
    } catch (const std::invalid_argument&) {
      ok = false;
    }
    for (std::size_t v = 0; v < 4; ++v) {
      ReplicateRecord rec;
      rec.replicate = r;
      rec.node_count = stats.observations();
      if (ok) {
        rec.spec = fits[v].spec;
        rec.neg_log_lik = fits[v].neg_log_lik;
        rec.converged = fits[v].converged && std::isfinite(rec.neg_log_lik);
      } else {
        rec.neg_log_lik = kNaN;
      }
      out[v].replicates[r] = rec;
    }
  });
  return out;
}

BootstrapSummary summarize(const std::vector<ReplicateRecord>& replicates) {
  std::vector<double> a, t, b, lb, nll;
  for (const auto& r : replicates) {
    if (!r.converged) continue;
    a.push_back(r.spec.alpha());
    t.push_back(r.spec.tau());
    b.push_back(r.spec.beta());
    if (r.spec.beta() > 0) lb.push_back(std::log(r.spec.beta()));
    nll.push_back(r.neg_log_lik);
  }
  BootstrapSummary s;
  s.alpha = mean_sd(a);
  s.tau = mean_sd(t);
  s.beta = mean_sd(b);
  s.log_beta = mean_sd(lb);
  s.neg_log_lik = mean_sd(nll);
  s.converged = a.size();
  s.total = replicates.size();
  return s;
}

void write_replicates_csv(std::ostream& out, Variant variant,
                          const std::vector<ReplicateRecord>& replicates,
                          bool header) {
  if (header) out << "replicate,variant,alpha,tau,beta,neg_log_lik,converged\n";
  char buf[256];
  for (const auto& r : replicates) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%.17g,%.17g,%.17g,%.17g,%d\n",
                  r.replicate, std::string(to_string(variant)).c_str(),
                  r.spec.alpha(), r.spec.tau(), r.spec.beta(), r.neg_log_lik,
                  r.converged ? 1 : 0);
    out << buf;
  }
}

ResidualTable residual_experiment(const ResidualConfig& cfg) {
  struct Job {
    Variant variant;
    std::size_t count_index;
    std::size_t experiment;
  };
  std::vector<Job> jobs;
  for (Variant v : cfg.variants) {
    for (std::size_t c = 0; c < cfg.thread_counts.size(); ++c) {
      for (std::size_t e = 0; e < cfg.experiments; ++e) jobs.push_back({v, c, e});
    }
  }

  ResidualTable table;
  table.rows.resize(jobs.size());
  parallel_for(jobs.size(), cfg.jobs, [&](std::size_t j) {
    const Job& job = jobs[j];
    const std::uint64_t variant_seed =
        rng_stream_seed(cfg.seed, 1000 + variant_index(job.variant));
    // theta* depends on (variant, experiment) only, so every thread count
    // is scored against the same truths.
    Rng truth_rng = Rng::stream(variant_seed, job.experiment);
    const ModelSpec truth = cfg.box.draw(job.variant, truth_rng);
    const std::size_t n = cfg.thread_counts[job.count_index];

    GenConfig gen;
    gen.count = n;
    gen.sizes = cfg.sizes;
    gen.seed = rng_stream_seed(variant_seed,
                               (job.count_index + 1) * 1000003 + job.experiment);
    const ThreadDataset data = generate_dataset(truth, gen);

    FitConfig fc;
    fc.restarts = cfg.restarts;
    fc.box = cfg.box;
    Rng fit_rng = Rng::stream(gen.seed, 0);
    ResidualRow row{job.variant, n, job.experiment, truth, truth,
                    kNaN, kNaN, kNaN, false};
    try {
      const FitResult f = fit_stats(sufficient_stats(data), job.variant, fc,
                                    fit_rng);
      row.estimate = f.spec;
      row.converged = f.converged;
      if (job.variant != Variant::kNoAlpha) {
        row.alpha_residual = truth.alpha() - f.spec.alpha();
      }
      if (job.variant != Variant::kNoTau) {
        row.tau_residual = truth.tau() - f.spec.tau();
      }
      if (job.variant != Variant::kNoBias) {
        row.log_beta_residual =
            std::log(truth.beta()) - std::log(f.spec.beta());
      }
    } catch (const std::invalid_argument&) {
    }
    table.rows[j] = row;
  });

  for (Variant v : cfg.variants) {
    for (std::size_t n : cfg.thread_counts) {
      for (const char* name : {"alpha", "tau", "log_beta"}) {
        std::vector<double> vals;
        for (const auto& r : table.rows) {
          if (r.variant != v || r.thread_count != n) continue;
          const std::string p = name;
          const double x = p == "alpha"  ? r.alpha_residual
                           : p == "tau" ? r.tau_residual
                                        : r.log_beta_residual;
          if (std::isfinite(x)) vals.push_back(x);
        }
        if (vals.empty()) continue;
        double mean_abs = 0;
        for (double x : vals) mean_abs += std::abs(x);
        mean_abs /= static_cast<double>(vals.size());
        table.summary.push_back({v, n, name, quantile(vals, 0.25),
                                 quantile(vals, 0.5), quantile(vals, 0.75),
                                 mean_abs, vals.size()});
      }
    }
  }
  return table;
}

void write_residuals_csv(std::ostream& out, const ResidualTable& table) {
  out << "variant,threads,experiment,alpha_true,tau_true,beta_true,"
         "alpha_hat,tau_hat,beta_hat,alpha_residual,tau_residual,"
         "log_beta_residual,converged\n";
  char buf[512];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf,
                  "%s,%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%d\n",
                  std::string(to_string(r.variant)).c_str(), r.thread_count,
                  r.experiment, r.truth.alpha(), r.truth.tau(), r.truth.beta(),
                  r.estimate.alpha(), r.estimate.tau(), r.estimate.beta(),
                  r.alpha_residual, r.tau_residual, r.log_beta_residual,
                  r.converged ? 1 : 0);
    out << buf;
  }
}

void write_residual_summary_csv(std::ostream& out, const ResidualTable& table) {
  out << "variant,threads,parameter,q25,median,q75,mean_abs,count\n";
  char buf[256];
  for (const auto& s : table.summary) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%s,%.17g,%.17g,%.17g,%.17g,%zu\n",
                  std::string(to_string(s.variant)).c_str(), s.thread_count,
                  s.parameter.c_str(), s.q25, s.median, s.q75, s.mean_abs,
                  s.count);
    out << buf;
  }
}

}  // namespace threadtree
