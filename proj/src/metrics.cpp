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

#include "threadtree/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace threadtree {
namespace {

Histogram normalize(const std::map<std::size_t, std::size_t>& counts) {
  double total = 0;
  for (const auto& [v, c] : counts) total += static_cast<double>(c);
  Histogram h;
  if (total == 0) return h;
  for (const auto& [v, c] : counts) h[v] = static_cast<double>(c) / total;
  return h;
}

double mass(const Histogram& h, std::size_t x) {
  const auto it = h.find(x);
  return it == h.end() ? 0.0 : it->second;
}

std::vector<OverlayRow> overlay(const Histogram& a, const Histogram& b) {
  std::set<std::size_t> support;
  for (const auto& [x, p] : a) support.insert(x);
  for (const auto& [x, p] : b) support.insert(x);
  std::vector<OverlayRow> rows;
  for (std::size_t x : support) rows.push_back({x, mass(a, x), mass(b, x)});
  return rows;
}

}  // namespace

std::vector<std::pair<std::size_t, double>> ccdf(const Histogram& h) {
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(h.size());
  double tail = 0;
  for (auto it = h.rbegin(); it != h.rend(); ++it) {
    tail += it->second;
    out.emplace_back(it->first, tail);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double total_variation(const Histogram& p, const Histogram& q) {
  double sum = 0;
  for (const auto& row : overlay(p, q)) sum += std::abs(row.real - row.synthetic);
  return sum / 2;
}

StructureReport structure_report(const ThreadDataset& data) {
  std::map<std::size_t, std::size_t> degree_counts, subtree_counts;
  struct DepthAccum {
    std::size_t threads = 0;
    double mean_depth = 0;
    double max_depth = 0;
  };
  std::map<std::size_t, DepthAccum> by_size;

  StructureReport r;
  for (const ParentVector& pv : data.threads()) {
    const NodeDerived d = derive(pv);
    for (auto deg : d.degree) ++degree_counts[deg];
    for (std::size_t k = 1; k < d.subtree_descendants.size(); ++k) {
      ++subtree_counts[d.subtree_descendants[k]];
    }
    double depth_sum = 0;
    std::uint32_t depth_max = 0;
    for (auto dep : d.depth) {
      depth_sum += dep;
      depth_max = std::max(depth_max, dep);
    }
    auto& acc = by_size[pv.size()];
    ++acc.threads;
    acc.mean_depth += depth_sum / static_cast<double>(pv.size());
    acc.max_depth += depth_max;
    r.nodes += pv.size();
  }
  r.threads = data.count();
  r.degree = normalize(degree_counts);
  r.subtree_size = normalize(subtree_counts);
  r.size = normalize(data.size_histogram());
  for (const auto& [size, acc] : by_size) {
    const double n = static_cast<double>(acc.threads);
    r.depth_by_size.push_back(
        {size, acc.threads, acc.mean_depth / n, acc.max_depth / n});
  }
  return r;
}

std::vector<LogBin> log_binned_depths(const StructureReport& report,
                                      std::size_t per_decade) {
  std::vector<LogBin> bins;
  if (report.depth_by_size.empty() || per_decade == 0) return bins;
  const double ratio = std::pow(10.0, 1.0 / static_cast<double>(per_decade));
  std::size_t i = 0;
  const auto& rows = report.depth_by_size;
  for (int b = 0; i < rows.size(); ++b) {
    const double lo = std::pow(ratio, b);
    const double hi = std::pow(ratio, b + 1);
    LogBin bin{lo, hi, 0, 0, 0, 0};
    while (i < rows.size() && static_cast<double>(rows[i].size) < hi) {
      const double n = static_cast<double>(rows[i].threads);
      bin.threads += rows[i].threads;
      bin.mean_size += n * static_cast<double>(rows[i].size);
      bin.mean_depth += n * rows[i].mean_depth;
      bin.mean_max_depth += n * rows[i].mean_max_depth;
      ++i;
    }
    if (bin.threads == 0) continue;
    const double n = static_cast<double>(bin.threads);
    bin.mean_size /= n;
    bin.mean_depth /= n;
    bin.mean_max_depth /= n;
    bins.push_back(bin);
  }
  return bins;
}

const EvolutionAggregate* EvolutionTrace::at(std::size_t t) const {
  if (t == 0 || t > aggregate.size()) return nullptr;
  return &aggregate[t - 1];
}

EvolutionTrace evolution_trace(const ThreadDataset& data,
                               bool keep_per_thread) {
  EvolutionTrace trace;
  const std::size_t longest = data.max_size();
  std::vector<double> width_sum(longest, 0), depth_sum(longest, 0);
  std::vector<std::size_t> alive(longest, 0);
  std::vector<std::uint32_t> depth;
  std::vector<std::size_t> level_count;

  for (const ParentVector& pv : data.threads()) {
    std::vector<EvolutionPoint> points;
    if (keep_per_thread) points.reserve(pv.size());
    depth.assign(pv.size(), 0);
    level_count.assign(pv.size(), 0);
    level_count[0] = 1;
    std::size_t width = 1;
    double total_depth = 0;
    for (std::size_t t = 1; t <= pv.size(); ++t) {
      if (t > 1) {
        const std::uint32_t d = depth[pv.parent(t - 1) - 1] + 1;
        depth[t - 1] = d;
        width = std::max(width, ++level_count[d]);
        total_depth += d;
      }
      const double mean_depth = total_depth / static_cast<double>(t);
      width_sum[t - 1] += static_cast<double>(width);
      depth_sum[t - 1] += mean_depth;
      ++alive[t - 1];
      if (keep_per_thread) points.push_back({width, mean_depth});
    }
    if (keep_per_thread) trace.per_thread.push_back(std::move(points));
  }
  trace.aggregate.reserve(longest);
  for (std::size_t t = 1; t <= longest; ++t) {
    const double n = static_cast<double>(alive[t - 1]);
    trace.aggregate.push_back(
        {t, alive[t - 1], width_sum[t - 1] / n, depth_sum[t - 1] / n});
  }
  return trace;
}

ReportDivergence compare_reports(const StructureReport& real,
                                 const StructureReport& synthetic) {
  ReportDivergence d;
  d.degree_tv = total_variation(real.degree, synthetic.degree);
  d.subtree_tv = total_variation(real.subtree_size, synthetic.subtree_size);
  d.size_tv = total_variation(real.size, synthetic.size);
  d.degree_overlay = overlay(real.degree, synthetic.degree);
  d.subtree_overlay = overlay(real.subtree_size, synthetic.subtree_size);

  std::map<std::size_t, double> synth_depth;
  for (const auto& row : synthetic.depth_by_size) {
    synth_depth[row.size] = row.mean_depth;
  }
  double gap = 0;
  std::size_t shared = 0;
  for (const auto& row : real.depth_by_size) {
    const auto it = synth_depth.find(row.size);
    if (it == synth_depth.end()) continue;
    gap += std::abs(row.mean_depth - it->second);
    ++shared;
  }
  d.depth_gap = shared ? gap / static_cast<double>(shared) : 0.0;
  return d;
}

void write_histogram_csv(std::ostream& out, const Histogram& h,
                         const char* value_column) {
  out << value_column << ",probability,ccdf\n";
  char buf[128];
  for (const auto& [x, tail] : ccdf(h)) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", x, mass(h, x), tail);
    out << buf;
  }
}

void write_depth_csv(std::ostream& out, const StructureReport& r) {
  out << "size,threads,mean_depth,mean_max_depth\n";
  char buf[128];
  for (const auto& row : r.depth_by_size) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", row.size,
                  row.threads, row.mean_depth, row.mean_max_depth);
    out << buf;
  }
}

void write_log_bins_csv(std::ostream& out, const std::vector<LogBin>& bins) {
  out << "bin_lo,bin_hi,threads,mean_size,mean_depth,mean_max_depth\n";
  char buf[256];
  for (const auto& b : bins) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu,%.17g,%.17g,%.17g\n", b.lo,
                  b.hi, b.threads, b.mean_size, b.mean_depth, b.mean_max_depth);
    out << buf;
  }
}

void write_evolution_csv(std::ostream& out, const EvolutionTrace& trace) {
  out << "t,alive,mean_width,mean_depth,marker\n";
  char buf[128];
  for (const auto& a : trace.aggregate) {
    const bool marker = std::find(std::begin(kEvolutionMarkers),
                                  std::end(kEvolutionMarkers),
                                  a.t) != std::end(kEvolutionMarkers);
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%d\n", a.t, a.alive,
                  a.mean_width, a.mean_depth, marker ? 1 : 0);
    out << buf;
  }
}

void write_overlay_csv(std::ostream& out, const std::vector<OverlayRow>& rows,
                       const char* value_column) {
  out << value_column << ",real,synthetic\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", r.x, r.real,
                  r.synthetic);
    out << buf;
  }
}

}  // namespace threadtree
