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

#ifndef THREADTREE_METRICS_HPP_
#define THREADTREE_METRICS_HPP_

#include <cstddef>
#include <map>
#include <ostream>
#include <utility>
#include <vector>

#include "threadtree/thread_core.hpp"

namespace threadtree {

// value -> probability mass. Support values are nonnegative integers.
using Histogram = std::map<std::size_t, double>;

// (x, P(X >= x)) for every support value x of the histogram.
std::vector<std::pair<std::size_t, double>> ccdf(const Histogram& h);

// 1/2 sum |p - q| over the union of supports.
double total_variation(const Histogram& p, const Histogram& q);

struct DepthBySize {
  std::size_t size;
  std::size_t threads;
  // Mean over threads of the per-thread mean node depth (root included).
  double mean_depth;
  // Mean over threads of the per-thread maximum depth.
  double mean_max_depth;
};

struct LogBin {
  double lo, hi;  // [lo, hi) in thread size
  std::size_t threads;
  double mean_size;
  double mean_depth;
  double mean_max_depth;
};

struct StructureReport {
  std::size_t threads = 0;
  std::size_t nodes = 0;
  // Final-time degrees of all nodes, root included.
  Histogram degree;
  // Strict-descendant counts of non-root nodes.
  Histogram subtree_size;
  Histogram size;
  std::vector<DepthBySize> depth_by_size;
};

StructureReport structure_report(const ThreadDataset& data);

// depth_by_size grouped into logarithmic size bins, `per_decade` per factor
// of ten, starting at size 1.
std::vector<LogBin> log_binned_depths(const StructureReport& report,
                                      std::size_t per_decade = 5);

struct EvolutionPoint {
  std::size_t width;
  double mean_depth;
};

struct EvolutionAggregate {
  std::size_t t;      // nodes in the tree
  std::size_t alive;  // threads that reached t nodes
  double mean_width;
  double mean_depth;
};

struct EvolutionTrace {
  // per_thread[i][t-1] describes thread i after t nodes. Empty unless
  // requested.
  std::vector<std::vector<EvolutionPoint>> per_thread;
  std::vector<EvolutionAggregate> aggregate;

  // Aggregate point at t nodes, or nullptr when no thread reached t.
  const EvolutionAggregate* at(std::size_t t) const;
};

inline constexpr std::size_t kEvolutionMarkers[] = {10, 100, 1000};

// Width (largest level population) and mean node depth of every thread after
// each arrival, averaged over the threads still growing at that size.
EvolutionTrace evolution_trace(const ThreadDataset& data,
                               bool keep_per_thread = false);

struct OverlayRow {
  std::size_t x;
  double real;
  double synthetic;
};

struct ReportDivergence {
  double degree_tv = 0;
  double subtree_tv = 0;
  double size_tv = 0;
  // Mean |mean_depth_real - mean_depth_synth| over sizes present in both.
  double depth_gap = 0;
  std::vector<OverlayRow> degree_overlay;
  std::vector<OverlayRow> subtree_overlay;
};

ReportDivergence compare_reports(const StructureReport& real,
                                 const StructureReport& synthetic);

// CSV writers (plot-ready tables).
void write_histogram_csv(std::ostream& out, const Histogram& h,
                         const char* value_column);
void write_depth_csv(std::ostream& out, const StructureReport& r);
void write_log_bins_csv(std::ostream& out, const std::vector<LogBin>& bins);
void write_evolution_csv(std::ostream& out, const EvolutionTrace& trace);
void write_overlay_csv(std::ostream& out, const std::vector<OverlayRow>& rows,
                       const char* value_column);

}  // namespace threadtree

#endif  // THREADTREE_METRICS_HPP_
