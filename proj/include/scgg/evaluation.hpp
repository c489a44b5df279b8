#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "scgg/graph.hpp"
#include "scgg/rng.hpp"

namespace scgg {

// Anything that completes an initial graph with m new nodes.
using Completer = std::function<Graph(const Graph& g0, int m, Rng& rng)>;

struct PerGraphStats {
  int graph_id = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

// Normalized-GED statistics per test graph plus dataset-level aggregates:
// aggregate_mean is the mean of the per-graph means, aggregate_std the mean
// of the per-graph standard deviations.
struct EvalReport {
  std::vector<PerGraphStats> per_graph;
  double aggregate_mean = 0.0;
  double aggregate_std = 0.0;
  int m = 0;
  int repetitions = 0;
};

// For each test graph, `repetitions` times: remove a fresh random m-subset,
// run the completer on the remainder, and score the completed graph against
// the ground truth with normalized GED. Graphs with <= m nodes are excluded
// with a warning. Deterministic given seed (per-task derived streams).
EvalReport evaluate_completer(const Completer& completer, const std::vector<Graph>& test_graphs, int m,
                              int repetitions, std::uint64_t seed);

// Seeded uniform split into (train, test); train gets floor(frac * n).
std::pair<std::vector<Graph>, std::vector<Graph>> split_dataset(const std::vector<Graph>& graphs,
                                                                double train_frac, std::uint64_t seed);

// One row per graph (id, mean, std) plus a trailing summary row.
std::string eval_report_csv(const EvalReport& report);

}  // namespace scgg
