#include "scgg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "scgg/ged.hpp"
#include "scgg/log.hpp"

namespace scgg {

EvalReport evaluate_completer(const Completer& completer, const std::vector<Graph>& test_graphs, int m,
                              int repetitions, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("evaluate_completer: m must be positive");
  if (repetitions < 1) throw std::invalid_argument("evaluate_completer: repetitions must be positive");

  EvalReport report;
  report.m = m;
  report.repetitions = repetitions;

  constexpr std::uint64_t kTaskStride = 1u << 20;
  for (std::size_t gi = 0; gi < test_graphs.size(); ++gi) {
    const Graph& truth = test_graphs[gi];
    if (truth.num_nodes() <= m) {
      log_warn("evaluate: skipping graph " + std::to_string(gi) + " with " +
               std::to_string(truth.num_nodes()) + " nodes (needs > m = " + std::to_string(m) + ")");
      continue;
    }
    std::vector<double> scores;
    scores.reserve(static_cast<std::size_t>(repetitions));
    for (int rep = 0; rep < repetitions; ++rep) {
      Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(gi) * kTaskStride + static_cast<std::uint64_t>(rep));
      auto removed = rng.sample_without_replacement(truth.num_nodes(), m);
      std::vector<char> gone(static_cast<std::size_t>(truth.num_nodes()), 0);
      for (int v : removed) gone[static_cast<std::size_t>(v)] = 1;
      std::vector<int> kept;
      kept.reserve(static_cast<std::size_t>(truth.num_nodes() - m));
      for (int v = 0; v < truth.num_nodes(); ++v)
        if (!gone[static_cast<std::size_t>(v)]) kept.push_back(v);
      const Graph g0 = induced_subgraph(truth, kept);
      const Graph completed = completer(g0, m, rng);
      scores.push_back(normalized_ged(completed, truth));
    }
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    double var = 0.0;
    for (double s : scores) var += (s - mean) * (s - mean);
    var /= static_cast<double>(scores.size());
    report.per_graph.push_back({static_cast<int>(gi), mean, std::sqrt(var)});
  }

  if (!report.per_graph.empty()) {
    for (const auto& pg : report.per_graph) {
      report.aggregate_mean += pg.mean;
      report.aggregate_std += pg.stddev;
    }
    report.aggregate_mean /= static_cast<double>(report.per_graph.size());
    report.aggregate_std /= static_cast<double>(report.per_graph.size());
  }
  return report;
}

std::pair<std::vector<Graph>, std::vector<Graph>> split_dataset(const std::vector<Graph>& graphs,
                                                                double train_frac, std::uint64_t seed) {
  if (graphs.size() < 2) throw std::invalid_argument("split_dataset: need at least 2 graphs");
  if (train_frac <= 0.0 || train_frac >= 1.0)
    throw std::invalid_argument("split_dataset: train_frac must be in (0, 1)");
  Rng rng(seed);
  auto order = rng.permutation(static_cast<int>(graphs.size()));
  const auto n_train = static_cast<std::size_t>(train_frac * static_cast<double>(graphs.size()));
  std::vector<int> train_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<int> test_idx(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  std::pair<std::vector<Graph>, std::vector<Graph>> out;
  for (int i : train_idx) out.first.push_back(graphs[static_cast<std::size_t>(i)]);
  for (int i : test_idx) out.second.push_back(graphs[static_cast<std::size_t>(i)]);
  return out;
}

std::string eval_report_csv(const EvalReport& report) {
  std::string out = "graph_id,mean_nged,std_nged\n";
  char buf[96];
  for (const auto& pg : report.per_graph) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f\n", pg.graph_id, pg.mean, pg.stddev);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "all,%.6f,%.6f\n", report.aggregate_mean, report.aggregate_std);
  out += buf;
  return out;
}

}  // namespace scgg
