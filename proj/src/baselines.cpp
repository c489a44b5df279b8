#include "scgg/baselines.hpp"

#include <stdexcept>

#include "scgg/log.hpp"

namespace scgg {

Graph evograph_complete(const Graph& g0, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("evograph_complete: m must be positive");
  const int n = g0.num_nodes();
  if (g0.num_edges() == 0)
    log_warn("evograph: initial graph has no edges, degree-proportional choice degenerates to uniform");

  Graph g(n + m);
  for (const auto& [a, b] : g0.edges()) g.add_edge(a, b);

  std::vector<int> degree(static_cast<std::size_t>(n + m), 0);
  {
    const auto d0 = g0.degrees();
    for (int i = 0; i < n; ++i) degree[static_cast<std::size_t>(i)] = d0[static_cast<std::size_t>(i)];
  }
  std::vector<int> current;
  current.reserve(static_cast<std::size_t>(n + m));
  for (int i = 0; i < n; ++i) current.push_back(i);
  std::vector<int> candidates;
  for (int k = 0; k < m; ++k) candidates.push_back(n + k);
  long long degree_sum = 2LL * g0.num_edges();

  // While unattached candidates remain, every edge must attach one of them,
  // so exactly m edges are added before the stop condition fires.
  while (!candidates.empty()) {
    // weight degree + 1 keeps isolated current nodes reachable
    long long ticket = static_cast<long long>(rng.uniform_int(
        static_cast<std::uint64_t>(degree_sum + static_cast<long long>(current.size()))));
    int endpoint = -1;
    for (int node : current) {
      ticket -= degree[static_cast<std::size_t>(node)] + 1;
      if (ticket < 0) {
        endpoint = node;
        break;
      }
    }
    const std::size_t pick = static_cast<std::size_t>(rng.uniform_index(static_cast<int>(candidates.size())));
    const int fresh = candidates[pick];
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
    g.add_edge(endpoint, fresh);
    degree[static_cast<std::size_t>(endpoint)] += 1;
    degree[static_cast<std::size_t>(fresh)] += 1;
    degree_sum += 2;
    current.push_back(fresh);
  }
  return g;
}

Graph random_density_complete(const Graph& g0, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("random_density_complete: m must be positive");
  const int n = g0.num_nodes();
  const double p = g0.density();
  Graph g(n + m);
  for (const auto& [a, b] : g0.edges()) g.add_edge(a, b);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k)
      if (rng.bernoulli(p)) g.add_edge(i, n + k);
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k)
      if (rng.bernoulli(p)) g.add_edge(n + j, n + k);
  return g;
}

}  // namespace scgg
