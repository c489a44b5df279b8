#include "scgg/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace scgg {

Graph::Graph(int num_nodes) : num_nodes_(num_nodes) {
  if (num_nodes < 0) throw std::invalid_argument("Graph: negative node count");
}

bool Graph::add_edge(int i, int j) {
  if (i == j) throw std::invalid_argument("Graph::add_edge: self-loop at node " + std::to_string(i));
  if (i < 0 || j < 0 || i >= num_nodes_ || j >= num_nodes_)
    throw std::invalid_argument("Graph::add_edge: endpoint out of range");
  return edges_.insert({std::min(i, j), std::max(i, j)}).second;
}

bool Graph::has_edge(int i, int j) const {
  if (i == j) return false;
  return edges_.count({std::min(i, j), std::max(i, j)}) > 0;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(num_nodes_), 0);
  for (const auto& [a, b] : edges_) {
    ++deg[static_cast<std::size_t>(a)];
    ++deg[static_cast<std::size_t>(b)];
  }
  return deg;
}

int Graph::max_degree() const {
  const auto deg = degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::vector<std::vector<int>> Graph::adjacency_list() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_nodes_));
  for (const auto& [a, b] : edges_) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  return adj;
}

double Graph::density() const {
  if (num_nodes_ < 2) return 0.0;
  const double pairs = 0.5 * num_nodes_ * (num_nodes_ - 1);
  return static_cast<double>(num_edges()) / pairs;
}

Graph generate_grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("generate_grid: dimensions must be positive");
  Graph g(rows * cols);
  const auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1));
      if (r + 1 < rows) g.add_edge(id(r, c), id(r + 1, c));
    }
  }
  return g;
}

Graph erdos_renyi(int n, double p, Rng& rng) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) g.add_edge(i, j);
  return g;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& nodes) {
  std::vector<int> pos(static_cast<std::size_t>(g.num_nodes()), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) pos[static_cast<std::size_t>(nodes[k])] = static_cast<int>(k);
  Graph sub(static_cast<int>(nodes.size()));
  for (const auto& [a, b] : g.edges()) {
    const int pa = pos[static_cast<std::size_t>(a)];
    const int pb = pos[static_cast<std::size_t>(b)];
    if (pa >= 0 && pb >= 0) sub.add_edge(pa, pb);
  }
  return sub;
}

Graph relabel(const Graph& g, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != g.num_nodes())
    throw std::invalid_argument("relabel: permutation size mismatch");
  Graph out(g.num_nodes());
  for (const auto& [a, b] : g.edges())
    out.add_edge(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
  return out;
}

}  // namespace scgg
