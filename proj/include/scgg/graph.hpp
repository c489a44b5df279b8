#pragma once

#include <set>
#include <utility>
#include <vector>

#include "scgg/rng.hpp"

namespace scgg {

// Undirected simple graph: a node count plus a set of unordered edges.
// Edges are stored normalized as (min, max) pairs; self-loops are rejected.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int num_nodes);

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  // Inserts edge {i, j}; returns false if it was already present.
  // Throws std::invalid_argument on self-loops or out-of-range endpoints.
  bool add_edge(int i, int j);
  bool has_edge(int i, int j) const;

  const std::set<std::pair<int, int>>& edges() const { return edges_; }

  std::vector<int> degrees() const;
  int max_degree() const;
  std::vector<std::vector<int>> adjacency_list() const;

  // Fraction of the C(n,2) node pairs that are edges (0 for n < 2).
  double density() const;

  bool operator==(const Graph&) const = default;

 private:
  int num_nodes_ = 0;
  std::set<std::pair<int, int>> edges_;
};

// rows x cols lattice with edges between horizontal and vertical neighbors.
Graph generate_grid(int rows, int cols);

// G(n, p) random graph; every pair included independently with probability p.
Graph erdos_renyi(int n, double p, Rng& rng);

// Subgraph on `nodes`, relabeled so that nodes[k] becomes node k.
Graph induced_subgraph(const Graph& g, const std::vector<int>& nodes);

// Relabels node i to perm[i]; perm must be a permutation of [0, num_nodes).
Graph relabel(const Graph& g, const std::vector<int>& perm);

}  // namespace scgg
