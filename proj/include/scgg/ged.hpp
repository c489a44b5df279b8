#pragma once

#include <vector>

#include "scgg/graph.hpp"
#include "scgg/matrix.hpp"

namespace scgg {

// Unit costs by default, matching the evaluation protocol.
struct EditCost {
  double node_ins = 1.0;
  double node_del = 1.0;
  double edge_ins = 1.0;
  double edge_del = 1.0;
};

inline constexpr int kGedExactMaxNodes = 10;

// Exact minimum edit cost via branch-and-bound over injective partial node
// mappings. Refuses graphs larger than kGedExactMaxNodes.
double ged_exact(const Graph& g1, const Graph& g2, const EditCost& costs = {});

// Bipartite-assignment approximation: a Hungarian solve over node
// substitutions/insertions/deletions with degree-based local costs, followed
// by explicit construction of the induced edit path. The returned value is
// that path's true cost, hence always an upper bound on ged_exact.
double ged_approx(const Graph& g1, const Graph& g2, const EditCost& costs = {});

// GED divided by the average of the two node counts; exact when both graphs
// have at most kGedExactMaxNodes nodes, approximate otherwise.
double normalized_ged(const Graph& g1, const Graph& g2);

namespace detail {

// Minimum-cost perfect matching (rows to columns) on a square cost matrix;
// returns col_of_row. O(n^3) shortest augmenting paths with potentials.
std::vector<int> hungarian(const Matrix<double>& cost);

// Edit cost of the node mapping `image` (g1 node -> g2 node, or -1 for
// deletion); g2 nodes outside the image are insertions.
double mapping_cost(const Graph& g1, const Graph& g2, const std::vector<int>& image, const EditCost& costs);

}  // namespace detail

}  // namespace scgg
