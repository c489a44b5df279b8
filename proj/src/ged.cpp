#include "scgg/ged.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace scgg {

namespace detail {

std::vector<int> hungarian(const Matrix<double>& cost) {
  const int n = cost.rows();
  if (n == 0) return {};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-indexed potentials; p[j] = row matched to column j
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<std::size_t>(j)] > 0) col_of_row[static_cast<std::size_t>(p[static_cast<std::size_t>(j)]) - 1] = j - 1;
  return col_of_row;
}

double mapping_cost(const Graph& g1, const Graph& g2, const std::vector<int>& image, const EditCost& costs) {
  const int n2 = g2.num_nodes();
  std::vector<char> is_image(static_cast<std::size_t>(n2), 0);
  int deleted = 0;
  for (int u = 0; u < g1.num_nodes(); ++u) {
    const int v = image[static_cast<std::size_t>(u)];
    if (v < 0)
      ++deleted;
    else
      is_image[static_cast<std::size_t>(v)] = 1;
  }
  int inserted_nodes = 0;
  for (int v = 0; v < n2; ++v)
    if (!is_image[static_cast<std::size_t>(v)]) ++inserted_nodes;

  int covered = 0;
  for (const auto& [a, b] : g1.edges()) {
    const int va = image[static_cast<std::size_t>(a)], vb = image[static_cast<std::size_t>(b)];
    if (va >= 0 && vb >= 0 && g2.has_edge(va, vb)) ++covered;
  }
  const int deleted_edges = g1.num_edges() - covered;
  const int inserted_edges = g2.num_edges() - covered;
  return costs.node_del * deleted + costs.node_ins * inserted_nodes + costs.edge_del * deleted_edges +
         costs.edge_ins * inserted_edges;
}

namespace {

// DFS over assignments of g1 nodes (largest degree first) to g2 nodes or to
// deletion. Cost bookkeeping is incremental; simple admissible bounds on the
// remaining node and edge budgets drive the pruning.
struct ExactSearch {
  const Graph& g1;
  const Graph& g2;
  EditCost costs;
  std::vector<int> order;        // g1 nodes, descending degree
  std::vector<int> image;        // g1 node -> g2 node or -1
  std::vector<char> used;        // g2 node taken
  std::vector<int> assigned;     // prefix of `order` already mapped
  double best;
  int images_count = 0;
  int pairs_edges2 = 0;  // g2 edges with both endpoints in the image
  int e1_rem;            // g1 edges with >= 1 unassigned endpoint

  ExactSearch(const Graph& a, const Graph& b, const EditCost& c, double upper_bound)
      : g1(a), g2(b), costs(c), best(upper_bound), e1_rem(a.num_edges()) {
    order.resize(static_cast<std::size_t>(g1.num_nodes()));
    std::iota(order.begin(), order.end(), 0);
    const auto deg = g1.degrees();
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return deg[static_cast<std::size_t>(x)] != deg[static_cast<std::size_t>(y)]
                 ? deg[static_cast<std::size_t>(x)] > deg[static_cast<std::size_t>(y)]
                 : x < y;
    });
    image.assign(static_cast<std::size_t>(g1.num_nodes()), -1);
    used.assign(static_cast<std::size_t>(g2.num_nodes()), 0);
  }

  double lower_bound(double cost_so_far, std::size_t depth) const {
    const int r1 = g1.num_nodes() - static_cast<int>(depth);
    const int unused2 = g2.num_nodes() - images_count;
    const int u2_edges = g2.num_edges() - pairs_edges2;
    double lb = cost_so_far;
    lb += costs.node_ins * std::max(0, unused2 - r1);
    lb += costs.edge_del * std::max(0, e1_rem - u2_edges);
    lb += costs.edge_ins * std::max(0, u2_edges - e1_rem);
    return lb;
  }

  void dfs(std::size_t depth, double cost_so_far) {
    if (cost_so_far >= best) return;
    if (depth == order.size()) {
      const double total = cost_so_far + costs.node_ins * (g2.num_nodes() - images_count) +
                           costs.edge_ins * (g2.num_edges() - pairs_edges2);
      best = std::min(best, total);
      return;
    }
    if (lower_bound(cost_so_far, depth) >= best) return;

    const int u = order[depth];
    int e1_to_assigned = 0;
    for (std::size_t k = 0; k < depth; ++k)
      if (g1.has_edge(u, order[k])) ++e1_to_assigned;

    // try mapping u to each free g2 node
    for (int v = 0; v < g2.num_nodes(); ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      double delta = 0.0;
      int new_pairs = 0;
      for (std::size_t k = 0; k < depth; ++k) {
        const int uk = order[k];
        const bool e1 = g1.has_edge(u, uk);
        const int fk = image[static_cast<std::size_t>(uk)];
        const bool e2 = fk >= 0 && g2.has_edge(v, fk);
        if (e1 && !e2) delta += costs.edge_del;
        if (!e1 && e2) delta += costs.edge_ins;
        if (e2) ++new_pairs;
      }
      image[static_cast<std::size_t>(u)] = v;
      used[static_cast<std::size_t>(v)] = 1;
      images_count += 1;
      pairs_edges2 += new_pairs;
      e1_rem -= e1_to_assigned;
      dfs(depth + 1, cost_so_far + delta);
      e1_rem += e1_to_assigned;
      pairs_edges2 -= new_pairs;
      images_count -= 1;
      used[static_cast<std::size_t>(v)] = 0;
      image[static_cast<std::size_t>(u)] = -1;
    }

    // try deleting u (all its edges to assigned nodes are deleted now;
    // edges to unassigned nodes are charged when those get mapped)
    e1_rem -= e1_to_assigned;
    dfs(depth + 1, cost_so_far + costs.node_del + costs.edge_del * e1_to_assigned);
    e1_rem += e1_to_assigned;
  }
};

}  // namespace

}  // namespace detail

double ged_exact(const Graph& g1, const Graph& g2, const EditCost& costs) {
  if (g1.num_nodes() > kGedExactMaxNodes || g2.num_nodes() > kGedExactMaxNodes)
    throw std::invalid_argument("ged_exact: graph exceeds " + std::to_string(kGedExactMaxNodes) +
                                " nodes, use ged_approx");
  // map from the smaller graph into the larger; swapping sides swaps the
  // roles of insertions and deletions
  if (g1.num_nodes() > g2.num_nodes()) {
    EditCost swapped = costs;
    std::swap(swapped.node_ins, swapped.node_del);
    std::swap(swapped.edge_ins, swapped.edge_del);
    return ged_exact(g2, g1, swapped);
  }
  detail::ExactSearch search(g1, g2, costs, ged_approx(g1, g2, costs) + 1e-9);
  search.dfs(0, 0.0);
  return search.best;
}

namespace {

// Per-node incident-edge signature: the sorted degrees of the neighbors.
std::vector<std::vector<int>> neighbor_degree_lists(const Graph& g) {
  const auto deg = g.degrees();
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(g.num_nodes()));
  for (const auto& [a, b] : g.edges()) {
    lists[static_cast<std::size_t>(a)].push_back(deg[static_cast<std::size_t>(b)]);
    lists[static_cast<std::size_t>(b)].push_back(deg[static_cast<std::size_t>(a)]);
  }
  for (auto& l : lists) std::sort(l.rbegin(), l.rend());
  return lists;
}

// Substitution cost: mismatched incident-edge count (paid as edge edits)
// plus a soft best-match term over the aligned incident-edge signatures.
double substitution_cost(const std::vector<int>& nu, const std::vector<int>& nv, const EditCost& costs) {
  const std::size_t ku = nu.size(), kv = nv.size();
  double c = ku > kv ? costs.edge_del * static_cast<double>(ku - kv)
                     : costs.edge_ins * static_cast<double>(kv - ku);
  for (std::size_t i = 0; i < std::min(ku, kv); ++i) c += 0.5 * std::abs(nu[i] - nv[i]);
  return c;
}

// Greedy improvement of the induced mapping: image swaps and single-node
// reassignments, first-improvement, bounded rounds. Only shrinks the true
// path cost, so the upper-bound guarantee is preserved.
double refine_mapping(const Graph& g1, const Graph& g2, std::vector<int>& image, const EditCost& costs,
                      double best) {
  const int n1 = g1.num_nodes(), n2 = g2.num_nodes();
  if (n1 + n2 > 300) return best;  // quadratic sweeps get slow beyond this
  std::vector<char> used(static_cast<std::size_t>(n2), 0);
  for (int v : image)
    if (v >= 0) used[static_cast<std::size_t>(v)] = 1;

  bool improved = true;
  for (int round = 0; round < 8 && improved; ++round) {
    improved = false;
    for (int i = 0; i < n1; ++i) {
      for (int j = i + 1; j < n1; ++j) {
        std::swap(image[static_cast<std::size_t>(i)], image[static_cast<std::size_t>(j)]);
        const double c = detail::mapping_cost(g1, g2, image, costs);
        if (c < best - 1e-12) {
          best = c;
          improved = true;
        } else {
          std::swap(image[static_cast<std::size_t>(i)], image[static_cast<std::size_t>(j)]);
        }
      }
    }
    for (int i = 0; i < n1; ++i) {
      for (int v = -1; v < n2; ++v) {
        const int old = image[static_cast<std::size_t>(i)];
        if (v == old || (v >= 0 && used[static_cast<std::size_t>(v)])) continue;
        image[static_cast<std::size_t>(i)] = v;
        const double c = detail::mapping_cost(g1, g2, image, costs);
        if (c < best - 1e-12) {
          best = c;
          improved = true;
          if (old >= 0) used[static_cast<std::size_t>(old)] = 0;
          if (v >= 0) used[static_cast<std::size_t>(v)] = 1;
        } else {
          image[static_cast<std::size_t>(i)] = old;
        }
      }
    }
  }
  return best;
}

}  // namespace

double ged_approx(const Graph& g1, const Graph& g2, const EditCost& costs) {
  const int n1 = g1.num_nodes(), n2 = g2.num_nodes();
  const int n = n1 + n2;
  if (n == 0) return 0.0;
  const auto deg1 = g1.degrees(), deg2 = g2.degrees();
  const auto sig1 = neighbor_degree_lists(g1), sig2 = neighbor_degree_lists(g2);
  // large finite penalty for the structurally forbidden cells
  double forbid = 1.0;
  for (double c : {costs.node_ins, costs.node_del, costs.edge_ins, costs.edge_del}) forbid += c;
  forbid *= static_cast<double>(n + g1.num_edges() + g2.num_edges() + 1) *
            static_cast<double>(1 + g1.max_degree() + g2.max_degree());

  Matrix<double> cost(n, n);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      cost(i, j) = substitution_cost(sig1[static_cast<std::size_t>(i)], sig2[static_cast<std::size_t>(j)], costs);
  for (int i = 0; i < n1; ++i)
    for (int k = 0; k < n1; ++k)
      cost(i, n2 + k) = i == k ? costs.node_del + costs.edge_del * deg1[static_cast<std::size_t>(i)] : forbid;
  for (int k = 0; k < n2; ++k)
    for (int j = 0; j < n2; ++j)
      cost(n1 + k, j) = k == j ? costs.node_ins + costs.edge_ins * deg2[static_cast<std::size_t>(j)] : forbid;
  // epsilon-to-epsilon block stays zero

  const auto assignment = detail::hungarian(cost);
  std::vector<int> image(static_cast<std::size_t>(n1), -1);
  for (int i = 0; i < n1; ++i) {
    const int j = assignment[static_cast<std::size_t>(i)];
    image[static_cast<std::size_t>(i)] = j < n2 ? j : -1;
  }
  const double assigned = detail::mapping_cost(g1, g2, image, costs);
  return refine_mapping(g1, g2, image, costs, assigned);
}

double normalized_ged(const Graph& g1, const Graph& g2) {
  if (g1.num_nodes() == 0 || g2.num_nodes() == 0)
    throw std::invalid_argument("normalized_ged: graphs must be non-empty");
  const bool small = g1.num_nodes() <= kGedExactMaxNodes && g2.num_nodes() <= kGedExactMaxNodes;
  const double d = small ? ged_exact(g1, g2) : ged_approx(g1, g2);
  return d / (0.5 * (g1.num_nodes() + g2.num_nodes()));
}

}  // namespace scgg
