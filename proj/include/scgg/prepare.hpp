#pragma once

#include <cstdint>
#include <vector>

#include "scgg/graph.hpp"
#include "scgg/rng.hpp"

namespace scgg {

// Per-step link supervision: bit l answers "is there an edge to new node l?".
using LinkVector = std::vector<std::uint8_t>;

// Which source nodes were kept (in feed order) and which were removed
// (in new-node order). Retains the original ids for traceability.
struct Partition {
  std::vector<int> kept;
  std::vector<int> removed;
};

// One training instance derived from a full graph:
//   g0       the kept induced subgraph, relabeled to 0..n-1
//   g_prime  g0 plus the m new nodes (ids n..n+m-1) with inter-links only
//   targets  n+m link vectors of length m; rows 0..n-1 hold inter-link truth,
//            rows n..n+m-1 hold intra-link truth (symmetric, zero diagonal)
struct PreparedSample {
  Graph g0;
  Graph g_prime;
  std::vector<LinkVector> targets;
  Partition partition;

  int n() const { return g0.num_nodes(); }
  int m() const { return static_cast<int>(partition.removed.size()); }
};

// Removes a uniform random m-subset of g's nodes and relabels both sides by
// independent uniform random orderings. Deterministic given the rng state.
PreparedSample prepare_sample(const Graph& g, int m, Rng& rng);

// Inverse of prepare_sample: g_prime plus the intra-edges encoded in the
// target rows of the new nodes. Throws std::logic_error if those rows are
// not symmetric. The result equals the source graph up to the partition
// relabeling.
Graph reassemble(const PreparedSample& sample);

// Maps a node id of the reassembled graph back to the source graph's id.
std::vector<int> inverse_relabeling(const Partition& partition);

}  // namespace scgg
