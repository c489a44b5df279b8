#pragma once

#include <set>
#include <utility>
#include <vector>

#include "scgg/checkpoint.hpp"
#include "scgg/graph.hpp"
#include "scgg/prepare.hpp"
#include "scgg/rng.hpp"

namespace scgg {

// Per-step record of the completion run: the probability vector and the
// sampled link bits, in step order (n inter steps, then m intra steps).
struct GenerationTrace {
  std::vector<std::vector<float>> probs;
  std::vector<LinkVector> samples;
};

// Two-phase completion: walk g0's nodes sampling inter-links, build the
// intermediate graph, re-embed it, then walk the new nodes sampling
// intra-links. The hidden state is carried across the phase boundary.
// The output always contains g0 as node prefix 0..n-1 and has n+m nodes.
std::pair<Graph, GenerationTrace> complete(const Graph& g0, int m, const Checkpoint& ckpt, Rng& rng);

// Deterministic variant: links taken where phi > 0.5 instead of sampling.
std::pair<Graph, GenerationTrace> complete_greedy(const Graph& g0, int m, const Checkpoint& ckpt);

// Resolves the sampled intra-link bit table into a simple edge set over new
// nodes 0..m-1: edge (j, p) with j < p is present iff step p's sample has
// bit j set, i.e. the later step (with the most conditioning context) wins.
// Diagonal bits are ignored.
std::set<std::pair<int, int>> decode_intra(const std::vector<LinkVector>& intra_samples);

}  // namespace scgg
