#pragma once

#include "scgg/graph.hpp"
#include "scgg/rng.hpp"

namespace scgg {

// Graph-upscaling completer: edges are added one at a time, with one
// endpoint drawn from the current nodes proportionally to degree + 1 and the
// other drawn uniformly from the not-yet-attached new nodes. A new node
// joins the current set upon first attachment; the process stops right after
// the m-th new node attaches, so every new node ends with degree >= 1.
Graph evograph_complete(const Graph& g0, int m, Rng& rng);

// Sanity floor: adds m nodes and includes every potential new edge (inter
// and intra) independently with probability equal to g0's edge density.
Graph random_density_complete(const Graph& g0, int m, Rng& rng);

}  // namespace scgg
