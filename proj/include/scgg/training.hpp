#pragma once

#include <vector>

#include "scgg/checkpoint.hpp"
#include "scgg/config.hpp"
#include "scgg/graph.hpp"
#include "scgg/prepare.hpp"

namespace scgg {

// End-to-end training: prepares one sample per usable graph up front (or per
// epoch when cfg.resample_per_epoch), then runs teacher-forced minibatch
// gradient descent over featnet and generator jointly. Graphs with
// num_nodes <= cfg.m are skipped with a warning. Deterministic given
// cfg.seed. Per-epoch mean losses are appended to *epoch_losses if given.
Checkpoint train(const std::vector<Graph>& dataset, const TrainConfig& cfg,
                 std::vector<double>* epoch_losses = nullptr);

// The exact sample train() prepares for the index-th usable graph in
// resample round `round` (0 = the initial build). Exposed so callers can
// reconstruct a run's G0/targets without replaying the whole run.
PreparedSample training_sample(const Graph& g, const TrainConfig& cfg, std::size_t index,
                               std::size_t round = 0);

}  // namespace scgg
