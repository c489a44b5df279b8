#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "scgg/config.hpp"
#include "scgg/params.hpp"

namespace scgg {

// Trained model plus everything needed to reproduce or resume the run.
struct Checkpoint {
  ModelParams<float> model;
  TrainConfig config;
  int epoch = 0;
  std::array<std::uint64_t, 4> rng_state{};
};

// File layout: 8-byte magic "SCGGCKP1", little-endian u64 header length,
// JSON header (schema version, config, epoch, rng state, tensor table),
// then the raw float32 tensor blocks in header order.
void save_checkpoint(Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace scgg
