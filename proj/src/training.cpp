#include "scgg/training.hpp"

#include <stdexcept>
#include <string>

#include "scgg/adam.hpp"
#include "scgg/log.hpp"
#include "scgg/model.hpp"
#include "scgg/prepare.hpp"

namespace scgg {

namespace {

// rng stream layout: stream 0 seeds parameter init, stream 1 drives the
// epoch loop (shuffling, dropout), streams 2.. hold one substream per
// (resample round, sample index) pair
constexpr std::uint64_t kParamStream = 0;
constexpr std::uint64_t kEpochStream = 1;
constexpr std::uint64_t kSampleStreamBase = 2;
constexpr std::uint64_t kSampleRoundStride = std::uint64_t(1) << 32;

std::uint64_t sample_stream(std::size_t index, std::size_t round) {
  return kSampleStreamBase + static_cast<std::uint64_t>(round) * kSampleRoundStride +
         static_cast<std::uint64_t>(index);
}

}  // namespace

PreparedSample training_sample(const Graph& g, const TrainConfig& cfg, std::size_t index, std::size_t round) {
  Rng rng = Rng::derive(cfg.seed, sample_stream(index, round));
  return prepare_sample(g, cfg.m, rng);
}

Checkpoint train(const std::vector<Graph>& dataset, const TrainConfig& cfg, std::vector<double>* epoch_losses) {
  cfg.validate();
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset, nothing to train");

  std::vector<const Graph*> usable;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].num_nodes() > cfg.m) {
      usable.push_back(&dataset[i]);
    } else {
      log_warn("train: skipping graph " + std::to_string(i) + " with " +
               std::to_string(dataset[i].num_nodes()) + " nodes (needs > m = " + std::to_string(cfg.m) + ")");
    }
  }
  if (usable.empty()) throw std::invalid_argument("train: no graph larger than m, nothing to train");

  Rng init_rng = Rng::derive(cfg.seed, kParamStream);
  auto model = ModelParams<float>::init(cfg.m_max, init_rng);
  Adam<float> opt(model, static_cast<float>(cfg.learning_rate));
  Rng rng = Rng::derive(cfg.seed, kEpochStream);

  auto prepare_all = [&](std::size_t round) {
    std::vector<PreparedSample> samples;
    samples.reserve(usable.size());
    for (std::size_t i = 0; i < usable.size(); ++i)
      samples.push_back(training_sample(*usable[i], cfg, i, round));
    return samples;
  };
  std::vector<PreparedSample> samples = prepare_all(0);

  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.resample_per_epoch && epoch > 1) samples = prepare_all(static_cast<std::size_t>(epoch - 1));
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      model.zero_grad();
      for (std::size_t k = begin; k < end; ++k) {
        Tape<float> tape;
        auto loss = graph_loss_t(tape, samples[order[k]], model, Mode::train, &rng);
        loss_sum += static_cast<double>(loss.value()(0, 0));
        tape.backward(loss, 1.0f / static_cast<float>(end - begin));
      }
      opt.step();
    }
    const double epoch_loss = loss_sum / static_cast<double>(samples.size());
    if (epoch_losses) epoch_losses->push_back(epoch_loss);
    log_debug("epoch " + std::to_string(epoch) + " loss " + std::to_string(epoch_loss));
  }

  Checkpoint ckpt;
  ckpt.model = std::move(model);
  ckpt.config = cfg;
  ckpt.epoch = cfg.epochs;
  ckpt.rng_state = rng.state();
  return ckpt;
}

}  // namespace scgg
