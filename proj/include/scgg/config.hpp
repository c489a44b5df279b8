#pragma once

#include <cstdint>
#include <string>

namespace scgg {

// Training hyperparameters. Defaults: Adam at 0.003, 100 epochs, minibatch
// of 32. m is the number of new nodes per prepared sample; m_max fixes the
// generator's output width (m <= m_max).
struct TrainConfig {
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 0.003;
  int m = 1;
  int m_max = 10;
  std::uint64_t seed = 0;
  bool resample_per_epoch = false;

  void validate() const;
};

// Flat key=value config file; '#' starts a comment. Unknown keys are an
// error. Recognized keys: epochs, batch_size, learning_rate, m, m_max,
// seed, resample_per_epoch.
TrainConfig load_train_config(const std::string& path);
TrainConfig parse_train_config(const std::string& text, const std::string& path_for_errors = "<string>");

}  // namespace scgg
