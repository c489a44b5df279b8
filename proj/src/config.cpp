#include "scgg/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scgg {

void TrainConfig::validate() const {
  if (epochs <= 0) throw std::invalid_argument("config: epochs must be positive");
  if (batch_size <= 0) throw std::invalid_argument("config: batch_size must be positive");
  if (learning_rate <= 0) throw std::invalid_argument("config: learning_rate must be positive");
  if (m < 1 || m > m_max) throw std::invalid_argument("config: m must satisfy 1 <= m <= m_max");
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

TrainConfig parse_train_config(const std::string& text, const std::string& path) {
  TrainConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    const auto key = trim(stripped.substr(0, eq));
    const auto value = trim(stripped.substr(eq + 1));
    try {
      if (key == "epochs")
        cfg.epochs = std::stoi(value);
      else if (key == "batch_size")
        cfg.batch_size = std::stoi(value);
      else if (key == "learning_rate")
        cfg.learning_rate = std::stod(value);
      else if (key == "m")
        cfg.m = std::stoi(value);
      else if (key == "m_max")
        cfg.m_max = std::stoi(value);
      else if (key == "seed")
        cfg.seed = std::stoull(value);
      else if (key == "resample_per_epoch")
        cfg.resample_per_epoch = value == "true" || value == "1";
      else
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  return cfg;
}

TrainConfig load_train_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_train_config(buf.str(), path);
}

}  // namespace scgg
