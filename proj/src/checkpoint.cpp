#include "scgg/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace scgg {

namespace {

constexpr char kMagic[8] = {'S', 'C', 'G', 'G', 'C', 'K', 'P', '1'};
constexpr int kSchemaVersion = 1;

using json = nlohmann::json;

json config_to_json(const TrainConfig& cfg) {
  return json{{"epochs", cfg.epochs},
              {"batch_size", cfg.batch_size},
              {"learning_rate", cfg.learning_rate},
              {"m", cfg.m},
              {"m_max", cfg.m_max},
              {"seed", cfg.seed},
              {"resample_per_epoch", cfg.resample_per_epoch}};
}

TrainConfig config_from_json(const json& j) {
  TrainConfig cfg;
  cfg.epochs = j.at("epochs").get<int>();
  cfg.batch_size = j.at("batch_size").get<int>();
  cfg.learning_rate = j.at("learning_rate").get<double>();
  cfg.m = j.at("m").get<int>();
  cfg.m_max = j.at("m_max").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.resample_per_epoch = j.at("resample_per_epoch").get<bool>();
  return cfg;
}

template <typename F>
void visit_all_tensors(ModelParams<float>& model, F&& f) {
  model.visit_trainable([&](const std::string& name, Param<float>& p) { f(name, p.value); });
  model.visit_buffers([&](const std::string& name, Matrix<float>& b) { f(name, b); });
}

}  // namespace

void save_checkpoint(Checkpoint& ckpt, const std::string& path) {
  if (ckpt.model.m_max() != ckpt.config.m_max)
    throw std::logic_error("save_checkpoint: config.m_max and generator width disagree");
  json tensors = json::array();
  std::size_t payload_floats = 0;
  visit_all_tensors(ckpt.model, [&](const std::string& name, Matrix<float>& t) {
    tensors.push_back(json{{"name", name}, {"rows", t.rows()}, {"cols", t.cols()}, {"dtype", "f32"}});
    payload_floats += t.size();
  });
  json header{{"schema", "scgg-checkpoint"},
              {"version", kSchemaVersion},
              {"epoch", ckpt.epoch},
              {"config", config_to_json(ckpt.config)},
              {"dropout_rate", static_cast<double>(ckpt.model.featnet.dropout_rate)},
              {"rng_state", ckpt.rng_state},
              {"tensors", tensors}};
  const std::string header_str = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t hlen = header_str.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
  visit_all_tensors(ckpt.model, [&](const std::string&, Matrix<float>& t) {
    out.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(float)));
  });
  if (!out) throw std::runtime_error("write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error(path + ": not a checkpoint file");
  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  if (!in || hlen == 0 || hlen > (1u << 20)) throw std::runtime_error(path + ": corrupt header length");
  std::string header_str(hlen, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw std::runtime_error(path + ": truncated header");

  json header;
  try {
    header = json::parse(header_str);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": corrupt header: " + e.what());
  }
  if (header.at("schema").get<std::string>() != "scgg-checkpoint")
    throw std::runtime_error(path + ": unexpected schema");
  if (header.at("version").get<int>() != kSchemaVersion)
    throw std::runtime_error(path + ": unsupported checkpoint version");

  Checkpoint ckpt;
  ckpt.config = config_from_json(header.at("config"));
  ckpt.epoch = header.at("epoch").get<int>();
  ckpt.rng_state = header.at("rng_state").get<std::array<std::uint64_t, 4>>();
  Rng dummy(0);
  ckpt.model = ModelParams<float>::init(ckpt.config.m_max, dummy);
  ckpt.model.featnet.dropout_rate = static_cast<float>(header.at("dropout_rate").get<double>());

  const auto& tensors = header.at("tensors");
  std::size_t ti = 0;
  visit_all_tensors(ckpt.model, [&](const std::string& name, Matrix<float>& t) {
    if (ti >= tensors.size()) throw std::runtime_error(path + ": tensor table too short");
    const auto& entry = tensors.at(ti++);
    if (entry.at("name").get<std::string>() != name || entry.at("rows").get<int>() != t.rows() ||
        entry.at("cols").get<int>() != t.cols())
      throw std::runtime_error(path + ": tensor table mismatch at '" + name + "'");
    in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(float)));
    if (!in) throw std::runtime_error(path + ": truncated tensor data at '" + name + "'");
  });
  if (ti != tensors.size()) throw std::runtime_error(path + ": tensor table too long");
  return ckpt;
}

}  // namespace scgg
