#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scgg/baselines.hpp"
#include "scgg/checkpoint.hpp"
#include "scgg/edge_list.hpp"
#include "scgg/evaluation.hpp"
#include "scgg/inference.hpp"
#include "scgg/log.hpp"
#include "scgg/training.hpp"

namespace {

using namespace scgg;

std::pair<int, int> parse_range(const std::string& s) {
  const auto sep = s.find(':');
  if (sep == std::string::npos) {
    const int v = std::stoi(s);
    return {v, v};
  }
  const int lo = std::stoi(s.substr(0, sep));
  const int hi = std::stoi(s.substr(sep + 1));
  if (lo > hi) throw CLI::ValidationError("range must be lo:hi with lo <= hi");
  return {lo, hi};
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

int cmd_gen_data(const std::string& rows_range, const std::string& cols_range, int count,
                 const std::string& out_path, std::uint64_t seed) {
  const auto [rlo, rhi] = parse_range(rows_range);
  const auto [clo, chi] = parse_range(cols_range);
  if (rlo < 1 || clo < 1) throw CLI::ValidationError("grid dimensions must be positive");
  Rng rng(seed);
  std::vector<Graph> graphs;
  graphs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int rows = rlo + rng.uniform_index(rhi - rlo + 1);
    const int cols = clo + rng.uniform_index(chi - clo + 1);
    graphs.push_back(generate_grid(rows, cols));
  }
  save_edge_list(graphs, out_path);

  int min_nodes = 0, max_nodes = 0;
  double avg_nodes = 0.0, std_nodes = 0.0, avg_sparsity = 0.0;
  if (!graphs.empty()) {
    min_nodes = graphs.front().num_nodes();
    max_nodes = graphs.front().num_nodes();
    for (const auto& g : graphs) {
      min_nodes = std::min(min_nodes, g.num_nodes());
      max_nodes = std::max(max_nodes, g.num_nodes());
      avg_nodes += g.num_nodes();
      avg_sparsity += 1.0 - g.density();
    }
    avg_nodes /= static_cast<double>(graphs.size());
    avg_sparsity /= static_cast<double>(graphs.size());
    for (const auto& g : graphs) std_nodes += (g.num_nodes() - avg_nodes) * (g.num_nodes() - avg_nodes);
    std_nodes = std::sqrt(std_nodes / static_cast<double>(graphs.size()));
  }
  std::printf("min_nodes=%d max_nodes=%d avg_nodes=%.2f std_nodes=%.2f avg_sparsity=%.2f graphs=%zu\n",
              min_nodes, max_nodes, avg_nodes, std_nodes, avg_sparsity, graphs.size());
  return 0;
}

Completer make_checkpoint_completer(const Checkpoint& ckpt) {
  return [&ckpt](const Graph& g0, int m, Rng& rng) { return complete(g0, m, ckpt, rng).first; };
}

Completer make_baseline_completer(const std::string& name) {
  if (name == "evograph")
    return [](const Graph& g0, int m, Rng& rng) { return evograph_complete(g0, m, rng); };
  if (name == "random")
    return [](const Graph& g0, int m, Rng& rng) { return random_density_complete(g0, m, rng); };
  throw CLI::ValidationError("unknown baseline '" + name + "' (expected evograph or random)");
}

std::vector<Graph> select_split(std::vector<Graph> graphs, const std::string& split, double train_frac,
                                std::uint64_t split_seed) {
  if (split == "all") return graphs;
  auto [train, test] = split_dataset(graphs, train_frac, split_seed);
  return split == "train" ? std::move(train) : std::move(test);
}

std::string format_trace_csv(const GenerationTrace& trace, int graph_index) {
  std::string out;
  char buf[64];
  for (std::size_t step = 0; step < trace.probs.size(); ++step) {
    std::snprintf(buf, sizeof(buf), "%d,%zu", graph_index, step);
    out += buf;
    for (float p : trace.probs[step]) {
      std::snprintf(buf, sizeof(buf), ",%.6f", static_cast<double>(p));
      out += buf;
    }
    for (auto bit : trace.samples[step]) {
      std::snprintf(buf, sizeof(buf), ",%d", static_cast<int>(bit));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structure-conditioned graph completion"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate a grid-graph dataset");
  std::string kind = "grid", rows_range = "5:19", cols_range = "5:19", gen_out;
  int gen_count = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", kind, "dataset kind")->check(CLI::IsMember({"grid"}));
  gen->add_option("--rows-range", rows_range, "rows as lo:hi");
  gen->add_option("--cols-range", cols_range, "cols as lo:hi");
  gen->add_option("--count", gen_count, "number of graphs")->required();
  gen->add_option("--out", gen_out, "output edge-list path")->required();
  gen->add_option("--seed", gen_seed, "rng seed");

  // train
  auto* tr = app.add_subcommand("train", "train a model on an edge-list dataset");
  std::string tr_data, tr_config, tr_out, tr_split = "train";
  std::uint64_t tr_seed = 0, tr_split_seed = 0;
  double tr_frac = 0.8;
  std::optional<int> tr_m, tr_m_max, tr_epochs, tr_batch;
  std::optional<double> tr_lr;
  std::optional<bool> tr_resample;
  tr->add_option("--data", tr_data, "edge-list dataset")->required();
  tr->add_option("--config", tr_config, "key=value config file");
  tr->add_option("--out", tr_out, "output checkpoint path")->required();
  tr->add_option("--seed", tr_seed, "training seed")->required();
  tr->add_option("--m", tr_m, "new nodes per sample");
  tr->add_option("--m-max", tr_m_max, "generator capacity");
  tr->add_option("--epochs", tr_epochs, "training epochs");
  tr->add_option("--batch-size", tr_batch, "minibatch size");
  tr->add_option("--lr", tr_lr, "learning rate");
  tr->add_option("--resample", tr_resample, "resample node removals every epoch");
  tr->add_option("--split", tr_split, "which part of the 80/20 split to train on")
      ->check(CLI::IsMember({"train", "all"}));
  tr->add_option("--split-seed", tr_split_seed, "seed of the train/test split");
  tr->add_option("--train-frac", tr_frac, "train fraction of the split");

  // complete
  auto* co = app.add_subcommand("complete", "complete initial graphs from a checkpoint");
  std::string co_ckpt, co_g0, co_out, co_trace;
  int co_m = 0;
  std::uint64_t co_seed = 0;
  bool co_greedy = false;
  co->add_option("--checkpoint", co_ckpt, "trained checkpoint")->required();
  co->add_option("--g0", co_g0, "edge-list file of initial graphs")->required();
  co->add_option("--m", co_m, "new nodes to add")->required();
  co->add_option("--seed", co_seed, "sampling seed")->required();
  co->add_option("--out", co_out, "output edge-list path")->required();
  co->add_flag("--greedy", co_greedy, "threshold at 0.5 instead of sampling");
  co->add_option("--trace-out", co_trace, "per-step probabilities/samples CSV");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "score a completer on the test split");
  std::string ev_ckpt, ev_baseline, ev_data, ev_out, ev_split = "test";
  int ev_m = 0, ev_reps = 10;
  std::uint64_t ev_seed = 0, ev_split_seed = 0;
  double ev_frac = 0.8;
  ev->add_option("--checkpoint", ev_ckpt, "trained checkpoint");
  ev->add_option("--baseline", ev_baseline, "baseline completer (evograph|random)");
  ev->add_option("--data", ev_data, "edge-list dataset")->required();
  ev->add_option("--m", ev_m, "new nodes to add")->required();
  ev->add_option("--repetitions", ev_reps, "repetitions per graph");
  ev->add_option("--seed", ev_seed, "evaluation seed")->required();
  ev->add_option("--out", ev_out, "output CSV path")->required();
  ev->add_option("--split", ev_split, "which part of the split to evaluate on")
      ->check(CLI::IsMember({"test", "all"}));
  ev->add_option("--split-seed", ev_split_seed, "seed of the train/test split");
  ev->add_option("--train-frac", ev_frac, "train fraction of the split");

  // sweep
  auto* sw = app.add_subcommand("sweep", "evaluate methods across a list of m values");
  std::string sw_ckpt, sw_data, sw_out, sw_mlist, sw_name, sw_split = "test";
  std::vector<std::string> sw_baselines;
  int sw_reps = 10;
  std::uint64_t sw_seed = 0, sw_split_seed = 0;
  double sw_frac = 0.8;
  sw->add_option("--checkpoint", sw_ckpt, "trained checkpoint (method 'scgg')");
  sw->add_option("--baseline", sw_baselines, "baseline completer, repeatable");
  sw->add_option("--data", sw_data, "edge-list dataset")->required();
  sw->add_option("--m-list", sw_mlist, "comma-separated m values")->required();
  sw->add_option("--repetitions", sw_reps, "repetitions per graph");
  sw->add_option("--seed", sw_seed, "evaluation seed")->required();
  sw->add_option("--out", sw_out, "output CSV path")->required();
  sw->add_option("--dataset-name", sw_name, "name used in the CSV (default: data file stem)");
  sw->add_option("--split", sw_split, "which part of the split to evaluate on")
      ->check(CLI::IsMember({"test", "all"}));
  sw->add_option("--split-seed", sw_split_seed, "seed of the train/test split");
  sw->add_option("--train-frac", sw_frac, "train fraction of the split");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen_data(rows_range, cols_range, gen_count, gen_out, gen_seed);

    if (*tr) {
      TrainConfig cfg;
      if (!tr_config.empty()) cfg = load_train_config(tr_config);
      cfg.seed = tr_seed;
      if (tr_m) cfg.m = *tr_m;
      if (tr_m_max) cfg.m_max = *tr_m_max;
      if (tr_epochs) cfg.epochs = *tr_epochs;
      if (tr_batch) cfg.batch_size = *tr_batch;
      if (tr_lr) cfg.learning_rate = *tr_lr;
      if (tr_resample) cfg.resample_per_epoch = *tr_resample;
      auto graphs = select_split(load_edge_list(tr_data), tr_split, tr_frac, tr_split_seed);
      log_info("training on " + std::to_string(graphs.size()) + " graphs (m=" + std::to_string(cfg.m) + ")");
      std::vector<double> losses;
      Checkpoint ckpt = train(graphs, cfg, &losses);
      save_checkpoint(ckpt, tr_out);
      if (!losses.empty())
        log_info("final epoch loss " + std::to_string(losses.back()) + ", checkpoint written to " + tr_out);
      return 0;
    }

    if (*co) {
      const Checkpoint ckpt = load_checkpoint(co_ckpt);
      const auto inputs = load_edge_list(co_g0);
      std::vector<Graph> outputs;
      std::string trace_csv;
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        std::pair<Graph, GenerationTrace> result;
        if (co_greedy) {
          result = complete_greedy(inputs[i], co_m, ckpt);
        } else {
          Rng rng = Rng::derive(co_seed, i);
          result = complete(inputs[i], co_m, ckpt, rng);
        }
        outputs.push_back(std::move(result.first));
        if (!co_trace.empty()) trace_csv += format_trace_csv(result.second, static_cast<int>(i));
      }
      save_edge_list(outputs, co_out);
      if (!co_trace.empty()) {
        std::string header = "graph,step";
        for (int k = 0; k < co_m; ++k) header += ",phi_" + std::to_string(k);
        for (int k = 0; k < co_m; ++k) header += ",s_" + std::to_string(k);
        write_file(co_trace, header + "\n" + trace_csv);
      }
      return 0;
    }

    if (*ev) {
      if (ev_ckpt.empty() == ev_baseline.empty())
        throw CLI::ValidationError("evaluate needs exactly one of --checkpoint / --baseline");
      const auto graphs = select_split(load_edge_list(ev_data), ev_split, ev_frac, ev_split_seed);
      Checkpoint ckpt;
      Completer completer;
      if (!ev_ckpt.empty()) {
        ckpt = load_checkpoint(ev_ckpt);
        completer = make_checkpoint_completer(ckpt);
      } else {
        completer = make_baseline_completer(ev_baseline);
      }
      const EvalReport report = evaluate_completer(completer, graphs, ev_m, ev_reps, ev_seed);
      write_file(ev_out, eval_report_csv(report));
      std::printf("m=%d mean_nged=%.6f std_nged=%.6f graphs=%zu\n", report.m, report.aggregate_mean,
                  report.aggregate_std, report.per_graph.size());
      return 0;
    }

    if (*sw) {
      if (sw_ckpt.empty() && sw_baselines.empty())
        throw CLI::ValidationError("sweep needs --checkpoint and/or --baseline");
      const auto m_list = parse_int_list(sw_mlist);
      if (m_list.empty()) throw CLI::ValidationError("sweep: empty m-list");
      const auto graphs = select_split(load_edge_list(sw_data), sw_split, sw_frac, sw_split_seed);
      const std::string dataset =
          sw_name.empty() ? std::filesystem::path(sw_data).stem().string() : sw_name;

      std::vector<std::pair<std::string, Completer>> methods;
      Checkpoint ckpt;
      if (!sw_ckpt.empty()) {
        ckpt = load_checkpoint(sw_ckpt);
        methods.emplace_back("scgg", make_checkpoint_completer(ckpt));
      }
      for (const auto& name : sw_baselines) methods.emplace_back(name, make_baseline_completer(name));

      std::string csv = "dataset,m,method,mean_ged,std_ged\n";
      char buf[160];
      for (int m : m_list) {
        for (const auto& [name, completer] : methods) {
          const EvalReport report = evaluate_completer(completer, graphs, m, sw_reps, sw_seed);
          std::snprintf(buf, sizeof(buf), "%s,%d,%s,%.6f,%.6f\n", dataset.c_str(), m, name.c_str(),
                        report.aggregate_mean, report.aggregate_std);
          csv += buf;
        }
      }
      write_file(sw_out, csv);
      std::fputs(csv.c_str(), stdout);
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
