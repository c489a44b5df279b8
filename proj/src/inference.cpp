#include "scgg/inference.hpp"

#include <functional>
#include <stdexcept>

#include "scgg/featnet.hpp"
#include "scgg/generator.hpp"

namespace scgg {

namespace {

using Sampler = std::function<std::uint8_t(float)>;

std::pair<Graph, GenerationTrace> run_completion(const Graph& g0, int m, const Checkpoint& ckpt,
                                                 const Sampler& draw) {
  if (g0.num_nodes() < 1) throw std::invalid_argument("complete: empty initial graph");
  if (m < 1 || m > ckpt.model.m_max())
    throw std::invalid_argument("complete: m out of range [1, checkpoint m_max]");

  // eval-mode forwards never mutate the checkpoint
  auto& model = const_cast<ModelParams<float>&>(ckpt.model);
  const int n = g0.num_nodes();

  GenerationTrace trace;
  trace.probs.reserve(static_cast<std::size_t>(n + m));
  trace.samples.reserve(static_cast<std::size_t>(n + m));

  StepState<float> h = zero_state<float>();
  Matrix<float> s_prev = sos_vector<float>(m);
  auto advance = [&](const Matrix<float>& r) {
    auto [phi, hn] = step(r, s_prev, h, model.generator, m);
    h = std::move(hn);
    std::vector<float> probs(static_cast<std::size_t>(m));
    LinkVector bits(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      probs[static_cast<std::size_t>(k)] = phi(0, k);
      bits[static_cast<std::size_t>(k)] = draw(phi(0, k));
      s_prev(0, k) = static_cast<float>(bits[static_cast<std::size_t>(k)]);
    }
    trace.probs.push_back(std::move(probs));
    trace.samples.push_back(std::move(bits));
  };

  // phase 1: inter-links while walking g0's nodes
  const Matrix<float> r0 = embed(g0, model.featnet, Mode::eval);
  Matrix<float> r_row(1, kFeatureWidth);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < kFeatureWidth; ++j) r_row(0, j) = r0(i, j);
    advance(r_row);
  }

  Graph g_prime(n + m);
  for (const auto& [a, b] : g0.edges()) g_prime.add_edge(a, b);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k)
      if (trace.samples[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) g_prime.add_edge(i, n + k);

  // phase 2: intra-links from the re-embedded intermediate graph
  const Matrix<float> rp = embed(g_prime, model.featnet, Mode::eval);
  for (int j = 0; j < m; ++j) {
    for (int c = 0; c < kFeatureWidth; ++c) r_row(0, c) = rp(n + j, c);
    advance(r_row);
  }

  Graph out = g_prime;
  const std::vector<LinkVector> intra(trace.samples.begin() + n, trace.samples.end());
  for (const auto& [j, p] : decode_intra(intra)) out.add_edge(n + j, n + p);
  return {std::move(out), std::move(trace)};
}

}  // namespace

std::pair<Graph, GenerationTrace> complete(const Graph& g0, int m, const Checkpoint& ckpt, Rng& rng) {
  return run_completion(g0, m, ckpt,
                        [&rng](float p) { return static_cast<std::uint8_t>(rng.bernoulli(p) ? 1 : 0); });
}

std::pair<Graph, GenerationTrace> complete_greedy(const Graph& g0, int m, const Checkpoint& ckpt) {
  return run_completion(g0, m, ckpt, [](float p) { return static_cast<std::uint8_t>(p > 0.5f ? 1 : 0); });
}

std::set<std::pair<int, int>> decode_intra(const std::vector<LinkVector>& intra_samples) {
  const int m = static_cast<int>(intra_samples.size());
  std::set<std::pair<int, int>> edges;
  for (int p = 0; p < m; ++p)
    for (int j = 0; j < p; ++j)
      if (intra_samples[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)]) edges.insert({j, p});
  return edges;
}

}  // namespace scgg
