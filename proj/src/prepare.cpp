#include "scgg/prepare.hpp"

#include <algorithm>
#include <stdexcept>

namespace scgg {

PreparedSample prepare_sample(const Graph& g, int m, Rng& rng) {
  const int total = g.num_nodes();
  if (m <= 0 || m >= total)
    throw std::invalid_argument("prepare_sample: m must satisfy 1 <= m < num_nodes");
  const int n = total - m;

  // Uniform random removed subset, then independent uniform orderings on
  // both sides. The subset draw already leaves `removed` in random order;
  // the kept side gets its own shuffle.
  std::vector<std::uint8_t> is_removed(static_cast<std::size_t>(total), 0);
  Partition part;
  part.removed = rng.sample_without_replacement(total, m);
  for (int v : part.removed) is_removed[static_cast<std::size_t>(v)] = 1;
  part.kept.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < total; ++v)
    if (!is_removed[static_cast<std::size_t>(v)]) part.kept.push_back(v);
  rng.shuffle(part.kept);

  // position of each source node in the relabeled graph, -1 for removed
  std::vector<int> kept_pos(static_cast<std::size_t>(total), -1);
  std::vector<int> removed_pos(static_cast<std::size_t>(total), -1);
  for (int i = 0; i < n; ++i) kept_pos[static_cast<std::size_t>(part.kept[i])] = i;
  for (int j = 0; j < m; ++j) removed_pos[static_cast<std::size_t>(part.removed[j])] = j;

  PreparedSample sample;
  sample.partition = part;
  sample.g0 = Graph(n);
  sample.g_prime = Graph(n + m);
  sample.targets.assign(static_cast<std::size_t>(n + m), LinkVector(static_cast<std::size_t>(m), 0));

  for (const auto& [a, b] : g.edges()) {
    const int ka = kept_pos[static_cast<std::size_t>(a)], kb = kept_pos[static_cast<std::size_t>(b)];
    const int ra = removed_pos[static_cast<std::size_t>(a)], rb = removed_pos[static_cast<std::size_t>(b)];
    if (ka >= 0 && kb >= 0) {
      sample.g0.add_edge(ka, kb);
      sample.g_prime.add_edge(ka, kb);
    } else if (ka >= 0 && rb >= 0) {
      sample.g_prime.add_edge(ka, n + rb);
      sample.targets[static_cast<std::size_t>(ka)][static_cast<std::size_t>(rb)] = 1;
    } else if (ra >= 0 && kb >= 0) {
      sample.g_prime.add_edge(kb, n + ra);
      sample.targets[static_cast<std::size_t>(kb)][static_cast<std::size_t>(ra)] = 1;
    } else {
      // intra-link: recorded in the targets only, never in g_prime
      sample.targets[static_cast<std::size_t>(n + ra)][static_cast<std::size_t>(rb)] = 1;
      sample.targets[static_cast<std::size_t>(n + rb)][static_cast<std::size_t>(ra)] = 1;
    }
  }
  return sample;
}

Graph reassemble(const PreparedSample& sample) {
  const int n = sample.n();
  const int m = sample.m();
  Graph g = sample.g_prime;
  for (int j = 0; j < m; ++j) {
    for (int p = j + 1; p < m; ++p) {
      const auto bit_jp = sample.targets[static_cast<std::size_t>(n + j)][static_cast<std::size_t>(p)];
      const auto bit_pj = sample.targets[static_cast<std::size_t>(n + p)][static_cast<std::size_t>(j)];
      if (bit_jp != bit_pj) throw std::logic_error("reassemble: asymmetric intra-link targets");
      if (bit_jp) g.add_edge(n + j, n + p);
    }
    if (sample.targets[static_cast<std::size_t>(n + j)][static_cast<std::size_t>(j)] != 0)
      throw std::logic_error("reassemble: nonzero self-link target");
  }
  return g;
}

std::vector<int> inverse_relabeling(const Partition& partition) {
  std::vector<int> back;
  back.reserve(partition.kept.size() + partition.removed.size());
  back.insert(back.end(), partition.kept.begin(), partition.kept.end());
  back.insert(back.end(), partition.removed.begin(), partition.removed.end());
  return back;
}

}  // namespace scgg
