#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "scgg/edge_list.hpp"
#include "scgg/graph.hpp"
#include "scgg/prepare.hpp"
#include "test_util.hpp"

using namespace scgg;
using namespace scgg::testutil;

TEST_SUITE_BEGIN("graph-core");

TEST_CASE("grid generator matches closed forms") {
  const Graph g1 = generate_grid(1, 1);
  CHECK(g1.num_nodes() == 1);
  CHECK(g1.num_edges() == 0);

  const Graph g55 = generate_grid(5, 5);
  CHECK(g55.num_nodes() == 25);
  CHECK(g55.num_edges() == 40);

  const Graph g23 = generate_grid(2, 3);
  CHECK(g23.num_nodes() == 6);
  CHECK(g23.num_edges() == 7);

  CHECK_THROWS_AS(generate_grid(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(generate_grid(3, -1), std::invalid_argument);
}

TEST_CASE("grid degrees lie in {2,3,4} for rows,cols >= 2") {
  for (int r : {2, 3, 5}) {
    for (int c : {2, 4, 7}) {
      const Graph g = generate_grid(r, c);
      CHECK(g.num_nodes() == r * c);
      CHECK(g.num_edges() == r * (c - 1) + c * (r - 1));
      for (int d : g.degrees()) {
        CHECK(d >= 2);
        CHECK(d <= 4);
      }
    }
  }
}

TEST_CASE("graph rejects self-loops and out-of-range endpoints") {
  Graph g(3);
  CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 3), std::invalid_argument);
  CHECK(g.add_edge(0, 2));
  CHECK_FALSE(g.add_edge(2, 0));  // duplicate, normalized orientation
  CHECK(g.num_edges() == 1);
  CHECK(g.has_edge(2, 0));
}

TEST_CASE("edge list round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "scgg_edge_list_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "g.el").string();

  SUBCASE("empty file loads as empty list") {
    std::ofstream(path).close();
    CHECK(load_edge_list(path).empty());
  }

  SUBCASE("single path graph") {
    std::ofstream(path) << "% a comment\n#graph 0\nn=3\n0 1\n1 2\n";
    const auto graphs = load_edge_list(path);
    REQUIRE(graphs.size() == 1);
    CHECK(graphs[0] == path_graph(3));
  }

  SUBCASE("save(load(f)) is byte-identical for canonical files") {
    Rng rng(11);
    std::vector<Graph> graphs{generate_grid(3, 4), erdos_renyi(7, 0.4, rng), Graph(2)};
    save_edge_list(graphs, path);
    std::ifstream in1(path, std::ios::binary);
    const std::string bytes1((std::istreambuf_iterator<char>(in1)), std::istreambuf_iterator<char>());
    const auto reloaded = load_edge_list(path);
    CHECK(reloaded == graphs);
    const auto path2 = (dir / "g2.el").string();
    save_edge_list(reloaded, path2);
    std::ifstream in2(path2, std::ios::binary);
    const std::string bytes2((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
    CHECK(bytes1 == bytes2);
  }
}

TEST_CASE("edge list parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_edge_list("#graph 0\nn=2\n0 zebra\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("#graph 0\nn=2\n0 5\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("#graph 0\nn=2\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("0 1\n"), ParseError);
  try {
    parse_edge_list("#graph 0\nn=3\n0 1\nbroken\n", "f.el");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("f.el:4") != std::string::npos);
  }
}

TEST_CASE("prepare_sample on K3 with m=1") {
  const Graph k3 = complete_graph(3);
  for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
    Rng rng(seed);
    const PreparedSample s = prepare_sample(k3, 1, rng);
    CHECK(s.n() == 2);
    CHECK(s.m() == 1);
    CHECK(s.g0 == complete_graph(2));
    // symmetry of K3 forces these targets for any selection
    CHECK(s.targets[0] == LinkVector{1});
    CHECK(s.targets[1] == LinkVector{1});
    CHECK(s.targets[2] == LinkVector{0});
  }
}

TEST_CASE("prepare_sample m bounds") {
  const Graph k3 = complete_graph(3);
  Rng rng(0);
  CHECK_THROWS_AS(prepare_sample(k3, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(prepare_sample(k3, 3, rng), std::invalid_argument);
  const PreparedSample s = prepare_sample(k3, 2, rng);  // m = num_nodes - 1
  CHECK(s.g0.num_nodes() == 1);
}

TEST_CASE("prepare_sample is deterministic given the seed") {
  const Graph g = generate_grid(3, 3);
  Rng a(42), b(42);
  const PreparedSample sa = prepare_sample(g, 3, a);
  const PreparedSample sb = prepare_sample(g, 3, b);
  CHECK(sa.g0 == sb.g0);
  CHECK(sa.g_prime == sb.g_prime);
  CHECK(sa.targets == sb.targets);
  CHECK(sa.partition.kept == sb.partition.kept);
  CHECK(sa.partition.removed == sb.partition.removed);
}

namespace {

void check_sample_invariants(const Graph& source, const PreparedSample& s) {
  const int n = s.n(), m = s.m();
  REQUIRE(n + m == source.num_nodes());
  // g0 is the induced subgraph of g_prime on the first n nodes
  std::vector<int> first_n(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) first_n[static_cast<std::size_t>(i)] = i;
  CHECK(induced_subgraph(s.g_prime, first_n) == s.g0);
  // no intra edges in g_prime
  for (const auto& [a, b] : s.g_prime.edges()) CHECK((a < n || b < n));
  // intra-target symmetry and zero diagonal
  for (int j = 0; j < m; ++j) {
    CHECK(s.targets[static_cast<std::size_t>(n + j)][static_cast<std::size_t>(j)] == 0);
    for (int p = 0; p < m; ++p)
      CHECK(s.targets[static_cast<std::size_t>(n + j)][static_cast<std::size_t>(p)] ==
            s.targets[static_cast<std::size_t>(n + p)][static_cast<std::size_t>(j)]);
  }
  // reassembly equals the source after inverse relabeling
  const Graph back = relabel(reassemble(s), inverse_relabeling(s.partition));
  CHECK(back == source);
  // edge budget: g_prime lost exactly the intra edges
  int intra = 0;
  for (int j = 0; j < m; ++j)
    for (int p = j + 1; p < m; ++p)
      if (s.targets[static_cast<std::size_t>(n + j)][static_cast<std::size_t>(p)]) ++intra;
  CHECK(s.g_prime.num_edges() == source.num_edges() - intra);
}

}  // namespace

TEST_CASE("prepare/reassemble round trip on P4 over 100 seeds") {
  const Graph p4 = path_graph(4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    for (int m : {1, 2, 3}) {
      Rng local = rng;
      check_sample_invariants(p4, prepare_sample(p4, m, local));
    }
  }
}

TEST_CASE("prepare/reassemble round trip on G(8, 0.4)") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const Graph g = erdos_renyi(8, 0.4, rng);
    for (int m : {1, 2, 3}) check_sample_invariants(g, prepare_sample(g, m, rng));
  }
}

TEST_CASE("reassemble rejects asymmetric intra targets") {
  const Graph g = complete_graph(4);
  Rng rng(5);
  PreparedSample s = prepare_sample(g, 2, rng);
  s.targets[static_cast<std::size_t>(s.n())][1] ^= 1;
  CHECK_THROWS_AS(reassemble(s), std::logic_error);
}

TEST_CASE("reassemble with all-zero intra targets returns g_prime") {
  Graph g(5);  // isolated nodes: removal produces all-zero targets
  Rng rng(9);
  const PreparedSample s = prepare_sample(g, 2, rng);
  for (const auto& t : s.targets)
    for (auto bit : t) CHECK(bit == 0);
  CHECK(reassemble(s) == s.g_prime);
}

TEST_SUITE_END();
