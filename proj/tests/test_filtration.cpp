#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "netsift/filtration.hpp"

#include "support/demo10.hpp"
#include "support/oracles.hpp"

using namespace netsift;
using testsupport::demo_network;

namespace {

std::vector<std::string> make_labels(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i));
  return labels;
}

std::set<VertexPair> edge_set(const NetworkStructure& s) {
  return {s.edges.begin(), s.edges.end()};
}

std::vector<std::vector<bool>> adjacency_matrix(const NetworkStructure& graph,
                                                int n) {
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n),
                                     std::vector<bool>(static_cast<std::size_t>(n), false));
  for (const auto& [u, v] : graph.edges) {
    adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
    adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = true;
  }
  return adj;
}

}  // namespace

TEST_CASE("mst on the demo network") {
  const auto tree = mst(demo_network());
  const std::set<VertexPair> expected = {{0, 9}, {1, 9}, {2, 9}, {3, 9}, {4, 8},
                                         {5, 8}, {6, 8}, {7, 8}, {8, 9}};
  CHECK(edge_set(tree) == expected);
  // Hubs ACWI (8) and ADX (9) have degree 5 and share an edge.
  CHECK(tree.has_edge({8, 9}));
}

TEST_CASE("mst with a unique optimum") {
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(3, 3);
  w(0, 1) = w(1, 0) = 0.9;
  w(0, 2) = w(2, 0) = 0.5;
  w(1, 2) = w(2, 1) = 0.1;
  const auto tree = mst(WeightedNetwork(make_labels(3), w, NetworkKind::sample));
  CHECK(edge_set(tree) == std::set<VertexPair>{{0, 1}, {0, 2}});
}

TEST_CASE("mst matches exhaustive enumeration on random networks") {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 100; ++round) {
    const int n = 4 + static_cast<int>(rng() % 3);  // 4..6
    const Eigen::MatrixXd w = testsupport::random_symmetric_matrix(n, rng);
    const auto tree = mst(WeightedNetwork(make_labels(n), w, NetworkKind::sample));
    CHECK(edge_set(tree) == testsupport::best_spanning_tree_bruteforce(w));
  }
}

TEST_CASE("mst outputs are spanning trees") {
  std::mt19937_64 rng(102);
  for (int round = 0; round < 50; ++round) {
    const int n = 3 + static_cast<int>(rng() % 10);
    const Eigen::MatrixXd w = testsupport::random_symmetric_matrix(n, rng);
    const auto tree = mst(WeightedNetwork(make_labels(n), w, NetworkKind::sample));
    CHECK(static_cast<int>(tree.edges.size()) == n - 1);
    CHECK(component_count(tree) == 1);  // connected and acyclic at n-1 edges
  }
}

TEST_CASE("planarity_check on the classics") {
  const auto complete_edges = [](int n) {
    std::vector<VertexPair> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return edges;
  };
  CHECK(planarity_check(complete_edges(4), 4));
  CHECK_FALSE(planarity_check(complete_edges(5), 5));
  std::vector<VertexPair> k33;
  for (int i = 0; i < 3; ++i) {
    for (int j = 3; j < 6; ++j) k33.emplace_back(i, j);
  }
  CHECK_FALSE(planarity_check(k33, 6));
}

TEST_CASE("demoucron oracle agrees with the library planarity test") {
  const auto complete_edges = [](int n) {
    std::vector<VertexPair> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return edges;
  };
  CHECK(testsupport::planar_demoucron(4, complete_edges(4)));
  CHECK_FALSE(testsupport::planar_demoucron(5, complete_edges(5)));
  CHECK_FALSE(testsupport::planar_demoucron(6, complete_edges(6)));
  std::vector<VertexPair> k33;
  for (int i = 0; i < 3; ++i) {
    for (int j = 3; j < 6; ++j) k33.emplace_back(i, j);
  }
  CHECK_FALSE(testsupport::planar_demoucron(6, k33));
  // Petersen graph.
  const std::vector<VertexPair> petersen = {
      {0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {0, 5}, {1, 6}, {2, 7},
      {3, 8}, {4, 9}, {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}};
  CHECK_FALSE(testsupport::planar_demoucron(10, petersen));
  // 4x4 grid is planar.
  std::vector<VertexPair> grid;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (c + 1 < 4) grid.emplace_back(4 * r + c, 4 * r + c + 1);
      if (r + 1 < 4) grid.emplace_back(4 * r + c, 4 * (r + 1) + c);
    }
  }
  CHECK(testsupport::planar_demoucron(16, grid));

  std::mt19937_64 rng(103);
  for (int round = 0; round < 300; ++round) {
    const int n = 5 + static_cast<int>(rng() % 8);  // 5..12
    const double p = 0.15 + 0.55 * (rng() % 100) / 100.0;
    std::vector<VertexPair> edges;
    std::bernoulli_distribution coin(p);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (coin(rng)) edges.emplace_back(i, j);
      }
    }
    INFO("n=" << n << " edges=" << edges.size());
    CHECK(testsupport::planar_demoucron(n, edges) == planarity_check(edges, n));
  }
}

TEST_CASE("pmfg on complete 4- and 5-vertex networks") {
  std::mt19937_64 rng(104);
  SECTION("K4 keeps all edges") {
    const Eigen::MatrixXd w = testsupport::random_symmetric_matrix(4, rng);
    const auto g = pmfg(WeightedNetwork(make_labels(4), w, NetworkKind::sample));
    CHECK(g.edges.size() == 6);
  }
  SECTION("K5 drops exactly the minimum-weight edge") {
    for (int round = 0; round < 20; ++round) {
      const Eigen::MatrixXd w = testsupport::random_symmetric_matrix(5, rng);
      const auto g = pmfg(WeightedNetwork(make_labels(5), w, NetworkKind::sample));
      REQUIRE(g.edges.size() == 9);
      VertexPair minimum{-1, -1};
      double best = 2.0;
      for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
          if (w(i, j) < best) {
            best = w(i, j);
            minimum = {i, j};
          }
        }
      }
      CHECK_FALSE(g.has_edge(minimum));
      // Removing any single edge from K5 leaves a planar graph.
      std::vector<VertexPair> reduced;
      for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
          if (VertexPair{i, j} != minimum) reduced.emplace_back(i, j);
        }
      }
      CHECK(testsupport::planar_demoucron(5, reduced));
    }
  }
}

TEST_CASE("pmfg on the demo network") {
  const auto g = pmfg(demo_network());
  CHECK(g.edges.size() == 24);
  const auto tree = mst(demo_network());
  for (const auto& e : tree.edges) {
    CHECK(g.has_edge(e));
  }
  // Frozen greedy result, cross-checked against the Demoucron-based oracle.
  const std::set<VertexPair> expected = {
      {0, 1}, {0, 2}, {0, 7}, {0, 8}, {0, 9}, {1, 2}, {1, 6}, {1, 8},
      {1, 9}, {2, 9}, {3, 7}, {3, 8}, {3, 9}, {4, 5}, {4, 6}, {4, 8},
      {4, 9}, {5, 8}, {5, 9}, {6, 8}, {6, 9}, {7, 8}, {7, 9}, {8, 9}};
  CHECK(edge_set(g) == expected);
  CHECK(testsupport::pmfg_oracle(testsupport::demo_matrix()) == expected);
}

TEST_CASE("pmfg properties on random complete networks") {
  std::mt19937_64 rng(105);
  for (int round = 0; round < 25; ++round) {
    const int n = 4 + static_cast<int>(rng() % 9);  // 4..12
    const Eigen::MatrixXd w = testsupport::random_symmetric_matrix(n, rng);
    const WeightedNetwork net(make_labels(n), w, NetworkKind::sample);
    const auto g = pmfg(net);
    CHECK(static_cast<int>(g.edges.size()) == 3 * n - 6);
    CHECK(testsupport::planar_demoucron(n, g.edges));
    const auto tree = mst(net);
    for (const auto& e : tree.edges) {
      CHECK(g.has_edge(e));
    }
    CHECK(testsupport::pmfg_oracle(w) == edge_set(g));
  }
}

TEST_CASE("market_graph thresholds") {
  SECTION("theta = 1 empties the graph") {
    const auto g = market_graph(demo_network(), 1.0);
    CHECK(g.edges.empty());
    CHECK(component_count(g) == 10);
  }
  SECTION("demo network at 0.55") {
    const auto g = market_graph(demo_network(), 0.55);
    // Hand tally of upper-triangle entries above 0.55.
    int expected = 0;
    const auto& w = testsupport::demo_matrix();
    for (int i = 0; i < 10; ++i) {
      for (int j = i + 1; j < 10; ++j) {
        if (w(i, j) > 0.55) ++expected;
      }
    }
    CHECK(static_cast<int>(g.edges.size()) == expected);
    CHECK(expected == 27);
    CHECK(component_count(g) == 2);
  }
  SECTION("strict inequality at the threshold") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Identity(2, 2);
    w(0, 1) = w(1, 0) = 0.55;
    const auto g = market_graph(WeightedNetwork({"a", "b"}, w, NetworkKind::sample), 0.55);
    CHECK(g.edges.empty());
  }
  SECTION("monotone in theta") {
    std::mt19937_64 rng(106);
    const Eigen::MatrixXd w = testsupport::random_symmetric_matrix(9, rng);
    const WeightedNetwork net(make_labels(9), w, NetworkKind::sample);
    const auto loose = edge_set(market_graph(net, 0.1));
    const auto tight = edge_set(market_graph(net, 0.4));
    for (const auto& e : tight) {
      CHECK(loose.count(e) == 1);
    }
  }
  SECTION("theta outside [-1, 1] is rejected") {
    CHECK_THROWS_AS(market_graph(demo_network(), 1.5), data_error);
  }
}

TEST_CASE("mcmw on the demo network") {
  const auto clique = mcmw(demo_network(), 0.55);
  CHECK(clique.vertices == std::vector<int>{0, 1, 4, 6, 8, 9});
  CHECK(clique.edges.size() == 15);  // induced pairs of a 6-clique
}

TEST_CASE("mcmw of a complete market graph is everything") {
  std::mt19937_64 rng(107);
  Eigen::MatrixXd w = testsupport::random_symmetric_matrix(6, rng);
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      w(i, j) = w(j, i) = 0.5 + 0.4 * ((i + j) % 5) / 5.0;
    }
  }
  const auto clique = mcmw(WeightedNetwork(make_labels(6), w, NetworkKind::sample), 0.1);
  CHECK(clique.vertices == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("mismw on the demo network") {
  const auto is = mismw(demo_network(), 0.55);
  CHECK(is.vertices == std::vector<int>{2, 3, 5, 6});
  CHECK(is.edges.empty());
}

TEST_CASE("mismw of an empty market graph is everything") {
  const auto is = mismw(demo_network(), 1.0);
  CHECK(is.vertices == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("clique solvers match exhaustive enumeration") {
  std::mt19937_64 rng(108);
  for (int round = 0; round < 30; ++round) {
    const int n = 8 + static_cast<int>(rng() % 5);  // 8..12
    const Eigen::MatrixXd w = testsupport::random_symmetric_matrix(n, rng);
    const WeightedNetwork net(make_labels(n), w, NetworkKind::sample);
    const double theta = -0.4 + 0.8 * (rng() % 100) / 100.0;
    const auto graph = market_graph(net, theta);
    const auto adj = adjacency_matrix(graph, n);
    CHECK(mcmw(net, theta).vertices ==
          testsupport::best_clique_bruteforce(adj, w, true));
    CHECK(mismw(net, theta).vertices ==
          testsupport::best_independent_set_bruteforce(adj, w, false));
  }
}

TEST_CASE("clique and independent set are complement-dual") {
  std::mt19937_64 rng(109);
  for (int round = 0; round < 15; ++round) {
    const int n = 9;
    const Eigen::MatrixXd w = testsupport::random_symmetric_matrix(n, rng);
    const WeightedNetwork net(make_labels(n), w, NetworkKind::sample);
    Eigen::MatrixXd negated = -w;
    negated.diagonal().setOnes();
    const WeightedNetwork mirror(make_labels(n), negated, NetworkKind::sample);
    const double theta = 0.2;
    // MG(mirror, -theta) is the complement of MG(net, theta) when no weight
    // equals theta, and negated weights turn max-weight into min-weight.
    CHECK(mcmw(net, theta).vertices == mismw(mirror, -theta).vertices);
  }
}

TEST_CASE("filtrations are deterministic") {
  std::mt19937_64 rng(110);
  const Eigen::MatrixXd w = testsupport::random_symmetric_matrix(10, rng);
  const WeightedNetwork net(make_labels(10), w, NetworkKind::sample);
  CHECK(mst(net) == mst(net));
  CHECK(pmfg(net) == pmfg(net));
  CHECK(mcmw(net, 0.2) == mcmw(net, 0.2));
  CHECK(mismw(net, 0.2) == mismw(net, 0.2));
}

TEST_CASE("clique budget exhaustion is an error") {
  CliqueSolverBudget tiny;
  tiny.node_limit = 1;
  CHECK_THROWS_AS(mcmw(demo_network(), 0.55, tiny), budget_error);
  CliqueSolverBudget bad;
  bad.node_limit = 0;
  CHECK_THROWS_AS(mcmw(demo_network(), 0.55, bad), config_error);
}

TEST_CASE("pmfg needs three vertices") {
  CHECK_THROWS_AS(
      pmfg(WeightedNetwork({"a", "b"}, Eigen::MatrixXd::Identity(2, 2),
                           NetworkKind::reference)),
      data_error);
}
