#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "netsift/clique.hpp"
#include "netsift/errors.hpp"
#include "netsift/network.hpp"
#include "netsift/planarity.hpp"

namespace netsift {

namespace detail {

struct RankedEdge {
  double weight;
  int u, v;
};

// Weight descending, then (u, v) ascending: the deterministic tie-break used
// by every filtration here.
inline std::vector<RankedEdge> edges_by_weight(const WeightedNetwork& network) {
  const int n = network.size();
  std::vector<RankedEdge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      edges.push_back({network.weight(i, j), i, j});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const RankedEdge& a, const RankedEdge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  return edges;
}

inline std::vector<int> all_vertices(int n) {
  std::vector<int> vs(static_cast<std::size_t>(n));
  std::iota(vs.begin(), vs.end(), 0);
  return vs;
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

inline std::vector<boost::dynamic_bitset<>> adjacency_bitsets(
    const NetworkStructure& graph, int n) {
  std::vector<boost::dynamic_bitset<>> adj(
      static_cast<std::size_t>(n), boost::dynamic_bitset<>(static_cast<std::size_t>(n)));
  for (const auto& [u, v] : graph.edges) {
    adj[static_cast<std::size_t>(u)].set(static_cast<std::size_t>(v));
    adj[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(u));
  }
  return adj;
}

}  // namespace detail

/// Spanning tree of maximal total weight (Kruskal on descending weights).
inline NetworkStructure mst(const WeightedNetwork& network) {
  const int n = network.size();
  detail::DisjointSet dsu(n);
  std::vector<VertexPair> picked;
  picked.reserve(static_cast<std::size_t>(n - 1));
  for (const auto& e : detail::edges_by_weight(network)) {
    if (dsu.unite(e.u, e.v)) {
      picked.emplace_back(e.u, e.v);
      if (static_cast<int>(picked.size()) == n - 1) break;
    }
  }
  if (static_cast<int>(picked.size()) != n - 1) {
    throw data_error("input network is disconnected; no spanning tree exists");
  }
  return make_structure(StructureKind::mst, std::nullopt,
                        detail::all_vertices(n), std::move(picked));
}

/// Planar maximally filtered graph: greedy insertion in descending weight
/// order, keeping an edge only if the graph stays planar. The Euler bound
/// 3N-6 only caps the loop; acceptance is decided by the exact test.
inline NetworkStructure pmfg(const WeightedNetwork& network) {
  const int n = network.size();
  if (n < 3) {
    throw data_error("PMFG needs at least 3 vertices");
  }
  const std::size_t max_edges = static_cast<std::size_t>(3 * n - 6);
  std::vector<VertexPair> accepted;
  accepted.reserve(max_edges);
  for (const auto& e : detail::edges_by_weight(network)) {
    if (accepted.size() == max_edges) break;
    accepted.emplace_back(e.u, e.v);
    if (!planarity_check(accepted, n)) {
      accepted.pop_back();
    }
  }
  return make_structure(StructureKind::pmfg, std::nullopt,
                        detail::all_vertices(n), std::move(accepted));
}

/// Market graph: edge wherever similarity strictly exceeds theta.
inline NetworkStructure market_graph(const WeightedNetwork& network, double theta) {
  if (!(theta >= -1.0 && theta <= 1.0)) {
    throw data_error("market graph threshold must lie in [-1, 1]");
  }
  const int n = network.size();
  std::vector<VertexPair> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (network.weight(i, j) > theta) {
        edges.emplace_back(i, j);
      }
    }
  }
  return make_structure(StructureKind::mg, theta, detail::all_vertices(n),
                        std::move(edges));
}

/// Maximum clique of the market graph; among maximum-size cliques the one of
/// maximal summed network weight, residual ties lexicographic.
inline NetworkStructure mcmw(const WeightedNetwork& network, double theta,
                             const CliqueSolverBudget& budget = {},
                             bool* lex_tie_break = nullptr) {
  const NetworkStructure graph = market_graph(network, theta);
  const auto adj = detail::adjacency_bitsets(graph, network.size());
  const CliqueSolution sol =
      max_clique_best(adj, network.weights(), /*maximize_weight=*/true, budget);
  if (lex_tie_break) *lex_tie_break = sol.lex_tie_break;
  std::vector<VertexPair> edges;
  for (std::size_t i = 0; i < sol.vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < sol.vertices.size(); ++j) {
      edges.emplace_back(sol.vertices[i], sol.vertices[j]);
    }
  }
  return make_structure(StructureKind::mcmw, theta, sol.vertices, std::move(edges));
}

/// Maximum independent set of the market graph (clique of the complement);
/// among maximum-size sets the one of minimal summed network weight. The
/// edge set is the induced market-graph pairs, which is empty by
/// independence.
inline NetworkStructure mismw(const WeightedNetwork& network, double theta,
                              const CliqueSolverBudget& budget = {},
                              bool* lex_tie_break = nullptr) {
  const NetworkStructure graph = market_graph(network, theta);
  auto adj = detail::adjacency_bitsets(graph, network.size());
  for (std::size_t v = 0; v < adj.size(); ++v) {
    adj[v].flip();
    adj[v].reset(v);
  }
  const CliqueSolution sol =
      max_clique_best(adj, network.weights(), /*maximize_weight=*/false, budget);
  if (lex_tie_break) *lex_tie_break = sol.lex_tie_break;
  return make_structure(StructureKind::mismw, theta, sol.vertices, {});
}

}  // namespace netsift
