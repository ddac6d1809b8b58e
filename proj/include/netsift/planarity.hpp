#pragma once

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include <vector>

#include "netsift/network.hpp"

namespace netsift {

/// Exact planarity test (Boyer-Myrvold). The Euler bound is never used as
/// the decision rule here.
inline bool planarity_check(const std::vector<VertexPair>& edges, int n) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  Graph g(static_cast<std::size_t>(n));
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw data_error("planarity_check: edge index outside 0..n-1");
    }
    boost::add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v), g);
  }
  return boost::boyer_myrvold_planarity_test(g);
}

}  // namespace netsift
