#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "netsift/errors.hpp"

namespace netsift {

enum class NetworkKind { reference, sample };

/// The filtered-structure families the library extracts.
enum class StructureKind { mst, pmfg, mg, mcmw, mismw };

inline bool kind_uses_theta(StructureKind kind) {
  return kind == StructureKind::mg || kind == StructureKind::mcmw ||
         kind == StructureKind::mismw;
}

inline const char* to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::mst: return "MST";
    case StructureKind::pmfg: return "PMFG";
    case StructureKind::mg: return "MG";
    case StructureKind::mcmw: return "MCMW";
    case StructureKind::mismw: return "MISMW";
  }
  return "?";
}

inline StructureKind structure_kind_from_string(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (name == "MST") return StructureKind::mst;
  if (name == "PMFG") return StructureKind::pmfg;
  if (name == "MG") return StructureKind::mg;
  if (name == "MCMW") return StructureKind::mcmw;
  if (name == "MISMW") return StructureKind::mismw;
  throw config_error("unknown structure kind '" + name +
                     "' (expected MST, PMFG, MG, MCMW or MISMW)");
}

using VertexPair = std::pair<int, int>;

/// Complete weighted graph over labeled vertices. Weights are similarity
/// values; reference networks are correlation matrices (entries in [-1, 1],
/// unit diagonal). Immutable after construction, safe to share across
/// threads.
class WeightedNetwork {
 public:
  WeightedNetwork(std::vector<std::string> labels, Eigen::MatrixXd weights,
                  NetworkKind kind)
      : labels_(std::move(labels)), weights_(std::move(weights)), kind_(kind) {
    const auto n = static_cast<Eigen::Index>(labels_.size());
    if (weights_.rows() != weights_.cols()) {
      throw data_error("weight matrix must be square");
    }
    if (weights_.rows() != n) {
      throw data_error("label count does not match matrix dimension");
    }
    if (n < 2) {
      throw data_error("a network needs at least 2 vertices");
    }
    if (std::set<std::string>(labels_.begin(), labels_.end()).size() !=
        labels_.size()) {
      throw data_error("vertex labels must be unique");
    }
    if (!weights_.allFinite()) {
      throw data_error("weight matrix contains non-finite entries");
    }
    const double asymmetry =
        (weights_ - weights_.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > 1e-12) {
      throw data_error("weight matrix is asymmetric beyond tolerance 1e-12");
    }
    // Bit-exact symmetrization: (a+b)/2 evaluates identically on both sides.
    weights_ = ((weights_ + weights_.transpose()) / 2.0).eval();
    if (kind_ == NetworkKind::reference) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (weights_(i, i) != 1.0) {
          throw data_error("reference correlation matrix must have unit diagonal");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
          if (weights_(i, j) < -1.0 || weights_(i, j) > 1.0) {
            throw data_error("reference correlation entry out of [-1, 1] at (" +
                             std::to_string(i) + ", " + std::to_string(j) + ")");
          }
        }
      }
    }
  }

  int size() const { return static_cast<int>(weights_.rows()); }
  double weight(int i, int j) const { return weights_(i, j); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const std::vector<std::string>& labels() const { return labels_; }
  NetworkKind kind() const { return kind_; }

  int index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
      throw data_error("unknown vertex label '" + label + "'");
    }
    return static_cast<int>(it - labels_.begin());
  }

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixXd weights_;
  NetworkKind kind_;
};

inline WeightedNetwork build_network(std::vector<std::string> labels,
                                     Eigen::MatrixXd weights,
                                     NetworkKind kind) {
  return WeightedNetwork(std::move(labels), std::move(weights), kind);
}

/// Unweighted subgraph extracted by a filtration. Edges are stored
/// canonically (u < v, ascending, no duplicates) so equality is independent
/// of construction order.
struct NetworkStructure {
  StructureKind kind = StructureKind::mst;
  std::optional<double> theta;
  std::vector<int> vertices;
  std::vector<VertexPair> edges;

  friend bool operator==(const NetworkStructure&, const NetworkStructure&) = default;

  bool has_edge(VertexPair e) const {
    if (e.first > e.second) std::swap(e.first, e.second);
    return std::binary_search(edges.begin(), edges.end(), e);
  }
};

inline NetworkStructure make_structure(StructureKind kind,
                                       std::optional<double> theta,
                                       std::vector<int> vertices,
                                       std::vector<VertexPair> edges) {
  if (kind_uses_theta(kind) != theta.has_value()) {
    throw config_error(std::string("structure kind ") + to_string(kind) +
                       (theta ? " does not take a threshold" : " requires a threshold"));
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  for (auto& e : edges) {
    if (e.first == e.second) {
      throw data_error("self-loop in structure edge set");
    }
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& [u, v] : edges) {
    if (!std::binary_search(vertices.begin(), vertices.end(), u) ||
        !std::binary_search(vertices.begin(), vertices.end(), v)) {
      throw data_error("structure edge endpoint outside the vertex set");
    }
  }
  return NetworkStructure{kind, theta, std::move(vertices), std::move(edges)};
}

/// Vertex degrees over indices 0..n-1, sorted ascending.
inline std::vector<int> degree_vector(const NetworkStructure& structure, int n) {
  std::vector<int> degrees(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : structure.edges) {
    if (u < 0 || v >= n) {
      throw data_error("structure edge index outside 0..n-1");
    }
    ++degrees[static_cast<std::size_t>(u)];
    ++degrees[static_cast<std::size_t>(v)];
  }
  std::sort(degrees.begin(), degrees.end());
  return degrees;
}

/// Connected components over the structure's own vertex set.
inline int component_count(const NetworkStructure& structure) {
  const auto& vs = structure.vertices;
  std::vector<int> parent(vs.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  const auto local = [&](int v) {
    const auto it = std::lower_bound(vs.begin(), vs.end(), v);
    return static_cast<int>(it - vs.begin());
  };
  int components = static_cast<int>(vs.size());
  for (const auto& [u, v] : structure.edges) {
    const int ru = find(local(u));
    const int rv = find(local(v));
    if (ru != rv) {
      parent[ru] = rv;
      --components;
    }
  }
  return components;
}

}  // namespace netsift
