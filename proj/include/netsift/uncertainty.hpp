#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netsift/errors.hpp"
#include "netsift/filtration.hpp"
#include "netsift/network.hpp"
#include "netsift/parallel.hpp"
#include "netsift/stats.hpp"

namespace netsift {

/// Per-comparison error tally. x1 counts incorrectly included edges
/// (Type I), x2 incorrectly missing edges (Type II); m1/m2 are the largest
/// values x1/x2 can take for the structure at hand. A zero m makes the
/// corresponding ratio in the error fraction 0 (no pairs, no errors
/// possible).
struct ErrorCounts {
  int x1 = 0;
  int x2 = 0;
  int m1 = 0;
  int m2 = 0;
};

/// Type I / Type II losses per vertex pair (symmetric, zero diagonal,
/// nonnegative).
struct LossSpec {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
};

inline LossSpec make_loss_spec(Eigen::MatrixXd a, Eigen::MatrixXd b) {
  const auto check = [](Eigen::MatrixXd& m, const char* name) {
    if (m.rows() != m.cols()) {
      throw data_error(std::string("loss matrix ") + name + " must be square");
    }
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw data_error(std::string("loss matrix ") + name + " must be symmetric");
    }
    m = ((m + m.transpose()) / 2.0).eval();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, i) != 0.0) {
        throw data_error(std::string("loss matrix ") + name + " must have zero diagonal");
      }
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (!(m(i, j) >= 0.0)) {
          throw data_error(std::string("loss matrix ") + name + " must be nonnegative");
        }
      }
    }
  };
  check(a, "a");
  check(b, "b");
  if (a.rows() != b.rows()) {
    throw data_error("loss matrices a and b must have equal dimensions");
  }
  return {std::move(a), std::move(b)};
}

/// Estimated per-pair error probabilities accumulated over trials. For MCMW
/// only p2 is populated (reference-clique pairs judged in the sample market
/// graph) and for MISMW only p1; those are the sides with fixed pair sets.
struct ErrorProbabilities {
  Eigen::MatrixXd p1;
  Eigen::MatrixXd p2;
  int trials = 0;
};

struct CurvePoint {
  int n = 0;
  double mean_x = 0.0;
  double mean_x1_ratio = 0.0;
  double mean_x2_ratio = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

struct UncertaintyCurve {
  StructureKind kind = StructureKind::mst;
  std::optional<double> theta;
  std::vector<CurvePoint> points;  // n strictly increasing
  std::uint64_t seed = 0;
};

struct UncertaintyEstimate {
  CurvePoint point;
  ErrorProbabilities probs;
  int lex_tie_trials = 0;  // trials decided by the lexicographic fallback
};

namespace detail {

inline int binom2(int k) { return k * (k - 1) / 2; }

struct ErrorBreakdown {
  ErrorCounts counts;
  std::vector<VertexPair> type1_pairs;
  std::vector<VertexPair> type2_pairs;
};

inline std::vector<VertexPair> pairs_of(const std::vector<int>& vertices) {
  std::vector<VertexPair> out;
  out.reserve(static_cast<std::size_t>(binom2(static_cast<int>(vertices.size()))));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      out.emplace_back(vertices[i], vertices[j]);
    }
  }
  return out;
}

}  // namespace detail

inline detail::ErrorBreakdown count_errors_detail(
    StructureKind kind, const NetworkStructure& reference,
    const NetworkStructure& sample,
    const NetworkStructure* reference_mg = nullptr,
    const NetworkStructure* sample_mg = nullptr) {
  if (reference.kind != kind || sample.kind != kind) {
    throw data_error("count_errors: structure kinds do not match");
  }
  detail::ErrorBreakdown out;
  switch (kind) {
    case StructureKind::mst:
    case StructureKind::pmfg:
    case StructureKind::mg: {
      if (reference.vertices.size() != sample.vertices.size()) {
        throw data_error("count_errors: vertex counts differ");
      }
      const int n = static_cast<int>(reference.vertices.size());
      std::set_difference(sample.edges.begin(), sample.edges.end(),
                          reference.edges.begin(), reference.edges.end(),
                          std::back_inserter(out.type1_pairs));
      std::set_difference(reference.edges.begin(), reference.edges.end(),
                          sample.edges.begin(), sample.edges.end(),
                          std::back_inserter(out.type2_pairs));
      if (kind == StructureKind::mst) {
        out.counts.m1 = out.counts.m2 = n - 1;
      } else if (kind == StructureKind::pmfg) {
        out.counts.m1 = out.counts.m2 = 3 * n - 6;
      } else {
        const int m = static_cast<int>(reference.edges.size());
        out.counts.m1 = detail::binom2(n) - m;
        out.counts.m2 = m;
      }
      break;
    }
    case StructureKind::mcmw: {
      if (!reference_mg || !sample_mg) {
        throw config_error("count_errors: MCMW needs both market graphs");
      }
      // Type I: sample-clique pairs that are non-edges of the reference
      // market graph. Type II: reference-clique pairs missing from the
      // sample market graph.
      for (const auto& pair : detail::pairs_of(sample.vertices)) {
        if (!reference_mg->has_edge(pair)) out.type1_pairs.push_back(pair);
      }
      for (const auto& pair : detail::pairs_of(reference.vertices)) {
        if (!sample_mg->has_edge(pair)) out.type2_pairs.push_back(pair);
      }
      out.counts.m1 = detail::binom2(static_cast<int>(sample.vertices.size()));
      out.counts.m2 = detail::binom2(static_cast<int>(reference.vertices.size()));
      break;
    }
    case StructureKind::mismw: {
      if (!reference_mg || !sample_mg) {
        throw config_error("count_errors: MISMW needs both market graphs");
      }
      // Type I: reference-set pairs that appear as sample market-graph
      // edges. Type II: sample-set pairs that appear as reference
      // market-graph edges.
      for (const auto& pair : detail::pairs_of(reference.vertices)) {
        if (sample_mg->has_edge(pair)) out.type1_pairs.push_back(pair);
      }
      for (const auto& pair : detail::pairs_of(sample.vertices)) {
        if (reference_mg->has_edge(pair)) out.type2_pairs.push_back(pair);
      }
      out.counts.m1 = detail::binom2(static_cast<int>(reference.vertices.size()));
      out.counts.m2 = detail::binom2(static_cast<int>(sample.vertices.size()));
      break;
    }
  }
  out.counts.x1 = static_cast<int>(out.type1_pairs.size());
  out.counts.x2 = static_cast<int>(out.type2_pairs.size());
  return out;
}

inline ErrorCounts count_errors(StructureKind kind,
                                const NetworkStructure& reference,
                                const NetworkStructure& sample,
                                const NetworkStructure* reference_mg = nullptr,
                                const NetworkStructure* sample_mg = nullptr) {
  return count_errors_detail(kind, reference, sample, reference_mg, sample_mg).counts;
}

/// Total fraction of errors X = (x1/m1 + x2/m2) / 2, in [0, 1].
inline double fraction_of_error(const ErrorCounts& counts) {
  if (counts.x1 < 0 || counts.x2 < 0 || counts.x1 > counts.m1 ||
      counts.x2 > counts.m2) {
    throw data_error("invalid error counts");
  }
  const double term1 =
      counts.m1 > 0 ? static_cast<double>(counts.x1) / counts.m1 : 0.0;
  const double term2 =
      counts.m2 > 0 ? static_cast<double>(counts.x2) / counts.m2 : 0.0;
  return 0.5 * (term1 + term2);
}

/// Loss-weighted sum of per-pair error probabilities over i < j.
inline double conditional_risk(const LossSpec& losses,
                               const ErrorProbabilities& probs) {
  if (losses.a.rows() != probs.p1.rows() || probs.p1.rows() != probs.p2.rows()) {
    throw data_error("conditional_risk: dimension mismatch");
  }
  long double total = 0.0L;
  for (Eigen::Index i = 0; i < losses.a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < losses.a.cols(); ++j) {
      total += static_cast<long double>(losses.a(i, j)) * probs.p1(i, j);
      total += static_cast<long double>(losses.b(i, j)) * probs.p2(i, j);
    }
  }
  return static_cast<double>(total);
}

/// Reference or sample structure of the requested kind.
inline NetworkStructure build_structure(const WeightedNetwork& network,
                                        StructureKind kind,
                                        std::optional<double> theta,
                                        const CliqueSolverBudget& budget = {},
                                        bool* lex_tie_break = nullptr) {
  if (kind_uses_theta(kind) != theta.has_value()) {
    throw config_error(std::string("structure kind ") + to_string(kind) +
                       (theta ? " does not take a threshold" : " requires a threshold"));
  }
  if (lex_tie_break) *lex_tie_break = false;
  switch (kind) {
    case StructureKind::mst: return mst(network);
    case StructureKind::pmfg: return pmfg(network);
    case StructureKind::mg: return market_graph(network, *theta);
    case StructureKind::mcmw: return mcmw(network, *theta, budget, lex_tie_break);
    case StructureKind::mismw: return mismw(network, *theta, budget, lex_tie_break);
  }
  throw config_error("unknown structure kind");
}

/// Monte Carlo estimate of the uncertainty measures: per trial, simulate n
/// observations from the reference correlations, rebuild the structure from
/// the sample correlations, and tally errors against the reference
/// structure. Trials fan out across workers; aggregation is in trial order,
/// so results are bit-identical for any worker count.
inline UncertaintyEstimate estimate_uncertainty(
    const WeightedNetwork& reference, StructureKind kind,
    std::optional<double> theta, int n, int trials, std::uint64_t seed,
    const CliqueSolverBudget& budget = {}) {
  if (trials < 1) throw config_error("trials must be at least 1");
  if (n < 2) throw config_error("observation count must be at least 2");
  validate_budget(budget);

  const int size = reference.size();
  const Eigen::MatrixXd factor = cholesky_factor(reference.weights());
  const bool clique_kind =
      kind == StructureKind::mcmw || kind == StructureKind::mismw;

  const NetworkStructure ref_struct =
      build_structure(reference, kind, theta, budget);
  std::optional<NetworkStructure> ref_mg;
  if (clique_kind) {
    ref_mg = market_graph(reference, *theta);
  }

  struct TrialResult {
    double x = 0.0;
    double ratio1 = 0.0;
    double ratio2 = 0.0;
    std::vector<VertexPair> p1_pairs;
    std::vector<VertexPair> p2_pairs;
    bool lex_tie = false;
  };
  std::vector<TrialResult> results(static_cast<std::size_t>(trials));

  parallel_trials(trials, [&](int t) {
    const std::uint64_t trial_seed =
        rng::derive_stream(seed, static_cast<std::uint64_t>(t));
    TrialResult& slot = results[static_cast<std::size_t>(t)];
    try {
      const ReturnsMatrix sample = mvn_sample_rows(factor, n, trial_seed);
      const SampleMoments moments = sample_moments(sample);
      const WeightedNetwork net = sample_network(reference, moments);
      const NetworkStructure smp_struct =
          build_structure(net, kind, theta, budget, &slot.lex_tie);
      std::optional<NetworkStructure> smp_mg;
      if (clique_kind) {
        smp_mg = market_graph(net, *theta);
      }
      const auto breakdown = count_errors_detail(
          kind, ref_struct, smp_struct, ref_mg ? &*ref_mg : nullptr,
          smp_mg ? &*smp_mg : nullptr);
      const ErrorCounts& c = breakdown.counts;
      if (kind == StructureKind::mst && c.x1 != c.x2) {
        throw std::logic_error("MST trial violated x1 == x2");
      }
      slot.x = fraction_of_error(c);
      slot.ratio1 = c.m1 > 0 ? static_cast<double>(c.x1) / c.m1 : 0.0;
      slot.ratio2 = c.m2 > 0 ? static_cast<double>(c.x2) / c.m2 : 0.0;
      switch (kind) {
        case StructureKind::mst:
        case StructureKind::pmfg:
        case StructureKind::mg:
          slot.p1_pairs = breakdown.type1_pairs;
          slot.p2_pairs = breakdown.type2_pairs;
          break;
        case StructureKind::mcmw:
          slot.p2_pairs = breakdown.type2_pairs;
          break;
        case StructureKind::mismw:
          slot.p1_pairs = breakdown.type1_pairs;
          break;
      }
    } catch (const budget_error& e) {
      throw budget_error("trial " + std::to_string(t) + ": " + e.what());
    }
  });

  long double sum_x = 0.0L, sum_xx = 0.0L, sum_r1 = 0.0L, sum_r2 = 0.0L;
  Eigen::MatrixXi count1 = Eigen::MatrixXi::Zero(size, size);
  Eigen::MatrixXi count2 = Eigen::MatrixXi::Zero(size, size);
  int lex_trials = 0;
  for (const TrialResult& r : results) {
    sum_x += r.x;
    sum_xx += static_cast<long double>(r.x) * r.x;
    sum_r1 += r.ratio1;
    sum_r2 += r.ratio2;
    for (const auto& [i, j] : r.p1_pairs) {
      ++count1(i, j);
      ++count1(j, i);
    }
    for (const auto& [i, j] : r.p2_pairs) {
      ++count2(i, j);
      ++count2(j, i);
    }
    lex_trials += r.lex_tie ? 1 : 0;
  }

  UncertaintyEstimate out;
  out.point.n = n;
  out.point.trials = trials;
  out.point.mean_x = static_cast<double>(sum_x / trials);
  out.point.mean_x1_ratio = static_cast<double>(sum_r1 / trials);
  out.point.mean_x2_ratio = static_cast<double>(sum_r2 / trials);
  if (trials > 1) {
    const long double var =
        std::max(0.0L, (sum_xx - sum_x * sum_x / trials) / (trials - 1));
    out.point.std_error = static_cast<double>(std::sqrt(static_cast<double>(var) / trials));
  }
  out.probs.p1 = count1.cast<double>() / static_cast<double>(trials);
  out.probs.p2 = count2.cast<double>() / static_cast<double>(trials);
  out.probs.trials = trials;
  out.lex_tie_trials = lex_trials;
  return out;
}

struct LevelSearchResult {
  std::optional<int> n_level;  // smallest qualifying grid point, if any
  UncertaintyCurve curve;      // the points actually evaluated
  bool monotone = true;        // means non-increasing over evaluated points
  double level = 0.0;
  int lex_tie_trials = 0;
};

/// Smallest grid n whose estimated mean X is at or below the level, with the
/// 95% upper confidence bound within one standard error of the level. The
/// grid is scanned in ascending order and the search stops at the first
/// qualifying point; a noisy non-decreasing stretch flips the monotone flag.
inline LevelSearchResult find_n_for_level(
    const WeightedNetwork& reference, StructureKind kind,
    std::optional<double> theta, double level, const std::vector<int>& n_grid,
    int trials, std::uint64_t seed, const CliqueSolverBudget& budget = {}) {
  if (n_grid.empty()) throw config_error("n_grid must be non-empty");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
      std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end()) {
    throw config_error("n_grid must be strictly ascending");
  }
  if (!(level > 0.0 && level <= 1.0)) {
    throw config_error("uncertainty level must lie in (0, 1]");
  }
  LevelSearchResult out;
  out.level = level;
  out.curve.kind = kind;
  out.curve.theta = theta;
  out.curve.seed = seed;
  for (const int n : n_grid) {
    const UncertaintyEstimate est =
        estimate_uncertainty(reference, kind, theta, n, trials, seed, budget);
    out.lex_tie_trials += est.lex_tie_trials;
    if (!out.curve.points.empty() &&
        est.point.mean_x > out.curve.points.back().mean_x) {
      out.monotone = false;
    }
    out.curve.points.push_back(est.point);
    const bool qualifies =
        est.point.mean_x <= level &&
        est.point.mean_x + 1.96 * est.point.std_error <=
            level + est.point.std_error;
    if (qualifies) {
      out.n_level = n;
      break;
    }
  }
  return out;
}

/// Frequencies of sample-MST degree vectors over Monte Carlo trials.
inline std::map<std::vector<int>, double> degree_vector_frequencies(
    const WeightedNetwork& reference, int n, int trials, std::uint64_t seed) {
  if (trials < 1) throw config_error("trials must be at least 1");
  if (n < 2) throw config_error("observation count must be at least 2");
  const int size = reference.size();
  const Eigen::MatrixXd factor = cholesky_factor(reference.weights());
  std::vector<std::vector<int>> vectors(static_cast<std::size_t>(trials));
  parallel_trials(trials, [&](int t) {
    const std::uint64_t trial_seed =
        rng::derive_stream(seed, static_cast<std::uint64_t>(t));
    const ReturnsMatrix sample = mvn_sample_rows(factor, n, trial_seed);
    const SampleMoments moments = sample_moments(sample);
    const WeightedNetwork net = sample_network(reference, moments);
    vectors[static_cast<std::size_t>(t)] = degree_vector(mst(net), size);
  });
  std::map<std::vector<int>, long> counts;
  for (const auto& v : vectors) {
    ++counts[v];
  }
  std::map<std::vector<int>, double> freqs;
  for (const auto& [v, c] : counts) {
    freqs[v] = static_cast<double>(c) / trials;
  }
  return freqs;
}

/// Counts of upper-triangle weights per half-open bin [lo, hi); the last bin
/// also includes its right edge so +1 correlations are counted.
inline std::vector<long long> edge_weight_histogram(
    const WeightedNetwork& network, const std::vector<double>& bin_edges) {
  if (bin_edges.size() < 2) {
    throw config_error("histogram needs at least two bin edges");
  }
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    if (!(bin_edges[i] > bin_edges[i - 1])) {
      throw config_error("histogram bin edges must be strictly ascending");
    }
  }
  if (bin_edges.front() > -1.0 || bin_edges.back() < 1.0) {
    throw config_error("histogram bin edges must cover [-1, 1]");
  }
  const std::size_t bins = bin_edges.size() - 1;
  std::vector<long long> counts(bins, 0);
  const int n = network.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = network.weight(i, j);
      auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), w);
      std::size_t idx = static_cast<std::size_t>(it - bin_edges.begin()) - 1;
      if (idx == bins) idx = bins - 1;  // w == last edge
      ++counts[idx];
    }
  }
  return counts;
}

/// Lower bound (N-1)/2 on the observations needed to avoid functional
/// dependence among the N(N-1)/2 estimated correlations.
inline double min_observation_bound(int n_vertices) {
  if (n_vertices < 2) throw config_error("need at least 2 vertices");
  return (n_vertices - 1) / 2.0;
}

}  // namespace netsift
