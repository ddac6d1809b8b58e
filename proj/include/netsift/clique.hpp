#pragma once

#include <Eigen/Dense>

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "netsift/errors.hpp"

namespace netsift {

/// Hard limits for the exact clique search. Exceeding a limit raises
/// budget_error; there is no heuristic fallback.
struct CliqueSolverBudget {
  std::int64_t node_limit = 100'000'000;
  double time_limit_seconds = 600.0;
};

inline void validate_budget(const CliqueSolverBudget& budget) {
  if (budget.node_limit <= 0 || !(budget.time_limit_seconds > 0.0)) {
    throw config_error("clique solver budget limits must be positive");
  }
}

struct CliqueSolution {
  std::vector<int> vertices;  // ascending
  double weight = 0.0;        // summed pair weight, canonical order
  // True when at least two optimal-size, equal-weight sets were seen and the
  // lexicographic fallback decided between them.
  bool lex_tie_break = false;
};

namespace detail {

class MaxCliqueSearch {
 public:
  MaxCliqueSearch(const std::vector<boost::dynamic_bitset<>>& adjacency,
                  const Eigen::MatrixXd& pair_weight, bool maximize_weight,
                  const CliqueSolverBudget& budget)
      : adj_(adjacency),
        weight_(pair_weight),
        maximize_(maximize_weight),
        budget_(budget),
        deadline_(std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(budget.time_limit_seconds))) {}

  CliqueSolution run() {
    const std::size_t n = adj_.size();
    boost::dynamic_bitset<> all(n);
    all.set();
    current_.reserve(n);
    expand(all);
    CliqueSolution out;
    out.vertices = best_;
    out.weight = best_weight_;
    out.lex_tie_break = lex_tie_;
    return out;
  }

 private:
  // Sum over pairs in ascending (i, j) order; fixed order keeps equal-weight
  // comparisons bit-deterministic.
  double set_weight(const std::vector<int>& sorted) const {
    double total = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      for (std::size_t j = i + 1; j < sorted.size(); ++j) {
        total += weight_(sorted[i], sorted[j]);
      }
    }
    return total;
  }

  void consider_leaf() {
    std::vector<int> candidate = current_;
    std::sort(candidate.begin(), candidate.end());
    if (candidate.size() < best_.size()) return;
    if (candidate.size() > best_.size()) {
      best_ = std::move(candidate);
      best_weight_ = set_weight(best_);
      lex_tie_ = false;
      return;
    }
    const double w = set_weight(candidate);
    const bool better = maximize_ ? (w > best_weight_) : (w < best_weight_);
    if (better) {
      best_ = std::move(candidate);
      best_weight_ = w;
      lex_tie_ = false;
    } else if (w == best_weight_ && candidate != best_) {
      lex_tie_ = true;
      if (candidate < best_) {
        best_ = std::move(candidate);
      }
    }
  }

  void charge_node() {
    if (++nodes_ > budget_.node_limit) {
      throw budget_error("clique solver exceeded node limit " +
                         std::to_string(budget_.node_limit));
    }
    if ((nodes_ & 0xFFF) == 0 &&
        std::chrono::steady_clock::now() > deadline_) {
      throw budget_error("clique solver exceeded time limit");
    }
  }

  void expand(const boost::dynamic_bitset<>& candidates) {
    charge_node();
    if (candidates.none()) {
      consider_leaf();
      return;
    }
    // Greedy coloring; color numbers bound the largest clique inside the
    // candidate set. Processed in reverse (highest color first).
    std::vector<int> order;
    std::vector<int> colors;
    {
      boost::dynamic_bitset<> uncolored = candidates;
      int color = 0;
      while (uncolored.any()) {
        ++color;
        boost::dynamic_bitset<> cls = uncolored;
        while (cls.any()) {
          const auto v = cls.find_first();
          order.push_back(static_cast<int>(v));
          colors.push_back(color);
          cls -= adj_[v];
          cls.reset(v);
          uncolored.reset(v);
        }
      }
    }
    boost::dynamic_bitset<> remaining = candidates;
    for (std::size_t idx = order.size(); idx-- > 0;) {
      const int v = order[idx];
      // Equal bound cannot be pruned: a same-size clique may still win on
      // weight or lexicographic order.
      if (current_.size() + static_cast<std::size_t>(colors[idx]) < best_.size()) {
        return;
      }
      current_.push_back(v);
      expand(remaining & adj_[static_cast<std::size_t>(v)]);
      current_.pop_back();
      remaining.reset(static_cast<std::size_t>(v));
    }
  }

  const std::vector<boost::dynamic_bitset<>>& adj_;
  const Eigen::MatrixXd& weight_;
  bool maximize_;
  CliqueSolverBudget budget_;
  std::chrono::steady_clock::time_point deadline_;
  std::int64_t nodes_ = 0;
  std::vector<int> current_;
  std::vector<int> best_;
  double best_weight_ = 0.0;
  bool lex_tie_ = false;
};

}  // namespace detail

/// Exact maximum clique; ties on size resolved by summed pair weight
/// (maximized or minimized), residual ties by lexicographically smallest
/// vertex set.
inline CliqueSolution max_clique_best(
    const std::vector<boost::dynamic_bitset<>>& adjacency,
    const Eigen::MatrixXd& pair_weight, bool maximize_weight,
    const CliqueSolverBudget& budget = {}) {
  validate_budget(budget);
  if (adjacency.empty()) {
    throw data_error("clique search needs at least one vertex");
  }
  detail::MaxCliqueSearch search(adjacency, pair_weight, maximize_weight, budget);
  return search.run();
}

}  // namespace netsift
