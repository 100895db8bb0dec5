#pragma once

#include <vector>

#include "tpvp/view_space.hpp"

namespace tpvp {

struct ViewPath {
  std::vector<int> order;   // view ids, starting with the fixed start view
  Scalar total_cost = 0;    // accumulated Euclidean length in meters
  bool exact = true;        // false when the heuristic fallback ran
};

/// Minimum-cost open path from `start` visiting every view once
/// (Held-Karp dynamic programming over subsets). Beyond `exact_limit`
/// views it falls back to nearest-neighbor plus 2-opt, flagged inexact.
ViewPath shortest_hamiltonian_path(const View& start, const std::vector<View>& views,
                                   int exact_limit = 20);

}  // namespace tpvp
