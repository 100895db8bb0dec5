#pragma once

#include <cstdint>
#include <vector>

#include "tpvp/visibility.hpp"

namespace tpvp {

enum class CoverMode { kExact, kGreedy };

struct CoverSolution {
  std::vector<int> selected;  // view ids, ascending
  int objective = 0;
  bool exact = false;          // false = greedy / budget-exhausted incumbent
  int lower_bound = 0;         // matches objective when exact
  std::vector<std::pair<int, int>> covered_counts;  // view id -> points it sees
};

/// Minimum set cover over the visibility matrix. Points covered by
/// visited views are removed first; uncoverable points listed in the
/// matrix are excluded from the constraints. Greedy picks the view
/// covering the most uncovered points (ties -> lowest id). Exact runs
/// branch-and-bound from the greedy incumbent and returns the
/// lexicographically smallest optimal id set; if the node budget runs
/// out the incumbent is returned flagged greedy. Throws if a remaining
/// point is coverable by no unvisited view.
CoverSolution solve_cover(const VisibilityMatrix& matrix,
                          const std::vector<int>& visited, CoverMode mode,
                          std::uint64_t node_budget = 5'000'000);

}  // namespace tpvp
