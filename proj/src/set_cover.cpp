#include "tpvp/set_cover.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace tpvp {

namespace {

using Mask = std::vector<std::uint64_t>;

std::size_t popcount(const Mask& m) {
  std::size_t n = 0;
  for (std::uint64_t w : m) n += std::popcount(w);
  return n;
}

bool test_bit(const Mask& m, std::size_t i) {
  return (m[i / 64] >> (i % 64)) & 1u;
}

void set_bit(Mask& m, std::size_t i) { m[i / 64] |= std::uint64_t(1) << (i % 64); }

bool is_subset(const Mask& a, const Mask& b) {  // a subset of b
  for (std::size_t w = 0; w < a.size(); ++w)
    if (a[w] & ~b[w]) return false;
  return true;
}

std::size_t intersect_count(const Mask& a, const Mask& b) {
  std::size_t n = 0;
  for (std::size_t w = 0; w < a.size(); ++w) n += std::popcount(a[w] & b[w]);
  return n;
}

struct MaskHash {
  std::size_t operator()(const Mask& m) const {
    std::size_t h = 0;
    for (std::uint64_t w : m) h = h * 0x9e3779b97f4a7c15ULL + w;
    return h;
  }
};

struct BranchAndBound {
  const std::vector<Mask>& col_rows;  // per column, bitset over reduced rows
  std::vector<int> available;         // column indices, ascending
  std::size_t row_count;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool complete = true;

  std::vector<int> best;  // column indices of incumbent
  std::vector<int> current;

  void run(Mask uncovered) { recurse(std::move(uncovered)); }

  void recurse(Mask uncovered) {
    if (++nodes > budget) {
      complete = false;
      return;
    }
    const std::size_t remaining = popcount(uncovered);
    if (remaining == 0) {
      if (current.size() < best.size() ||
          (current.size() == best.size() && sorted(current) < sorted(best)))
        best = sorted(current);
      return;
    }
    // bound: every extra column covers at most max_gain rows
    std::size_t max_gain = 0;
    for (int c : available)
      max_gain = std::max(max_gain, intersect_count(col_rows[c], uncovered));
    if (max_gain == 0) return;  // infeasible branch (cannot happen at root)
    const std::size_t lb = (remaining + max_gain - 1) / max_gain;
    if (current.size() + lb > best.size()) return;

    // branch on the uncovered row with the fewest covering columns
    std::size_t branch_row = 0;
    std::vector<int> branch_cols;
    std::size_t fewest = SIZE_MAX;
    for (std::size_t r = 0; r < row_count; ++r) {
      if (!test_bit(uncovered, r)) continue;
      std::vector<int> cols;
      for (int c : available)
        if (test_bit(col_rows[c], r)) cols.push_back(c);
      if (cols.size() < fewest) {
        fewest = cols.size();
        branch_row = r;
        branch_cols = std::move(cols);
        if (fewest == 1) break;
      }
    }
    (void)branch_row;
    for (int c : branch_cols) {
      current.push_back(c);
      Mask next = uncovered;
      for (std::size_t w = 0; w < next.size(); ++w) next[w] &= ~col_rows[c][w];
      recurse(std::move(next));
      current.pop_back();
      if (!complete) return;
    }
  }

  static std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  }
};

}  // namespace

CoverSolution solve_cover(const VisibilityMatrix& matrix,
                          const std::vector<int>& visited, CoverMode mode,
                          std::uint64_t node_budget) {
  const std::size_t n_views = matrix.covered.size();
  std::vector<bool> is_visited_col(n_views, false);
  for (std::size_t c = 0; c < n_views; ++c)
    for (int v : visited)
      if (matrix.view_ids[c] == v) is_visited_col[c] = true;

  // rows to cover: not precovered by visited views, not uncoverable
  std::vector<bool> excluded(matrix.point_count, false);
  for (int p : matrix.uncoverable) excluded[p] = true;
  for (std::size_t c = 0; c < n_views; ++c)
    if (is_visited_col[c])
      for (std::size_t p = 0; p < matrix.point_count; ++p)
        if (matrix.covered[c][p]) excluded[p] = true;

  std::vector<int> columns;  // unvisited columns, ascending view id order
  {
    std::vector<std::size_t> order(n_views);
    for (std::size_t c = 0; c < n_views; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return matrix.view_ids[a] < matrix.view_ids[b];
    });
    for (std::size_t c : order)
      if (!is_visited_col[c]) columns.push_back(static_cast<int>(c));
  }

  std::vector<std::size_t> rows;
  for (std::size_t p = 0; p < matrix.point_count; ++p)
    if (!excluded[p]) rows.push_back(p);

  // feasibility
  std::vector<int> infeasible;
  for (std::size_t p : rows) {
    bool coverable = false;
    for (int c : columns)
      if (matrix.covered[c][p]) {
        coverable = true;
        break;
      }
    if (!coverable) infeasible.push_back(static_cast<int>(p));
  }
  if (!infeasible.empty()) {
    std::string msg = "solve_cover: points coverable by no unvisited view:";
    for (int p : infeasible) msg += " " + std::to_string(p);
    throw std::runtime_error(msg);
  }

  CoverSolution solution;
  auto finish = [&](std::vector<int> selected_cols, bool exact) {
    std::vector<int> ids;
    for (int c : selected_cols) ids.push_back(matrix.view_ids[c]);
    std::sort(ids.begin(), ids.end());
    solution.selected = std::move(ids);
    solution.objective = static_cast<int>(solution.selected.size());
    solution.exact = exact;
    solution.lower_bound = exact ? solution.objective : 0;
    for (int c : selected_cols) {
      int count = 0;
      for (std::size_t p = 0; p < matrix.point_count; ++p)
        if (matrix.covered[c][p]) ++count;
      solution.covered_counts.emplace_back(matrix.view_ids[c], count);
    }
    std::sort(solution.covered_counts.begin(), solution.covered_counts.end());
  };

  if (rows.empty()) {
    finish({}, true);
    return solution;
  }

  // greedy on the raw (unreduced) rows
  std::vector<int> greedy_cols;
  {
    std::vector<bool> covered_row(rows.size(), false);
    std::size_t remaining = rows.size();
    while (remaining > 0) {
      int best_col = -1;
      std::size_t best_gain = 0;
      for (int c : columns) {
        std::size_t gain = 0;
        for (std::size_t r = 0; r < rows.size(); ++r)
          if (!covered_row[r] && matrix.covered[c][rows[r]]) ++gain;
        if (gain > best_gain) {  // ties resolved by ascending id iteration order
          best_gain = gain;
          best_col = c;
        }
      }
      greedy_cols.push_back(best_col);
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (!covered_row[r] && matrix.covered[best_col][rows[r]]) {
          covered_row[r] = true;
          --remaining;
        }
    }
  }
  if (mode == CoverMode::kGreedy) {
    finish(std::move(greedy_cols), false);
    return solution;
  }

  // reduce rows: collapse duplicates, drop dominated rows (a row whose
  // covering-column set contains another row's set is implied by it)
  std::unordered_map<Mask, std::size_t, MaskHash> unique_rows;
  const std::size_t col_words = (columns.size() + 63) / 64;
  std::vector<Mask> row_masks;
  for (std::size_t p : rows) {
    Mask m(col_words, 0);
    for (std::size_t ci = 0; ci < columns.size(); ++ci)
      if (matrix.covered[columns[ci]][p]) set_bit(m, ci);
    if (!unique_rows.contains(m)) {
      unique_rows.emplace(m, row_masks.size());
      row_masks.push_back(std::move(m));
    }
  }
  std::vector<bool> row_dominated(row_masks.size(), false);
  for (std::size_t a = 0; a < row_masks.size(); ++a)
    for (std::size_t b = 0; b < row_masks.size(); ++b) {
      if (a == b || row_dominated[a]) continue;
      if (row_dominated[b]) continue;
      if (a != b && is_subset(row_masks[b], row_masks[a]) &&
          row_masks[a] != row_masks[b])
        row_dominated[a] = true;
    }
  std::vector<Mask> reduced_rows;
  for (std::size_t r = 0; r < row_masks.size(); ++r)
    if (!row_dominated[r]) reduced_rows.push_back(row_masks[r]);

  // column bitsets over reduced rows; drop columns dominated by a
  // smaller-id column with a superset of rows
  const std::size_t row_words = (reduced_rows.size() + 63) / 64;
  std::vector<Mask> col_rows(columns.size(), Mask(row_words, 0));
  for (std::size_t ci = 0; ci < columns.size(); ++ci)
    for (std::size_t r = 0; r < reduced_rows.size(); ++r)
      if (test_bit(reduced_rows[r], ci)) set_bit(col_rows[ci], r);
  std::vector<int> available;
  for (std::size_t ci = 0; ci < columns.size(); ++ci) {
    bool dominated = false;
    for (std::size_t cj = 0; cj < ci && !dominated; ++cj)
      if (is_subset(col_rows[ci], col_rows[cj])) dominated = true;
    if (!dominated && popcount(col_rows[ci]) > 0)
      available.push_back(static_cast<int>(ci));
  }

  BranchAndBound bnb{col_rows, available, reduced_rows.size(), node_budget};
  {
    // seed the incumbent with the greedy cover, mapped from raw column ids
    // to positions in `columns`
    std::vector<int> greedy_ci;
    for (int c : greedy_cols) {
      const auto it = std::find(columns.begin(), columns.end(), c);
      greedy_ci.push_back(static_cast<int>(it - columns.begin()));
    }
    bnb.best = BranchAndBound::sorted(greedy_ci);
  }
  Mask all(row_words, 0);
  for (std::size_t r = 0; r < reduced_rows.size(); ++r) set_bit(all, r);
  bnb.run(std::move(all));

  std::vector<int> best_cols;
  for (int ci : bnb.best) best_cols.push_back(columns[ci]);
  finish(std::move(best_cols), bnb.complete);
  return solution;
}

}  // namespace tpvp
