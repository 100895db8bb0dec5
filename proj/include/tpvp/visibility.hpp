#pragma once

#include <vector>

#include "tpvp/occupancy_grid.hpp"
#include "tpvp/view_space.hpp"

namespace tpvp {

/// Boolean point-view visibility indicator over surface points x
/// candidate views, stored as one bitset per view.
struct VisibilityMatrix {
  std::size_t point_count = 0;
  std::vector<std::vector<bool>> covered;  // [view][point]
  std::vector<int> view_ids;               // column -> view id
  std::vector<int> uncoverable;            // points visible from no view

  bool visible(std::size_t view_col, std::size_t point) const {
    return covered[view_col][point];
  }
};

/// Exhaustive ray-cast evaluation of every (surface point, view) pair.
/// Points visible from no view land in `uncoverable`.
VisibilityMatrix build_visibility(const PointCloud& surface, const ViewSpace& views,
                                  const OccupancyGrid& grid);

}  // namespace tpvp
