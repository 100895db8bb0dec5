#pragma once

#include <vector>

#include "tpvp/occupancy_grid.hpp"
#include "tpvp/view_space.hpp"

namespace tpvp {

/// Greedy visibility-gain next-best view: the unvisited candidate seeing
/// the most map-boundary voxels (occupied voxels adjacent to unknown
/// space). Ties and all-zero gains resolve to the lowest unvisited id.
const View& next_best_view(const OccupancyGrid& current_map,
                           const ViewSpace& candidates,
                           const std::vector<int>& visited);

}  // namespace tpvp
