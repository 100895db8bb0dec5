#include "tpvp/nbv.hpp"

#include <algorithm>
#include <stdexcept>

namespace tpvp {

const View& next_best_view(const OccupancyGrid& current_map,
                           const ViewSpace& candidates,
                           const std::vector<int>& visited) {
  const std::vector<VoxelKey> boundary = current_map.boundary_voxels();

  const View* best = nullptr;
  std::size_t best_gain = 0;
  for (const View& v : candidates.views) {
    if (std::find(visited.begin(), visited.end(), v.id) != visited.end()) continue;
    std::size_t gain = 0;
    for (const VoxelKey& key : boundary)
      if (current_map.point_visible(v.position, current_map.center_of(key))) ++gain;
    if (!best || gain > best_gain ||
        (gain == best_gain && v.id < best->id)) {
      best = &v;
      best_gain = gain;
    }
  }
  if (!best) throw std::invalid_argument("next_best_view: no unvisited candidate");
  return *best;
}

}  // namespace tpvp
