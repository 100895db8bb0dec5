#include "tpvp/occupancy_grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tpvp {

OccupancyGrid::OccupancyGrid(Scalar resolution) : resolution_(resolution) {
  if (resolution <= 0) throw std::invalid_argument("OccupancyGrid: resolution must be > 0");
}

VoxelKey OccupancyGrid::key_of(const Vec3& p) const {
  return VoxelKey{static_cast<int>(std::floor(p.x() / resolution_)),
                  static_cast<int>(std::floor(p.y() / resolution_)),
                  static_cast<int>(std::floor(p.z() / resolution_))};
}

Vec3 OccupancyGrid::center_of(const VoxelKey& key) const {
  return Vec3((key.x + 0.5) * resolution_, (key.y + 0.5) * resolution_,
              (key.z + 0.5) * resolution_);
}

VoxelState OccupancyGrid::state(const VoxelKey& key) const {
  const auto it = cells_.find(key);
  return it == cells_.end() ? VoxelState::kUnknown : it->second;
}

void OccupancyGrid::set_occupied(const VoxelKey& key) {
  VoxelState& s = cells_[key];
  if (s != VoxelState::kOccupied) {
    s = VoxelState::kOccupied;
    ++occupied_count_;
  }
}

void OccupancyGrid::set_free(const VoxelKey& key) {
  VoxelState& s = cells_[key];
  if (s == VoxelState::kUnknown) s = VoxelState::kFree;
}

void OccupancyGrid::insert_cloud(const PointCloud& cloud) {
  for (const Vec3& p : cloud.points) set_occupied(key_of(p));
}

PointCloud OccupancyGrid::extract_surface() const {
  if (occupied_count_ == 0)
    throw std::runtime_error("extract_surface: grid has no occupied voxels");
  std::vector<VoxelKey> keys;
  keys.reserve(occupied_count_);
  for (const auto& [key, s] : cells_)
    if (s == VoxelState::kOccupied) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  PointCloud out;
  out.points.reserve(keys.size());
  for (const VoxelKey& key : keys) out.points.push_back(center_of(key));
  return out;
}

// Amanatides-Woo voxel traversal from `from` to `to`, visiting voxels in
// order including both endpoints' voxels. The visitor returns false to stop.
template <typename Visitor>
void OccupancyGrid::walk(const Vec3& from, const Vec3& to, Visitor&& visit) const {
  const Vec3 dir = to - from;
  const Scalar length = dir.norm();
  if (length == 0) throw std::invalid_argument("cast_ray: from == to");

  VoxelKey cur = key_of(from);
  const VoxelKey last = key_of(to);
  int idx[3] = {cur.x, cur.y, cur.z};
  const int end_idx[3] = {last.x, last.y, last.z};

  int step[3];
  Scalar t_max[3], t_delta[3];
  for (int a = 0; a < 3; ++a) {
    if (dir[a] > 0) {
      step[a] = 1;
      const Scalar boundary = (idx[a] + 1) * resolution_;
      t_max[a] = (boundary - from[a]) / dir[a];
      t_delta[a] = resolution_ / dir[a];
    } else if (dir[a] < 0) {
      step[a] = -1;
      const Scalar boundary = idx[a] * resolution_;
      t_max[a] = (boundary - from[a]) / dir[a];
      t_delta[a] = -resolution_ / dir[a];
    } else {
      step[a] = 0;
      t_max[a] = std::numeric_limits<Scalar>::infinity();
      t_delta[a] = std::numeric_limits<Scalar>::infinity();
    }
  }

  while (true) {
    if (!visit(VoxelKey{idx[0], idx[1], idx[2]})) return;
    if (idx[0] == end_idx[0] && idx[1] == end_idx[1] && idx[2] == end_idx[2]) return;
    int a = 0;
    if (t_max[1] < t_max[a]) a = 1;
    if (t_max[2] < t_max[a]) a = 2;
    if (t_max[a] > 1.0) return;  // segment ends inside the current voxel
    idx[a] += step[a];
    t_max[a] += t_delta[a];
  }
}

std::optional<VoxelKey> OccupancyGrid::cast_ray(const Vec3& from, const Vec3& to) const {
  std::optional<VoxelKey> hit;
  walk(from, to, [&](const VoxelKey& key) {
    if (occupied(key)) {
      hit = key;
      return false;
    }
    return true;
  });
  return hit;
}

void OccupancyGrid::mark_free_along(const Vec3& from, const Vec3& to) {
  const VoxelKey last = key_of(to);
  walk(from, to, [&](const VoxelKey& key) {
    if (key == last) return false;
    set_free(key);
    return true;
  });
}

bool OccupancyGrid::point_visible(const Vec3& view_pos, const Vec3& target) const {
  const VoxelKey target_key = key_of(target);
  // Pull the endpoint back half a voxel so quantization at the target
  // surface cannot register a spurious hit past it.
  const Vec3 dir = (target - view_pos).normalized();
  const Vec3 end = target - dir * (0.5 * resolution_);
  bool blocked = false;
  walk(view_pos, end, [&](const VoxelKey& key) {
    if (key == target_key) return false;  // reached the target's own voxel
    if (occupied(key)) {
      blocked = true;
      return false;
    }
    return true;
  });
  return !blocked;
}

std::vector<VoxelKey> OccupancyGrid::boundary_voxels() const {
  std::vector<VoxelKey> out;
  for (const auto& [key, s] : cells_) {
    if (s != VoxelState::kOccupied) continue;
    static constexpr int kNeighbors[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                             {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
    for (const auto& n : kNeighbors) {
      if (state(VoxelKey{key.x + n[0], key.y + n[1], key.z + n[2]}) ==
          VoxelState::kUnknown) {
        out.push_back(key);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tpvp
