#include "tpvp/virtual_scanner.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace tpvp {

namespace {

bool in_frustum(const View& view, const CameraIntrinsics& camera, const Vec3& p) {
  const Vec3 local = view.orientation.transpose() * (p - view.position);
  if (local.z() <= 0) return false;
  const Scalar tan_v = std::tan(0.5 * camera.vertical_fov_rad);
  const Scalar tan_h = std::tan(0.5 * camera.horizontal_fov_rad());
  return std::abs(local.x()) <= tan_h * local.z() &&
         std::abs(local.y()) <= tan_v * local.z();
}

}  // namespace

PointCloud virtual_scan(const PointCloud& ground_truth, const OccupancyGrid& grid,
                        const View& view, const CameraIntrinsics& camera) {
  if (ground_truth.empty())
    throw std::invalid_argument("virtual_scan: empty ground truth");
  PointCloud scan;
  scan.frame_id = ground_truth.frame_id;
  // visibility is resolved at voxel granularity (the sensor model matches
  // the map model used for planning); cache one ray cast per voxel
  std::unordered_map<VoxelKey, bool, VoxelKeyHash> voxel_visible;
  for (const Vec3& p : ground_truth.points) {
    if (!in_frustum(view, camera, p)) continue;
    const VoxelKey key = grid.key_of(p);
    auto it = voxel_visible.find(key);
    if (it == voxel_visible.end())
      it = voxel_visible
               .emplace(key, grid.point_visible(view.position, grid.center_of(key)))
               .first;
    if (it->second) scan.points.push_back(p);
  }
  return scan;
}

PointCloud virtual_scan(const PointCloud& ground_truth, const View& view,
                        const CameraIntrinsics& camera, Scalar map_resolution) {
  OccupancyGrid grid(map_resolution);
  grid.insert_cloud(ground_truth);
  return virtual_scan(ground_truth, grid, view, camera);
}

}  // namespace tpvp
