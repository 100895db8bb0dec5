#pragma once

#include "tpvp/occupancy_grid.hpp"
#include "tpvp/point_cloud.hpp"
#include "tpvp/view_space.hpp"

namespace tpvp {

/// Pinhole model used only for frustum culling; defaults give a 60-degree
/// vertical field of view at 4:3 aspect.
struct CameraIntrinsics {
  Scalar vertical_fov_rad = 60.0 * M_PI / 180.0;
  int width = 320;
  int height = 240;

  Scalar horizontal_fov_rad() const {
    const Scalar aspect = static_cast<Scalar>(width) / height;
    return 2.0 * std::atan(std::tan(0.5 * vertical_fov_rad) * aspect);
  }
};

/// Simulated depth capture: the subset of ground-truth points inside the
/// view frustum whose voxel is unoccluded in the voxelized ground truth.
/// Occlusion is resolved per voxel center so the sensor model matches the
/// map model the planner reasons over.
PointCloud virtual_scan(const PointCloud& ground_truth, const View& view,
                        const CameraIntrinsics& camera = {},
                        Scalar map_resolution = 0.004);

/// Same, reusing a prebuilt ground-truth occupancy grid.
PointCloud virtual_scan(const PointCloud& ground_truth, const OccupancyGrid& grid,
                        const View& view, const CameraIntrinsics& camera = {});

}  // namespace tpvp
