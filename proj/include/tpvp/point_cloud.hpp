#pragma once

#include <string>
#include <vector>

#include "tpvp/types.hpp"

namespace tpvp {

/// Ordered list of 3D points in meters. All clouds live in one shared
/// global frame identified by frame_id.
struct PointCloud {
  std::vector<Vec3> points;
  std::string frame_id = "world";

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const Vec3& operator[](std::size_t i) const { return points[i]; }
  Vec3& operator[](std::size_t i) { return points[i]; }

  void append(const PointCloud& other) {
    points.insert(points.end(), other.points.begin(), other.points.end());
  }
};

struct Aabb {
  Vec3 min;
  Vec3 max;
  Vec3 extent() const { return max - min; }
  Scalar diagonal() const { return extent().norm(); }
};

Aabb bounding_box(const PointCloud& cloud);

/// Integer voxel coordinates under floor(coord / voxel_size) binning with
/// the global-frame origin. Points exactly on a boundary go to the
/// higher-index voxel.
Eigen::Vector3i voxel_index_of(const Vec3& p, Scalar voxel_size);

/// One representative (member centroid) per occupied voxel.
PointCloud voxel_downsample(const PointCloud& cloud, Scalar voxel_size);

/// Symmetric Chamfer distance: the two directed mean 1-NN distances,
/// averaged. Throws std::invalid_argument on an empty cloud.
Scalar chamfer_distance(const PointCloud& a, const PointCloud& b);

/// Rigid-transform and rescale helpers used by the simulation harness.
PointCloud transformed(const PointCloud& cloud, const Mat3& rotation,
                       const Vec3& translation);

/// Uniformly rescale and recenter so the bounding-box diagonal equals
/// `diagonal` and the box center sits at `center`.
PointCloud normalized_to_diagonal(const PointCloud& cloud, Scalar diagonal,
                                  const Vec3& center = Vec3::Zero());

}  // namespace tpvp
