#include "tpvp/point_cloud.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "tpvp/spatial_index.hpp"
#include "tpvp/voxel_key.hpp"

namespace tpvp {

Aabb bounding_box(const PointCloud& cloud) {
  if (cloud.empty()) throw std::invalid_argument("bounding_box: empty cloud");
  Aabb box{cloud.points.front(), cloud.points.front()};
  for (const Vec3& p : cloud.points) {
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  return box;
}

Eigen::Vector3i voxel_index_of(const Vec3& p, Scalar voxel_size) {
  return Eigen::Vector3i(
      static_cast<int>(std::floor(p.x() / voxel_size)),
      static_cast<int>(std::floor(p.y() / voxel_size)),
      static_cast<int>(std::floor(p.z() / voxel_size)));
}

PointCloud voxel_downsample(const PointCloud& cloud, Scalar voxel_size) {
  if (voxel_size <= 0) throw std::invalid_argument("voxel_downsample: voxel_size must be > 0");
  struct Accum {
    Vec3 sum = Vec3::Zero();
    std::size_t count = 0;
    std::size_t first = 0;  // first member index, for deterministic ordering
  };
  std::unordered_map<VoxelKey, Accum, VoxelKeyHash> bins;
  bins.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3i idx = voxel_index_of(cloud.points[i], voxel_size);
    Accum& acc = bins[VoxelKey{idx.x(), idx.y(), idx.z()}];
    if (acc.count == 0) acc.first = i;
    acc.sum += cloud.points[i];
    ++acc.count;
  }
  std::vector<std::pair<std::size_t, Vec3>> reps;
  reps.reserve(bins.size());
  for (const auto& [key, acc] : bins)
    reps.emplace_back(acc.first, acc.sum / static_cast<Scalar>(acc.count));
  std::sort(reps.begin(), reps.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  PointCloud out;
  out.frame_id = cloud.frame_id;
  out.points.reserve(reps.size());
  for (const auto& [first, centroid] : reps) out.points.push_back(centroid);
  return out;
}

Scalar chamfer_distance(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("chamfer_distance: empty cloud");
  const SpatialIndex index_a(a);
  const SpatialIndex index_b(b);
  Scalar sum_ab = 0;
  for (const Vec3& p : a.points) sum_ab += index_b.nearest_distance(p);
  Scalar sum_ba = 0;
  for (const Vec3& q : b.points) sum_ba += index_a.nearest_distance(q);
  const Scalar mean_ab = sum_ab / static_cast<Scalar>(a.size());
  const Scalar mean_ba = sum_ba / static_cast<Scalar>(b.size());
  return 0.5 * (mean_ab + mean_ba);
}

PointCloud transformed(const PointCloud& cloud, const Mat3& rotation,
                       const Vec3& translation) {
  PointCloud out;
  out.frame_id = cloud.frame_id;
  out.points.reserve(cloud.size());
  for (const Vec3& p : cloud.points) out.points.push_back(rotation * p + translation);
  return out;
}

PointCloud normalized_to_diagonal(const PointCloud& cloud, Scalar diagonal,
                                  const Vec3& center) {
  const Aabb box = bounding_box(cloud);
  const Scalar current = box.diagonal();
  if (current <= 0) throw std::invalid_argument("normalized_to_diagonal: degenerate cloud");
  const Scalar scale = diagonal / current;
  const Vec3 mid = 0.5 * (box.min + box.max);
  PointCloud out;
  out.frame_id = cloud.frame_id;
  out.points.reserve(cloud.size());
  for (const Vec3& p : cloud.points) out.points.push_back((p - mid) * scale + center);
  return out;
}

}  // namespace tpvp
