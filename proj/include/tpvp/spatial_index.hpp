#pragma once

#include <cstdint>
#include <vector>

#include "tpvp/point_cloud.hpp"

namespace tpvp {

/// Immutable kd-tree over one point cloud. Queries are exact: results
/// match an exhaustive linear scan.
class SpatialIndex {
 public:
  explicit SpatialIndex(const PointCloud& cloud);

  std::size_t size() const { return points_.size(); }

  /// Index and squared distance of the nearest indexed point.
  std::pair<std::size_t, Scalar> nearest(const Vec3& query) const;

  Scalar nearest_distance(const Vec3& query) const;

  /// Indices of the k nearest points, closest first. Returns fewer than k
  /// only if the index holds fewer points.
  std::vector<std::size_t> knearest(const Vec3& query, std::size_t k) const;

 private:
  struct Node {
    int axis = -1;           // -1 marks a leaf
    Scalar split = 0;
    std::uint32_t left = 0;  // child node ids, 0 = none (root is 0 but never a child)
    std::uint32_t right = 0;
    std::uint32_t begin = 0;  // leaf point range
    std::uint32_t end = 0;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);
  template <typename Visitor>
  void search(std::uint32_t node, const Vec3& query, Scalar& worst,
              Visitor&& visit) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;  // permutation into points_
  std::vector<Node> nodes_;
};

}  // namespace tpvp
