#pragma once

#include <optional>
#include <unordered_map>

#include "tpvp/point_cloud.hpp"
#include "tpvp/voxel_key.hpp"

namespace tpvp {

enum class VoxelState { kUnknown, kFree, kOccupied };

/// Hashed axis-aligned voxel grid with binary occupancy and 3D-DDA ray
/// casting. Voxels never written stay unknown; lookups outside any stored
/// region return unknown.
class OccupancyGrid {
 public:
  explicit OccupancyGrid(Scalar resolution);

  Scalar resolution() const { return resolution_; }
  std::size_t occupied_count() const { return occupied_count_; }

  VoxelKey key_of(const Vec3& p) const;
  Vec3 center_of(const VoxelKey& key) const;

  VoxelState state(const VoxelKey& key) const;
  bool occupied(const VoxelKey& key) const { return state(key) == VoxelState::kOccupied; }

  /// Marks the voxel of every point occupied. Idempotent and
  /// order-independent.
  void insert_cloud(const PointCloud& cloud);

  void set_occupied(const VoxelKey& key);
  /// Marks free only if the voxel is not already occupied.
  void set_free(const VoxelKey& key);
  /// Marks voxels traversed between the two endpoints free, excluding the
  /// endpoint voxel. Used by scan fusion.
  void mark_free_along(const Vec3& from, const Vec3& to);

  /// Centers of all occupied voxels. Throws if the grid holds none.
  PointCloud extract_surface() const;

  /// First occupied voxel hit walking the segment from -> to, if any.
  std::optional<VoxelKey> cast_ray(const Vec3& from, const Vec3& to) const;

  /// True iff the first occupied voxel along view_pos -> target is the
  /// voxel containing target (the target's own voxel does not occlude
  /// itself; the ray endpoint is pulled back half a voxel).
  bool point_visible(const Vec3& view_pos, const Vec3& target) const;

  /// Occupied voxels 6-adjacent to at least one unknown voxel.
  std::vector<VoxelKey> boundary_voxels() const;

 private:
  template <typename Visitor>
  void walk(const Vec3& from, const Vec3& to, Visitor&& visit) const;

  Scalar resolution_;
  std::unordered_map<VoxelKey, VoxelState, VoxelKeyHash> cells_;
  std::size_t occupied_count_ = 0;
};

}  // namespace tpvp
