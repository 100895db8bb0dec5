#pragma once

#include <cstdint>
#include <vector>

#include "tpvp/types.hpp"

namespace tpvp {

enum class ViewSpaceKind { kHemisphere, kSphere };

/// A candidate camera pose on the view sphere. The rotation's third
/// column (+z, the optical axis) points from the position toward the
/// sphere center.
struct View {
  int id = 0;
  Vec3 position = Vec3::Zero();
  Mat3 orientation = Mat3::Identity();

  Vec3 optical_axis() const { return orientation.col(2); }
};

struct ViewSpace {
  ViewSpaceKind kind = ViewSpaceKind::kSphere;
  Vec3 center = Vec3::Zero();
  Scalar radius = 0.4;
  std::vector<View> views;

  std::size_t size() const { return views.size(); }
};

struct TammesResult {
  std::vector<Vec3> directions;  // unit vectors
  Scalar min_angle = 0;          // radians, minimum pairwise separation
};

Scalar min_pairwise_angle(const std::vector<Vec3>& directions);

/// Distributes n unit directions by iterated pairwise repulsion with a
/// step-halving line search that keeps the minimum pairwise angle
/// non-decreasing. Hemisphere restricts directions to z >= 0.
/// Deterministic for a fixed seed.
TammesResult solve_tammes(int n, ViewSpaceKind kind, std::uint64_t seed,
                          int restarts = 8, int max_iterations = 2000);

/// Look-at rotation whose +z axis points along `forward`.
Mat3 look_at(const Vec3& forward);

/// Hemisphere -> 32 views, sphere -> 63 views, positions at
/// center + radius * direction with look-at orientations.
ViewSpace build_view_space(ViewSpaceKind kind, const Vec3& center,
                           Scalar radius = 0.4, std::uint64_t seed = 1);

/// Same construction for an arbitrary view count (test helper).
ViewSpace build_view_space_n(ViewSpaceKind kind, int n, const Vec3& center,
                             Scalar radius, std::uint64_t seed);

}  // namespace tpvp
