#pragma once

#include <cstdint>

#include "tpvp/point_cloud.hpp"

namespace tpvp {

enum class SpeciesProfile { kMaizeLike, kTomatoLike };

/// Two-cycle ground-truth pair in one shared frame. The current cycle is
/// the previous one after bounded branch rotations plus added growth
/// geometry; its bounding-box diagonal is normalized to `diagonal`.
struct SyntheticPlant {
  PointCloud cycle_previous;
  PointCloud cycle_current;
};

struct PlantOptions {
  Scalar diagonal = 0.12;      // meters, current-cycle bounding-box diagonal
  Scalar point_spacing = 0.02; // raw-frame surface sampling step
};

/// Procedural stem-and-leaves plant, deterministic per seed. The
/// tomato-like profile carries broader, denser leaves and therefore more
/// self-occlusion than the maize-like profile.
SyntheticPlant generate_synthetic_plant(std::uint64_t seed, SpeciesProfile profile,
                                        const PlantOptions& options = {});

}  // namespace tpvp
