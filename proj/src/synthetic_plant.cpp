#include "tpvp/synthetic_plant.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace tpvp {

namespace {

struct LeafParams {
  Scalar attach_height = 0;  // along the stem, raw units
  Scalar azimuth = 0;
  Scalar length = 0;
  Scalar width = 0;
  Scalar droop = 0;
  Scalar bend = 0;  // extra azimuthal rotation applied in the current cycle
};

struct PlantParams {
  Scalar stem_height = 1.0;
  Scalar stem_radius = 0.015;
  Scalar stem_sway = 0.06;
  std::vector<LeafParams> leaves;
};

Vec3 stem_center(const PlantParams& plant, Scalar h) {
  return Vec3(plant.stem_sway * std::sin(2.0 * h), plant.stem_sway * 0.5 * std::sin(3.0 * h), h);
}

void sample_stem(const PlantParams& plant, Scalar height, Scalar spacing,
                 PointCloud& out) {
  const int levels = std::max(2, static_cast<int>(height / spacing));
  const int ring = 8;
  for (int l = 0; l <= levels; ++l) {
    const Scalar h = height * l / levels;
    const Vec3 c = stem_center(plant, h);
    for (int r = 0; r < ring; ++r) {
      const Scalar a = 2.0 * M_PI * r / ring;
      out.points.push_back(c + Vec3(plant.stem_radius * std::cos(a),
                                    plant.stem_radius * std::sin(a), 0));
    }
  }
}

void sample_leaf(const PlantParams& plant, const LeafParams& leaf, Scalar azimuth,
                 Scalar length_scale, Scalar spacing, PointCloud& out) {
  const Scalar length = leaf.length * length_scale;
  const Vec3 base = stem_center(plant, leaf.attach_height);
  const Vec3 dir(std::cos(azimuth), std::sin(azimuth), 0);
  const Vec3 side(-std::sin(azimuth), std::cos(azimuth), 0);
  const int nu = std::max(2, static_cast<int>(length / spacing));
  for (int iu = 0; iu <= nu; ++iu) {
    const Scalar u = static_cast<Scalar>(iu) / nu;
    // half-sine width profile, drooping centerline
    const Scalar width = leaf.width * std::sqrt(std::sin(M_PI * std::min(u, Scalar(0.999)) * 0.9 + 0.05));
    const Scalar rise = 0.35 * u - leaf.droop * u * u;
    const Vec3 center = base + dir * (u * length) + Vec3(0, 0, rise * length);
    const int nv = std::max(1, static_cast<int>(width / spacing));
    for (int iv = -nv; iv <= nv; ++iv) {
      const Scalar v = static_cast<Scalar>(iv) / nv;
      const Scalar fold = -0.2 * width * v * v;  // slight transverse cupping
      out.points.push_back(center + side * (0.5 * width * v) + Vec3(0, 0, fold));
    }
  }
}

PointCloud build_cloud(const PlantParams& plant, bool current_cycle, Scalar spacing) {
  PointCloud cloud;
  const std::size_t leaf_count =
      current_cycle ? plant.leaves.size() : plant.leaves.size() - 1;
  const Scalar stem_height = current_cycle ? plant.stem_height : 0.92 * plant.stem_height;
  sample_stem(plant, stem_height, spacing, cloud);
  for (std::size_t i = 0; i < leaf_count; ++i) {
    const LeafParams& leaf = plant.leaves[i];
    const Scalar azimuth = current_cycle ? leaf.azimuth + leaf.bend : leaf.azimuth;
    const Scalar length_scale = current_cycle ? 1.0 : 0.85;
    sample_leaf(plant, leaf, azimuth, length_scale, spacing, cloud);
  }
  return cloud;
}

}  // namespace

SyntheticPlant generate_synthetic_plant(std::uint64_t seed, SpeciesProfile profile,
                                        const PlantOptions& options) {
  std::mt19937_64 rng(seed * 2 + (profile == SpeciesProfile::kTomatoLike ? 1 : 0));
  std::uniform_real_distribution<Scalar> uni(0.0, 1.0);

  PlantParams plant;
  const bool tomato = profile == SpeciesProfile::kTomatoLike;
  const int leaf_count = tomato ? 10 : 7;
  plant.stem_height = tomato ? 0.85 : 1.0;
  plant.stem_sway = 0.04 + 0.04 * uni(rng);

  const Scalar golden = 2.399963;  // radians, spreads azimuths evenly
  for (int i = 0; i < leaf_count; ++i) {
    LeafParams leaf;
    const Scalar frac = (i + 1.0) / (leaf_count + 1.0);
    leaf.attach_height = plant.stem_height * (0.15 + 0.8 * frac + 0.03 * (uni(rng) - 0.5));
    leaf.azimuth = (tomato ? golden * i : M_PI * i + 0.5 * golden * i) + 0.4 * (uni(rng) - 0.5);
    leaf.length = (tomato ? 0.40 : 0.55) * (0.85 + 0.3 * uni(rng));
    leaf.width = (tomato ? 0.30 : 0.07) * (0.85 + 0.3 * uni(rng));
    leaf.droop = (tomato ? 0.45 : 0.30) * (0.8 + 0.4 * uni(rng));
    leaf.bend = (15.0 * M_PI / 180.0) * (2.0 * uni(rng) - 1.0);
    plant.leaves.push_back(leaf);
  }

  SyntheticPlant pair;
  pair.cycle_previous = build_cloud(plant, false, options.point_spacing);
  pair.cycle_current = build_cloud(plant, true, options.point_spacing);

  // one shared normalization so both cycles stay co-registered; the
  // current cycle defines the scale
  const Aabb box = bounding_box(pair.cycle_current);
  const Scalar scale = options.diagonal / box.diagonal();
  const Vec3 mid = 0.5 * (box.min + box.max);
  for (Vec3& p : pair.cycle_previous.points) p = (p - mid) * scale;
  for (Vec3& p : pair.cycle_current.points) p = (p - mid) * scale;
  return pair;
}

}  // namespace tpvp
