#include "tpvp/inflation.hpp"

#include <cmath>
#include <stdexcept>

#include "tpvp/spatial_index.hpp"

namespace tpvp {

PointCloud inflate(const PointCloud& aligned_prior, const PointCloud& scan,
                   const InflationParams& params) {
  if (aligned_prior.empty() || scan.empty())
    throw std::invalid_argument("inflate: empty input cloud");

  Aabb box = bounding_box(aligned_prior);
  const Aabb scan_box = bounding_box(scan);
  box.min = box.min.cwiseMin(scan_box.min) - Vec3::Constant(2 * params.gamma_near);
  box.max = box.max.cwiseMax(scan_box.max) + Vec3::Constant(2 * params.gamma_near);

  const Scalar s = params.candidate_voxel;
  const Eigen::Vector3i lo(static_cast<int>(std::floor(box.min.x() / s)),
                           static_cast<int>(std::floor(box.min.y() / s)),
                           static_cast<int>(std::floor(box.min.z() / s)));
  const Eigen::Vector3i hi(static_cast<int>(std::floor(box.max.x() / s)),
                           static_cast<int>(std::floor(box.max.y() / s)),
                           static_cast<int>(std::floor(box.max.z() / s)));

  const SpatialIndex prior_index(aligned_prior);
  const SpatialIndex scan_index(scan);
  const Scalar near_sq = params.gamma_near * params.gamma_near;
  const Scalar far_sq = params.gamma_far * params.gamma_far;

  PointCloud out;
  out.frame_id = aligned_prior.frame_id;
  for (int x = lo.x(); x <= hi.x(); ++x)
    for (int y = lo.y(); y <= hi.y(); ++y)
      for (int z = lo.z(); z <= hi.z(); ++z) {
        const Vec3 candidate((x + 0.5) * s, (y + 0.5) * s, (z + 0.5) * s);
        if (scan_index.nearest(candidate).second >= near_sq) continue;
        if (prior_index.nearest(candidate).second <= far_sq) continue;
        out.points.push_back(candidate);
      }
  return out;
}

PointCloud assemble_approximation(const PointCloud& aligned_prior,
                                  const PointCloud& scan,
                                  const PointCloud& inflation_set) {
  if (aligned_prior.empty())
    throw std::invalid_argument("assemble_approximation: empty prior");
  PointCloud out = aligned_prior;
  out.append(scan);
  out.append(inflation_set);
  return out;
}

}  // namespace tpvp
