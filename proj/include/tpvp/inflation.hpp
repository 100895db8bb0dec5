#pragma once

#include "tpvp/point_cloud.hpp"

namespace tpvp {

struct InflationParams {
  Scalar gamma_near = 0.003;
  Scalar gamma_far = 0.005;
  Scalar candidate_voxel = 0.004;
};

/// Growth-region candidates: grid points (spacing candidate_voxel, grid
/// anchored at the global origin) inside the dilated bounding box of
/// aligned_prior + scan, accepted iff closer than gamma_near to the scan
/// and farther than gamma_far from the prior. Output sorted by grid
/// index; an empty result means no growth detected.
PointCloud inflate(const PointCloud& aligned_prior, const PointCloud& scan,
                   const InflationParams& params = {});

/// The planning union: aligned prior + scan + inflation set, concatenated
/// (downstream voxelization deduplicates).
PointCloud assemble_approximation(const PointCloud& aligned_prior,
                                  const PointCloud& scan,
                                  const PointCloud& inflation_set);

}  // namespace tpvp
