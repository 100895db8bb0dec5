#pragma once

#include <cstdint>
#include <vector>

#include "tpvp/deformation_graph.hpp"
#include "tpvp/point_cloud.hpp"

namespace tpvp {

struct LossWeights {
  Scalar arap = 1.0;
  Scalar cd = 0.1;
  Scalar lap = 0.01;
};

/// Gradient w.r.t. the per-node parameters. Rotation entries live in the
/// tangent space at the current estimate: d/d(delta) of L(R exp(delta))
/// at delta = 0.
struct ParamGradient {
  std::vector<Vec3> rotation;
  std::vector<Vec3> translation;

  explicit ParamGradient(std::size_t n)
      : rotation(n, Vec3::Zero()), translation(n, Vec3::Zero()) {}
  void add_scaled(const ParamGradient& other, Scalar s);
};

/// ARAP regularizer, the mean over both orientations of every edge of
/// ||R_j (n_k - n_j) + n_j + t_j - (n_k + t_k)||^2.
Scalar loss_arap(const DeformationGraph& graph, ParamGradient* grad = nullptr);

/// Sampled point indices and their k-NN neighborhoods, computed once on
/// the unwarped source so the smoothness term regularizes the
/// deformation rather than chasing the deforming cloud.
struct LaplacianSpec {
  std::vector<int> samples;
  std::vector<std::vector<int>> neighbors;
  std::vector<Vec3> reference;  // source differential coordinates per sample
};

LaplacianSpec build_laplacian_spec(const PointCloud& source, int sample_count = 4096,
                                   int k_neighbors = 6, std::uint64_t seed = 0);

/// Mean over samples of the squared change in differential coordinates,
/// ||(p~_i - mean(kNN(p~_i))) - (p_i - mean(kNN(p_i)))||^2, with the
/// source-side differential frozen in the spec. Zero at the identity
/// warp. Optional gradient w.r.t. the warped point positions
/// (accumulated into point_grad).
Scalar loss_laplacian(const PointCloud& warped, const LaplacianSpec& spec,
                      std::vector<Vec3>* point_grad = nullptr);

/// Nearest-neighbor assignments recomputed each iteration and frozen
/// within it. Target-side pairs are truncated: target points farther than
/// `truncation` from the warped cloud are dropped (unexplained growth).
struct ChamferCorrespondences {
  std::vector<int> source_to_target;               // per warped point
  std::vector<std::pair<int, int>> target_to_source;  // kept (target, warped) pairs
};

ChamferCorrespondences compute_correspondences(const PointCloud& warped,
                                               const PointCloud& target,
                                               Scalar truncation);

/// Symmetric squared-distance Chamfer term under fixed correspondences:
/// half the sum of the two directed means.
Scalar loss_chamfer(const PointCloud& warped, const PointCloud& target,
                    const ChamferCorrespondences& corr,
                    std::vector<Vec3>* point_grad = nullptr);

/// Chain per-warped-point gradients back to node parameters through the
/// blended warp.
void backprop_warp(const DeformationGraph& graph, const AnchorTable& anchors,
                   const PointCloud& source, const std::vector<Vec3>& point_grad,
                   ParamGradient& grad);

struct LossBreakdown {
  Scalar total = 0;
  Scalar arap = 0;
  Scalar cd = 0;
  Scalar lap = 0;
};

struct RegistrationOptions {
  LossWeights weights;
  Scalar learning_rate = 0.1;
  // Adam's steady-state step is ~learning_rate per coordinate regardless of
  // gradient magnitude, so the rate is mapped to the parameter blocks'
  // natural scales: radians for rotations, meters for translations.
  Scalar rotation_step_scale = 0.04;     // rad per unit rate
  Scalar translation_step_scale = 0.004; // m per unit rate
  int iterations = 300;
  GraphParams graph;
  int laplacian_samples = 4096;
  int laplacian_k = 6;
  Scalar chamfer_truncation = 5 * 0.004;  // 5 x voxel size
  std::uint64_t seed = 0;
};

struct RegistrationResult {
  PointCloud aligned;
  DeformationGraph graph;
  AnchorTable anchors;
  std::vector<LossBreakdown> trace;  // one entry per iteration
};

/// Aligns source to target by minimizing the weighted three-term loss
/// with moment-adaptive gradient descent (beta1 0.9, beta2 0.999,
/// eps 1e-8); rotations updated right-multiplicatively through the
/// exponential map. Throws std::runtime_error naming the iteration if the
/// loss turns non-finite.
RegistrationResult register_clouds(const PointCloud& source, const PointCloud& target,
                                   const RegistrationOptions& options = {});

}  // namespace tpvp
