#pragma once

#include <vector>

#include "tpvp/point_cloud.hpp"

namespace tpvp {

/// Embedded deformation graph: sparse nodes over the source cloud, each
/// carrying a local rigid transform, linked by k-NN edges. Rotations are
/// stored as matrices; optimization updates compose increments through
/// the exponential map.
struct DeformationGraph {
  std::vector<Vec3> nodes;                       // voxel centers
  std::vector<std::pair<int, int>> edges;        // undirected, j < k
  std::vector<Mat3> rotations;                   // R_j
  std::vector<Vec3> translations;                // t_j

  std::size_t node_count() const { return nodes.size(); }
  void reset_params() {
    rotations.assign(nodes.size(), Mat3::Identity());
    translations.assign(nodes.size(), Vec3::Zero());
  }
};

/// Per source point: its anchor node indices and normalized Gaussian
/// weights.
struct AnchorTable {
  std::vector<std::vector<int>> anchors;      // K_a nearest node ids per point
  std::vector<std::vector<Scalar>> weights;   // same shape, sums to 1 per point
};

struct GraphParams {
  Scalar voxel_size = 0.004;
  int k_edges = 6;
  int anchors_per_point = 8;   // K_a
  Scalar kernel_sigma = 0.008; // 2 x voxel_size
};

/// Nodes are downsample voxel centers (not centroids); weights
/// proportional to exp(-d^2 / (2 sigma^2)), normalized per point;
/// parameters start at identity. Disconnected components are bridged by
/// the shortest inter-component edge until connected.
std::pair<DeformationGraph, AnchorTable> build_graph(const PointCloud& source,
                                                     const GraphParams& params = {});

/// Blended per-node rigid warp:
/// p~_i = sum_j w_ij (R_j (p_i - n_j) + n_j + t_j).
PointCloud warp(const DeformationGraph& graph, const AnchorTable& anchors,
                const PointCloud& source);

/// Rodrigues exponential of an axis-angle vector.
Mat3 so3_exp(const Vec3& omega);

}  // namespace tpvp
