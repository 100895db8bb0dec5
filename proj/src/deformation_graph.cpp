#include "tpvp/deformation_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tpvp/spatial_index.hpp"
#include "tpvp/voxel_key.hpp"

namespace tpvp {

Mat3 so3_exp(const Vec3& omega) {
  const Scalar theta = omega.norm();
  if (theta < 1e-12) {
    Mat3 skew;
    skew << 0, -omega.z(), omega.y(), omega.z(), 0, -omega.x(), -omega.y(),
        omega.x(), 0;
    return Mat3::Identity() + skew;
  }
  return Eigen::AngleAxis<Scalar>(theta, omega / theta).toRotationMatrix();
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

std::vector<Vec3> voxel_center_nodes(const PointCloud& source, Scalar voxel_size) {
  std::set<VoxelKey> keys;
  for (const Vec3& p : source.points) {
    const Eigen::Vector3i idx = voxel_index_of(p, voxel_size);
    keys.insert(VoxelKey{idx.x(), idx.y(), idx.z()});
  }
  std::vector<Vec3> nodes;
  nodes.reserve(keys.size());
  for (const VoxelKey& k : keys)
    nodes.emplace_back((k.x + 0.5) * voxel_size, (k.y + 0.5) * voxel_size,
                       (k.z + 0.5) * voxel_size);
  return nodes;
}

}  // namespace

std::pair<DeformationGraph, AnchorTable> build_graph(const PointCloud& source,
                                                     const GraphParams& params) {
  if (source.empty()) throw std::invalid_argument("build_graph: empty source");

  DeformationGraph graph;
  graph.nodes = voxel_center_nodes(source, params.voxel_size);
  const int n = static_cast<int>(graph.nodes.size());

  PointCloud node_cloud;
  node_cloud.points = graph.nodes;
  const SpatialIndex node_index(node_cloud);

  std::set<std::pair<int, int>> edge_set;
  if (n > 1) {
    const int k = std::min(params.k_edges, n - 1);
    for (int j = 0; j < n; ++j) {
      const auto nbrs = node_index.knearest(graph.nodes[j], k + 1);
      for (std::size_t m = 0; m < nbrs.size(); ++m) {
        const int other = static_cast<int>(nbrs[m]);
        if (other == j) continue;
        edge_set.insert({std::min(j, other), std::max(j, other)});
      }
    }
  }

  // bridge disconnected components with the shortest cross edge
  UnionFind uf(n);
  for (const auto& [a, b] : edge_set) uf.unite(a, b);
  while (true) {
    std::set<int> roots;
    for (int j = 0; j < n; ++j) roots.insert(uf.find(j));
    if (roots.size() <= 1) break;
    Scalar best = std::numeric_limits<Scalar>::infinity();
    std::pair<int, int> bridge{-1, -1};
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        if (uf.find(a) == uf.find(b)) continue;
        const Scalar d = (graph.nodes[a] - graph.nodes[b]).squaredNorm();
        if (d < best) {
          best = d;
          bridge = {a, b};
        }
      }
    edge_set.insert(bridge);
    uf.unite(bridge.first, bridge.second);
  }
  graph.edges.assign(edge_set.begin(), edge_set.end());
  graph.reset_params();

  AnchorTable anchors;
  const int ka = std::min<int>(params.anchors_per_point, n);
  anchors.anchors.resize(source.size());
  anchors.weights.resize(source.size());
  const Scalar inv_two_sigma_sq = 1.0 / (2.0 * params.kernel_sigma * params.kernel_sigma);
  for (std::size_t i = 0; i < source.size(); ++i) {
    const auto nbrs = node_index.knearest(source.points[i], ka);
    std::vector<int> ids(nbrs.begin(), nbrs.end());
    std::vector<Scalar> w(ids.size());
    Scalar d2_min = std::numeric_limits<Scalar>::infinity();
    for (int id : ids)
      d2_min = std::min(d2_min, (source.points[i] - graph.nodes[id]).squaredNorm());
    Scalar total = 0;
    for (std::size_t m = 0; m < ids.size(); ++m) {
      const Scalar d2 = (source.points[i] - graph.nodes[ids[m]]).squaredNorm();
      // shifted by d2_min; the common factor cancels in normalization
      w[m] = std::exp(-(d2 - d2_min) * inv_two_sigma_sq);
      total += w[m];
    }
    for (Scalar& v : w) v /= total;
    anchors.anchors[i] = std::move(ids);
    anchors.weights[i] = std::move(w);
  }
  return {std::move(graph), std::move(anchors)};
}

PointCloud warp(const DeformationGraph& graph, const AnchorTable& anchors,
                const PointCloud& source) {
  PointCloud out;
  out.frame_id = source.frame_id;
  out.points.resize(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    Vec3 blended = Vec3::Zero();
    const auto& ids = anchors.anchors[i];
    const auto& w = anchors.weights[i];
    for (std::size_t m = 0; m < ids.size(); ++m) {
      const int j = ids[m];
      blended += w[m] * (graph.rotations[j] * (source.points[i] - graph.nodes[j]) +
                         graph.nodes[j] + graph.translations[j]);
    }
    out.points[i] = blended;
  }
  return out;
}

}  // namespace tpvp
