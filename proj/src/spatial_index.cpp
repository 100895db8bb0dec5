#include "tpvp/spatial_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tpvp {

namespace {
constexpr std::uint32_t kLeafSize = 16;
constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();
}  // namespace

SpatialIndex::SpatialIndex(const PointCloud& cloud) : points_(cloud.points) {
  if (points_.empty()) throw std::invalid_argument("SpatialIndex: empty cloud");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  build(0, static_cast<std::uint32_t>(points_.size()));
}

std::uint32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end) {
  const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= kLeafSize) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  Vec3 lo = points_[order_[begin]], hi = lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis;
  (hi - lo).maxCoeff(&axis);
  const std::uint32_t mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return points_[a][axis] < points_[b][axis];
                   });
  const Scalar split = points_[order_[mid]][axis];
  const std::uint32_t left = build(begin, mid);
  const std::uint32_t right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

template <typename Visitor>
void SpatialIndex::search(std::uint32_t node, const Vec3& query, Scalar& worst,
                          Visitor&& visit) const {
  const Node& n = nodes_[node];
  if (n.axis < 0) {
    for (std::uint32_t i = n.begin; i < n.end; ++i) {
      const std::uint32_t idx = order_[i];
      visit(idx, (points_[idx] - query).squaredNorm());
    }
    return;
  }
  const Scalar delta = query[n.axis] - n.split;
  const std::uint32_t near = delta < 0 ? n.left : n.right;
  const std::uint32_t far = delta < 0 ? n.right : n.left;
  search(near, query, worst, visit);
  if (delta * delta <= worst) search(far, query, worst, visit);
}

std::pair<std::size_t, Scalar> SpatialIndex::nearest(const Vec3& query) const {
  std::size_t best = 0;
  Scalar best_sq = kInf;
  search(0, query, best_sq, [&](std::uint32_t idx, Scalar d2) {
    if (d2 < best_sq || (d2 == best_sq && idx < best)) {
      best_sq = d2;
      best = idx;
    }
  });
  return {best, best_sq};
}

Scalar SpatialIndex::nearest_distance(const Vec3& query) const {
  return std::sqrt(nearest(query).second);
}

std::vector<std::size_t> SpatialIndex::knearest(const Vec3& query,
                                                std::size_t k) const {
  k = std::min(k, points_.size());
  // (distance^2, index) max-heap of the current best k
  std::vector<std::pair<Scalar, std::size_t>> heap;
  heap.reserve(k + 1);
  Scalar worst = kInf;
  search(0, query, worst, [&](std::uint32_t idx, Scalar d2) {
    if (heap.size() < k) {
      heap.emplace_back(d2, idx);
      std::push_heap(heap.begin(), heap.end());
      if (heap.size() == k) worst = heap.front().first;
    } else if (d2 < heap.front().first) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = {d2, idx};
      std::push_heap(heap.begin(), heap.end());
      worst = heap.front().first;
    }
  });
  std::sort(heap.begin(), heap.end());
  std::vector<std::size_t> out;
  out.reserve(heap.size());
  for (const auto& [d2, idx] : heap) out.push_back(idx);
  return out;
}

}  // namespace tpvp
