#include "tpvp/registration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>

#include "tpvp/spatial_index.hpp"

namespace tpvp {

namespace {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Mat3 reorthonormalize(const Mat3& r) {
  const Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 out = svd.matrixU() * svd.matrixV().transpose();
  if (out.determinant() < 0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1;
    out = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return out;
}

}  // namespace

void ParamGradient::add_scaled(const ParamGradient& other, Scalar s) {
  for (std::size_t j = 0; j < rotation.size(); ++j) {
    rotation[j] += s * other.rotation[j];
    translation[j] += s * other.translation[j];
  }
}

Scalar loss_arap(const DeformationGraph& graph, ParamGradient* grad) {
  if (graph.edges.empty()) throw std::invalid_argument("loss_arap: graph has no edges");
  // mean over directed edges, matching the per-item normalization of the
  // Chamfer and Laplacian terms so the loss weights stay comparable
  const Scalar inv_count = 1.0 / static_cast<Scalar>(2 * graph.edges.size());
  Scalar loss = 0;
  auto accumulate = [&](int j, int k) {
    const Vec3 d = graph.nodes[k] - graph.nodes[j];
    const Vec3 e = graph.rotations[j] * d + graph.nodes[j] + graph.translations[j] -
                   (graph.nodes[k] + graph.translations[k]);
    loss += e.squaredNorm() * inv_count;
    if (grad) {
      grad->translation[j] += 2.0 * inv_count * e;
      grad->translation[k] -= 2.0 * inv_count * e;
      // d/d(delta) R_j exp(delta) d = -R_j [d]x, so the tangent gradient is
      // (-R_j [d]x)^T (2 e) = 2 [d]x R_j^T e
      grad->rotation[j] +=
          2.0 * inv_count * (skew(d) * (graph.rotations[j].transpose() * e));
    }
  };
  for (const auto& [j, k] : graph.edges) {
    accumulate(j, k);
    accumulate(k, j);
  }
  return loss;
}

LaplacianSpec build_laplacian_spec(const PointCloud& source, int sample_count,
                                   int k_neighbors, std::uint64_t seed) {
  if (source.empty()) throw std::invalid_argument("build_laplacian_spec: empty cloud");
  const int n = static_cast<int>(source.size());
  LaplacianSpec spec;
  std::vector<int> indices(n);
  std::iota(indices.begin(), indices.end(), 0);
  if (sample_count < n) {
    std::mt19937_64 rng(seed);
    std::shuffle(indices.begin(), indices.end(), rng);
    indices.resize(sample_count);
    std::sort(indices.begin(), indices.end());
  }
  spec.samples = std::move(indices);

  const SpatialIndex index(source);
  const int k = std::min(k_neighbors, n - 1);
  spec.neighbors.resize(spec.samples.size());
  for (std::size_t s = 0; s < spec.samples.size(); ++s) {
    const int i = spec.samples[s];
    const auto nbrs = index.knearest(source.points[i], k + 1);
    for (std::size_t m = 0; m < nbrs.size() && static_cast<int>(spec.neighbors[s].size()) < k; ++m)
      if (static_cast<int>(nbrs[m]) != i)
        spec.neighbors[s].push_back(static_cast<int>(nbrs[m]));
  }

  spec.reference.resize(spec.samples.size(), Vec3::Zero());
  for (std::size_t s = 0; s < spec.samples.size(); ++s) {
    const auto& nbrs = spec.neighbors[s];
    if (nbrs.empty()) continue;
    Vec3 mean = Vec3::Zero();
    for (int m : nbrs) mean += source.points[m];
    mean /= static_cast<Scalar>(nbrs.size());
    spec.reference[s] = source.points[spec.samples[s]] - mean;
  }
  return spec;
}

Scalar loss_laplacian(const PointCloud& warped, const LaplacianSpec& spec,
                      std::vector<Vec3>* point_grad) {
  if (spec.samples.empty()) return 0;
  Scalar loss = 0;
  const Scalar inv_count = 1.0 / static_cast<Scalar>(spec.samples.size());
  for (std::size_t s = 0; s < spec.samples.size(); ++s) {
    const int i = spec.samples[s];
    const auto& nbrs = spec.neighbors[s];
    if (nbrs.empty()) continue;
    Vec3 mean = Vec3::Zero();
    for (int m : nbrs) mean += warped.points[m];
    mean /= static_cast<Scalar>(nbrs.size());
    const Vec3 r = warped.points[i] - mean - spec.reference[s];
    loss += r.squaredNorm() * inv_count;
    if (point_grad) {
      (*point_grad)[i] += 2.0 * inv_count * r;
      const Scalar nb_scale = 2.0 * inv_count / static_cast<Scalar>(nbrs.size());
      for (int m : nbrs) (*point_grad)[m] -= nb_scale * r;
    }
  }
  return loss;
}

ChamferCorrespondences compute_correspondences(const PointCloud& warped,
                                               const PointCloud& target,
                                               Scalar truncation) {
  ChamferCorrespondences corr;
  const SpatialIndex target_index(target);
  corr.source_to_target.resize(warped.size());
  for (std::size_t i = 0; i < warped.size(); ++i)
    corr.source_to_target[i] = static_cast<int>(target_index.nearest(warped.points[i]).first);

  const SpatialIndex warped_index(warped);
  const Scalar trunc_sq = truncation * truncation;
  for (std::size_t q = 0; q < target.size(); ++q) {
    const auto [idx, d2] = warped_index.nearest(target.points[q]);
    if (d2 < trunc_sq)
      corr.target_to_source.emplace_back(static_cast<int>(q), static_cast<int>(idx));
  }
  return corr;
}

Scalar loss_chamfer(const PointCloud& warped, const PointCloud& target,
                    const ChamferCorrespondences& corr,
                    std::vector<Vec3>* point_grad) {
  Scalar forward = 0;
  const Scalar inv_n = 1.0 / static_cast<Scalar>(warped.size());
  for (std::size_t i = 0; i < warped.size(); ++i) {
    const Vec3 r = warped.points[i] - target.points[corr.source_to_target[i]];
    forward += r.squaredNorm() * inv_n;
    if (point_grad) (*point_grad)[i] += inv_n * r;  // 0.5 * 2 * inv_n
  }
  Scalar backward = 0;
  if (!corr.target_to_source.empty()) {
    const Scalar inv_m = 1.0 / static_cast<Scalar>(corr.target_to_source.size());
    for (const auto& [q, i] : corr.target_to_source) {
      const Vec3 r = warped.points[i] - target.points[q];
      backward += r.squaredNorm() * inv_m;
      if (point_grad) (*point_grad)[i] += inv_m * r;
    }
  }
  return 0.5 * (forward + backward);
}

void backprop_warp(const DeformationGraph& graph, const AnchorTable& anchors,
                   const PointCloud& source, const std::vector<Vec3>& point_grad,
                   ParamGradient& grad) {
  for (std::size_t i = 0; i < source.size(); ++i) {
    const Vec3& g = point_grad[i];
    if (g.isZero(0)) continue;
    const auto& ids = anchors.anchors[i];
    const auto& w = anchors.weights[i];
    for (std::size_t m = 0; m < ids.size(); ++m) {
      const int j = ids[m];
      grad.translation[j] += w[m] * g;
      const Vec3 q = source.points[i] - graph.nodes[j];
      grad.rotation[j] += w[m] * (skew(q) * (graph.rotations[j].transpose() * g));
    }
  }
}

RegistrationResult register_clouds(const PointCloud& source, const PointCloud& target,
                                   const RegistrationOptions& options) {
  if (source.empty() || target.empty())
    throw std::invalid_argument("register_clouds: empty cloud");

  RegistrationResult result;
  auto [graph, anchors] = build_graph(source, options.graph);
  result.graph = std::move(graph);
  result.anchors = std::move(anchors);
  DeformationGraph& g = result.graph;
  const std::size_t n = g.node_count();

  const LaplacianSpec lap_spec = build_laplacian_spec(
      source, options.laplacian_samples, options.laplacian_k, options.seed);

  // Adam state over the 6n-dimensional tangent parameterization
  std::vector<Vec3> m_rot(n, Vec3::Zero()), v_rot(n, Vec3::Zero());
  std::vector<Vec3> m_trans(n, Vec3::Zero()), v_trans(n, Vec3::Zero());
  constexpr Scalar beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  PointCloud warped = warp(g, result.anchors, source);
  result.trace.reserve(options.iterations);

  for (int iter = 0; iter < options.iterations; ++iter) {
    const ChamferCorrespondences corr =
        compute_correspondences(warped, target, options.chamfer_truncation);

    ParamGradient grad(n);
    LossBreakdown breakdown;

    ParamGradient arap_grad(n);
    breakdown.arap = loss_arap(g, &arap_grad);
    grad.add_scaled(arap_grad, options.weights.arap);

    std::vector<Vec3> point_grad(warped.size(), Vec3::Zero());
    std::vector<Vec3> cd_point_grad(warped.size(), Vec3::Zero());
    breakdown.cd = loss_chamfer(warped, target, corr, &cd_point_grad);
    std::vector<Vec3> lap_point_grad(warped.size(), Vec3::Zero());
    breakdown.lap = loss_laplacian(warped, lap_spec, &lap_point_grad);
    for (std::size_t i = 0; i < warped.size(); ++i)
      point_grad[i] = options.weights.cd * cd_point_grad[i] +
                      options.weights.lap * lap_point_grad[i];
    backprop_warp(g, result.anchors, source, point_grad, grad);

    breakdown.total = options.weights.arap * breakdown.arap +
                      options.weights.cd * breakdown.cd +
                      options.weights.lap * breakdown.lap;
    if (!std::isfinite(breakdown.total))
      throw std::runtime_error("register_clouds: loss diverged at iteration " +
                               std::to_string(iter));
    result.trace.push_back(breakdown);

    const Scalar t = static_cast<Scalar>(iter + 1);
    const Scalar bc1 = 1.0 - std::pow(beta1, t);
    const Scalar bc2 = 1.0 - std::pow(beta2, t);
    // cosine-decayed step size: Adam's steady-state step is ~lr regardless
    // of gradient magnitude, so a constant rate never settles
    const Scalar lr =
        options.learning_rate * 0.5 *
        (1.0 + std::cos(M_PI * static_cast<Scalar>(iter) / options.iterations));
    const Scalar lr_rot = lr * options.rotation_step_scale;
    const Scalar lr_trans = lr * options.translation_step_scale;
    for (std::size_t j = 0; j < n; ++j) {
      m_rot[j] = beta1 * m_rot[j] + (1 - beta1) * grad.rotation[j];
      v_rot[j] = beta2 * v_rot[j] +
                 (1 - beta2) * grad.rotation[j].cwiseProduct(grad.rotation[j]);
      m_trans[j] = beta1 * m_trans[j] + (1 - beta1) * grad.translation[j];
      v_trans[j] = beta2 * v_trans[j] +
                   (1 - beta2) * grad.translation[j].cwiseProduct(grad.translation[j]);

      const Vec3 delta =
          -lr_rot *
          ((m_rot[j] / bc1).array() / ((v_rot[j] / bc2).array().sqrt() + eps)).matrix();
      g.rotations[j] = g.rotations[j] * so3_exp(delta);
      g.translations[j] -=
          lr_trans *
          ((m_trans[j] / bc1).array() / ((v_trans[j] / bc2).array().sqrt() + eps))
              .matrix();
    }
    if ((iter + 1) % 50 == 0)
      for (Mat3& r : g.rotations) r = reorthonormalize(r);

    warped = warp(g, result.anchors, source);
  }

  result.aligned = std::move(warped);
  return result;
}

}  // namespace tpvp
