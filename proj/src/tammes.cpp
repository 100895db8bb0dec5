#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "tpvp/view_space.hpp"

namespace tpvp {

namespace {

Vec3 constrain(Vec3 d, ViewSpaceKind kind) {
  if (kind == ViewSpaceKind::kHemisphere && d.z() < 0) d.z() = 0;
  const Scalar norm = d.norm();
  if (norm == 0) return Vec3::UnitZ();
  return d / norm;
}

std::vector<Vec3> random_directions(int n, ViewSpaceKind kind, std::mt19937_64& rng) {
  std::normal_distribution<Scalar> gauss(0.0, 1.0);
  std::vector<Vec3> dirs(n);
  for (Vec3& d : dirs) {
    do {
      d = Vec3(gauss(rng), gauss(rng), gauss(rng));
    } while (d.norm() < 1e-6);
    if (kind == ViewSpaceKind::kHemisphere) d.z() = std::abs(d.z());
    d.normalize();
  }
  return dirs;
}

// Inverse-distance potential gradient: force on i is sum over j of
// (d_i - d_j) / |d_i - d_j|^3.
std::vector<Vec3> repulsion_forces(const std::vector<Vec3>& dirs) {
  const int n = static_cast<int>(dirs.size());
  std::vector<Vec3> forces(n, Vec3::Zero());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vec3 diff = dirs[i] - dirs[j];
      const Scalar dist = std::max(diff.norm(), Scalar(1e-9));
      const Vec3 f = diff / (dist * dist * dist);
      forces[i] += f;
      forces[j] -= f;
    }
  }
  return forces;
}

TammesResult repulsion_run(int n, ViewSpaceKind kind, std::mt19937_64& rng,
                           int max_iterations) {
  std::vector<Vec3> dirs = random_directions(n, kind, rng);
  Scalar min_angle = min_pairwise_angle(dirs);
  Scalar step = 0.1;
  for (int iter = 0; iter < max_iterations && step > 1e-13; ++iter) {
    const std::vector<Vec3> forces = repulsion_forces(dirs);
    Scalar max_force = 0;
    for (const Vec3& f : forces) max_force = std::max(max_force, f.norm());
    if (max_force == 0) break;

    // step-halving line search: accept only if the min angle does not drop
    Scalar max_move = 0;
    bool accepted = false;
    while (step > 1e-13) {
      std::vector<Vec3> trial(n);
      max_move = 0;
      for (int i = 0; i < n; ++i) {
        trial[i] = constrain(dirs[i] + (step / max_force) * forces[i], kind);
        max_move = std::max(max_move, (trial[i] - dirs[i]).norm());
      }
      const Scalar trial_angle = min_pairwise_angle(trial);
      if (trial_angle >= min_angle) {
        dirs = std::move(trial);
        min_angle = trial_angle;
        step = std::min(step * 1.2, Scalar(0.5));
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (accepted && max_move < 1e-9) break;  // converged
  }
  return TammesResult{std::move(dirs), min_angle};
}

}  // namespace

Scalar min_pairwise_angle(const std::vector<Vec3>& directions) {
  Scalar min_angle = M_PI;
  for (std::size_t i = 0; i < directions.size(); ++i)
    for (std::size_t j = i + 1; j < directions.size(); ++j) {
      const Scalar c = std::clamp(directions[i].dot(directions[j]), Scalar(-1), Scalar(1));
      min_angle = std::min(min_angle, std::acos(c));
    }
  return min_angle;
}

TammesResult solve_tammes(int n, ViewSpaceKind kind, std::uint64_t seed,
                          int restarts, int max_iterations) {
  if (n < 2) throw std::invalid_argument("solve_tammes: n must be >= 2");
  std::mt19937_64 rng(seed);
  TammesResult best;
  best.min_angle = -1;
  for (int r = 0; r < restarts; ++r) {
    TammesResult run = repulsion_run(n, kind, rng, max_iterations);
    if (run.min_angle > best.min_angle) best = std::move(run);
  }
  return best;
}

}  // namespace tpvp
