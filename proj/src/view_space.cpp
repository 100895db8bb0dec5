#include <cmath>
#include <stdexcept>

#include "tpvp/view_space.hpp"

namespace tpvp {

Mat3 look_at(const Vec3& forward) {
  const Vec3 z = forward.normalized();
  Vec3 up = Vec3::UnitZ();
  if (std::abs(z.dot(up)) > 0.999) up = Vec3::UnitX();
  const Vec3 x = up.cross(z).normalized();
  const Vec3 y = z.cross(x);
  Mat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return r;
}

ViewSpace build_view_space_n(ViewSpaceKind kind, int n, const Vec3& center,
                             Scalar radius, std::uint64_t seed) {
  if (radius <= 0) throw std::invalid_argument("build_view_space: radius must be > 0");
  const TammesResult tammes = solve_tammes(n, kind, seed);
  ViewSpace space;
  space.kind = kind;
  space.center = center;
  space.radius = radius;
  space.views.reserve(n);
  for (int i = 0; i < n; ++i) {
    View v;
    v.id = i;
    v.position = center + radius * tammes.directions[i];
    v.orientation = look_at(center - v.position);
    space.views.push_back(v);
  }
  return space;
}

ViewSpace build_view_space(ViewSpaceKind kind, const Vec3& center, Scalar radius,
                           std::uint64_t seed) {
  const int n = kind == ViewSpaceKind::kHemisphere ? 32 : 63;
  return build_view_space_n(kind, n, center, radius, seed);
}

}  // namespace tpvp
