#include "tpvp/visibility.hpp"

#include <stdexcept>

namespace tpvp {

VisibilityMatrix build_visibility(const PointCloud& surface, const ViewSpace& views,
                                  const OccupancyGrid& grid) {
  if (surface.empty()) throw std::invalid_argument("build_visibility: empty surface");
  VisibilityMatrix matrix;
  matrix.point_count = surface.size();
  matrix.covered.assign(views.size(), std::vector<bool>(surface.size(), false));
  matrix.view_ids.reserve(views.size());
  for (const View& v : views.views) matrix.view_ids.push_back(v.id);

  for (std::size_t c = 0; c < views.size(); ++c) {
    const Vec3& pos = views.views[c].position;
    for (std::size_t p = 0; p < surface.size(); ++p)
      matrix.covered[c][p] = grid.point_visible(pos, surface.points[p]);
  }
  for (std::size_t p = 0; p < surface.size(); ++p) {
    bool any = false;
    for (std::size_t c = 0; c < views.size() && !any; ++c) any = matrix.covered[c][p];
    if (!any) matrix.uncoverable.push_back(static_cast<int>(p));
  }
  return matrix;
}

}  // namespace tpvp
