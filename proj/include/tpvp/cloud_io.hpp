#pragma once

#include <filesystem>

#include "tpvp/point_cloud.hpp"

namespace tpvp {

/// Loads ASCII XYZ (.xyz, one `x y z` per line) or ASCII PLY (.ply with at
/// least x y z vertex properties). Binary PLY and unknown extensions are
/// rejected; parse errors name the offending line.
PointCloud load_cloud(const std::filesystem::path& path);

/// Format chosen by extension, same two formats as load_cloud.
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path);

}  // namespace tpvp
