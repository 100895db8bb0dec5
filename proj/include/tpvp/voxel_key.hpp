#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace tpvp {

struct VoxelKey {
  int x = 0;
  int y = 0;
  int z = 0;
  friend bool operator==(const VoxelKey&, const VoxelKey&) = default;
  friend auto operator<=>(const VoxelKey&, const VoxelKey&) = default;
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const {
    std::uint64_t h = static_cast<std::uint32_t>(k.x);
    h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::uint32_t>(k.y);
    h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::uint32_t>(k.z);
    return static_cast<std::size_t>(h ^ (h >> 32));
  }
};

}  // namespace tpvp
