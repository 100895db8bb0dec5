#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <unordered_set>

#include "tpvp/cloud_io.hpp"
#include "tpvp/point_cloud.hpp"
#include "tpvp/spatial_index.hpp"
#include "tpvp/voxel_key.hpp"

using namespace tpvp;

namespace {

PointCloud random_cloud(std::size_t n, Scalar extent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> uni(0.0, extent);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    cloud.points.emplace_back(uni(rng), uni(rng), uni(rng));
  return cloud;
}

// independent hash-grid occupancy oracle
std::size_t distinct_voxel_count(const PointCloud& cloud, Scalar voxel) {
  std::unordered_set<VoxelKey, VoxelKeyHash> keys;
  for (const Vec3& p : cloud.points) {
    const auto idx = voxel_index_of(p, voxel);
    keys.insert(VoxelKey{idx.x(), idx.y(), idx.z()});
  }
  return keys.size();
}

Scalar brute_force_chamfer(const PointCloud& a, const PointCloud& b) {
  auto directed = [](const PointCloud& from, const PointCloud& to) {
    Scalar sum = 0;
    for (const Vec3& p : from.points) {
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (const Vec3& q : to.points) best = std::min(best, (p - q).norm());
      sum += best;
    }
    return sum / static_cast<Scalar>(from.size());
  };
  return 0.5 * (directed(a, b) + directed(b, a));
}

}  // namespace

TEST_CASE("voxel_downsample merges a tiny cube into its center") {
  PointCloud cloud;
  for (int x : {0, 1})
    for (int y : {0, 1})
      for (int z : {0, 1})
        cloud.points.emplace_back(x * 0.001, y * 0.001, z * 0.001);
  const PointCloud down = voxel_downsample(cloud, 0.004);
  REQUIRE(down.size() == 1);
  CHECK((down[0] - Vec3(0.0005, 0.0005, 0.0005)).norm() < 1e-12);
}

TEST_CASE("voxel_downsample keeps separated points apart") {
  PointCloud cloud;
  cloud.points.emplace_back(0, 0, 0);
  cloud.points.emplace_back(0.01, 0, 0);
  CHECK(voxel_downsample(cloud, 0.004).size() == 2);
}

TEST_CASE("voxel_downsample count matches the occupancy oracle") {
  const PointCloud cloud = random_cloud(10'000, 0.12, 7);
  const PointCloud down = voxel_downsample(cloud, 0.004);
  CHECK(down.size() == distinct_voxel_count(cloud, 0.004));
  // every input point within voxel_size * sqrt(3) of some output point
  const SpatialIndex index(down);
  for (const Vec3& p : cloud.points)
    CHECK(index.nearest_distance(p) <= 0.004 * std::sqrt(3.0) + 1e-12);
}

TEST_CASE("voxel_downsample of empty cloud is empty") {
  CHECK(voxel_downsample(PointCloud{}, 0.004).empty());
}

TEST_CASE("nearest neighbor on tiny fixtures") {
  PointCloud cloud;
  cloud.points.emplace_back(0, 0, 0);
  SpatialIndex single(cloud);
  CHECK(single.nearest_distance(Vec3(0.003, 0, 0)) == doctest::Approx(0.003));

  cloud.points.emplace_back(1, 0, 0);
  SpatialIndex two(cloud);
  CHECK(two.nearest_distance(Vec3(0.6, 0, 0)) == doctest::Approx(0.4));
}

TEST_CASE("nearest neighbor matches exhaustive scan on random pairs") {
  const PointCloud cloud = random_cloud(1'000, 1.0, 11);
  const SpatialIndex index(cloud);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<Scalar> uni(-0.2, 1.2);
  for (int t = 0; t < 1000; ++t) {
    const Vec3 q(uni(rng), uni(rng), uni(rng));
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (const Vec3& p : cloud.points) best = std::min(best, (p - q).norm());
    CHECK(index.nearest_distance(q) == doctest::Approx(best).epsilon(1e-14));
  }
}

TEST_CASE("knearest matches a sorted exhaustive scan") {
  const PointCloud cloud = random_cloud(500, 1.0, 21);
  const SpatialIndex index(cloud);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<Scalar> uni(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const Vec3 q(uni(rng), uni(rng), uni(rng));
    const auto got = index.knearest(q, 8);
    std::vector<std::pair<Scalar, std::size_t>> all;
    for (std::size_t i = 0; i < cloud.size(); ++i)
      all.emplace_back((cloud[i] - q).squaredNorm(), i);
    std::sort(all.begin(), all.end());
    REQUIRE(got.size() == 8);
    for (int k = 0; k < 8; ++k) CHECK(got[k] == all[k].second);
  }
}

TEST_CASE("chamfer distance basics") {
  const PointCloud a = random_cloud(100, 0.1, 31);
  CHECK(chamfer_distance(a, a) == doctest::Approx(0.0));

  PointCloud u, v;
  u.points.emplace_back(0, 0, 0);
  v.points.emplace_back(0.002, 0, 0);
  CHECK(chamfer_distance(u, v) == doctest::Approx(0.002));
  CHECK_THROWS(chamfer_distance(PointCloud{}, a));
}

TEST_CASE("chamfer matches the O(n^2) oracle and is symmetric") {
  const PointCloud a = random_cloud(500, 0.1, 41);
  const PointCloud b = random_cloud(500, 0.1, 42);
  CHECK(chamfer_distance(a, b) == doctest::Approx(brute_force_chamfer(a, b)).epsilon(1e-12));
  CHECK(std::abs(chamfer_distance(a, b) - chamfer_distance(b, a)) < 1e-12);
}

TEST_CASE("xyz and ply round trips") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tpvp_io_test";
  fs::create_directories(dir);

  {
    std::ofstream f(dir / "three.xyz");
    f << "0 0 0\n0.1 0 0\n0 0.2 0.3\n";
  }
  CHECK(load_cloud(dir / "three.xyz").size() == 3);

  {
    std::ofstream f(dir / "grid.ply");
    f << "ply\nformat ascii 1.0\nelement vertex 100\n"
         "property float x\nproperty float y\nproperty float z\nend_header\n";
    for (int i = 0; i < 100; ++i) f << i * 0.01 << " 0 0\n";
  }
  CHECK(load_cloud(dir / "grid.ply").size() == 100);

  const PointCloud cloud = random_cloud(10'000, 0.5, 51);
  for (const char* name : {"roundtrip.xyz", "roundtrip.ply"}) {
    save_cloud(cloud, dir / name);
    const PointCloud loaded = load_cloud(dir / name);
    REQUIRE(loaded.size() == cloud.size());
    Scalar max_err = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i)
      max_err = std::max(max_err, (loaded[i] - cloud[i]).norm());
    CHECK(max_err < 1e-6);
  }

  {
    std::ofstream f(dir / "bad.xyz");
    f << "0 0 0\n0.1 nope\n";
  }
  CHECK_THROWS_WITH_AS(static_cast<void>(load_cloud(dir / "bad.xyz")),
                       doctest::Contains(":2:"), std::runtime_error);
  {
    std::ofstream f(dir / "binary.ply");
    f << "ply\nformat binary_little_endian 1.0\nelement vertex 0\nend_header\n";
  }
  CHECK_THROWS(static_cast<void>(load_cloud(dir / "binary.ply")));
  CHECK_THROWS(static_cast<void>(load_cloud(dir / "cloud.pcd")));
}
