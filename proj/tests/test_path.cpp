#include <doctest.h>

#include <algorithm>
#include <random>

#include "tpvp/path_planning.hpp"

using namespace tpvp;

namespace {

View make_view(int id, const Vec3& pos) {
  View v;
  v.id = id;
  v.position = pos;
  return v;
}

Scalar brute_force_path(const View& start, const std::vector<View>& views) {
  std::vector<int> perm(views.size());
  for (std::size_t i = 0; i < views.size(); ++i) perm[i] = static_cast<int>(i);
  Scalar best = std::numeric_limits<Scalar>::infinity();
  do {
    Scalar cost = (views[perm[0]].position - start.position).norm();
    for (std::size_t i = 0; i + 1 < perm.size(); ++i)
      cost += (views[perm[i + 1]].position - views[perm[i]].position).norm();
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("collinear views are visited in order") {
  const View start = make_view(0, Vec3(0, 0, 0));
  const std::vector<View> views{make_view(1, Vec3(1, 0, 0)), make_view(2, Vec3(2, 0, 0))};
  const ViewPath path = shortest_hamiltonian_path(start, views);
  CHECK(path.order == std::vector<int>{0, 1, 2});
  CHECK(path.total_cost == doctest::Approx(2.0));
  CHECK(path.exact);
}

TEST_CASE("unit square corners from the origin") {
  const View start = make_view(0, Vec3(0, 0, 0));
  const std::vector<View> views{make_view(1, Vec3(1, 0, 0)), make_view(2, Vec3(1, 1, 0)),
                                make_view(3, Vec3(0, 1, 0))};
  const ViewPath path = shortest_hamiltonian_path(start, views);
  CHECK(path.total_cost == doctest::Approx(3.0));
}

TEST_CASE("held-karp equals permutation brute force on random instances") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<Scalar> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> size(1, 9);
  for (int trial = 0; trial < 50; ++trial) {
    const View start = make_view(100, Vec3(uni(rng), uni(rng), uni(rng)));
    std::vector<View> views;
    const int n = size(rng);
    for (int i = 0; i < n; ++i)
      views.push_back(make_view(i, Vec3(uni(rng), uni(rng), uni(rng))));
    const ViewPath path = shortest_hamiltonian_path(start, views);
    CHECK(path.exact);
    CHECK(path.total_cost == doctest::Approx(brute_force_path(start, views)).epsilon(1e-12));
    // path is a permutation of {start} + views
    std::vector<int> ids = path.order;
    std::sort(ids.begin(), ids.end());
    std::vector<int> expected;
    for (int i = 0; i < n; ++i) expected.push_back(i);
    expected.push_back(100);
    CHECK(ids == expected);
  }
}

TEST_CASE("cost invariant under global rigid motion") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<Scalar> uni(-1.0, 1.0);
  const View start = make_view(0, Vec3(uni(rng), uni(rng), uni(rng)));
  std::vector<View> views;
  for (int i = 1; i <= 7; ++i)
    views.push_back(make_view(i, Vec3(uni(rng), uni(rng), uni(rng))));
  const Scalar base = shortest_hamiltonian_path(start, views).total_cost;

  const Mat3 rot = Eigen::AngleAxis<Scalar>(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  const Vec3 shift(0.4, -0.2, 0.9);
  View start2 = start;
  start2.position = rot * start.position + shift;
  std::vector<View> views2 = views;
  for (View& v : views2) v.position = rot * v.position + shift;
  CHECK(std::abs(shortest_hamiltonian_path(start2, views2).total_cost - base) < 1e-9);
}

TEST_CASE("heuristic fallback is flagged and never beats exact") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<Scalar> uni(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const View start = make_view(100, Vec3(uni(rng), uni(rng), uni(rng)));
    std::vector<View> views;
    for (int i = 0; i < 12; ++i)
      views.push_back(make_view(i, Vec3(uni(rng), uni(rng), uni(rng))));
    const ViewPath exact = shortest_hamiltonian_path(start, views, 20);
    const ViewPath heuristic = shortest_hamiltonian_path(start, views, 5);
    CHECK(exact.exact);
    CHECK(!heuristic.exact);
    CHECK(heuristic.total_cost >= exact.total_cost - 1e-12);
  }
}

TEST_CASE("start inside the view set is rejected") {
  const View start = make_view(1, Vec3(0, 0, 0));
  CHECK_THROWS(shortest_hamiltonian_path(start, {make_view(1, Vec3(1, 0, 0))}));
}
