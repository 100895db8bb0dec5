#include "tpvp/path_planning.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tpvp {

namespace {

constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

ViewPath held_karp(const View& start, const std::vector<View>& views) {
  const int n = static_cast<int>(views.size());
  std::vector<Scalar> from_start(n);
  std::vector<std::vector<Scalar>> dist(n, std::vector<Scalar>(n));
  for (int i = 0; i < n; ++i) {
    from_start[i] = (views[i].position - start.position).norm();
    for (int j = 0; j < n; ++j)
      dist[i][j] = (views[i].position - views[j].position).norm();
  }

  // cost[mask][i]: cheapest path start -> (visits mask) ending at i
  const std::size_t size = std::size_t(1) << n;
  std::vector<std::vector<Scalar>> cost(size, std::vector<Scalar>(n, kInf));
  std::vector<std::vector<int>> parent(size, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) cost[std::size_t(1) << i][i] = from_start[i];
  for (std::size_t mask = 1; mask < size; ++mask) {
    for (int i = 0; i < n; ++i) {
      if (!(mask & (std::size_t(1) << i)) || cost[mask][i] == kInf) continue;
      for (int j = 0; j < n; ++j) {
        if (mask & (std::size_t(1) << j)) continue;
        const std::size_t next = mask | (std::size_t(1) << j);
        const Scalar c = cost[mask][i] + dist[i][j];
        if (c < cost[next][j]) {
          cost[next][j] = c;
          parent[next][j] = i;
        }
      }
    }
  }
  const std::size_t full = size - 1;
  int end = 0;
  for (int i = 1; i < n; ++i)
    if (cost[full][i] < cost[full][end]) end = i;

  std::vector<int> order_rev;
  std::size_t mask = full;
  int cur = end;
  while (cur >= 0) {
    order_rev.push_back(cur);
    const int prev = parent[mask][cur];
    mask &= ~(std::size_t(1) << cur);
    cur = prev;
  }
  ViewPath path;
  path.order.push_back(start.id);
  for (auto it = order_rev.rbegin(); it != order_rev.rend(); ++it)
    path.order.push_back(views[*it].id);
  path.total_cost = cost[full][end];
  path.exact = true;
  return path;
}

ViewPath nearest_neighbor_2opt(const View& start, const std::vector<View>& views) {
  const int n = static_cast<int>(views.size());
  std::vector<int> order;
  std::vector<bool> used(n, false);
  Vec3 pos = start.position;
  for (int step = 0; step < n; ++step) {
    int best = -1;
    Scalar best_d = kInf;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      const Scalar d = (views[i].position - pos).norm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    order.push_back(best);
    used[best] = true;
    pos = views[best].position;
  }

  auto leg = [&](int a, int b) { return (views[a].position - views[b].position).norm(); };
  auto path_cost = [&](const std::vector<int>& o) {
    Scalar c = (views[o[0]].position - start.position).norm();
    for (int i = 0; i + 1 < n; ++i) c += leg(o[i], o[i + 1]);
    return c;
  };
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < n - 1 && !improved; ++i)
      for (int j = i + 1; j < n && !improved; ++j) {
        std::vector<int> trial = order;
        std::reverse(trial.begin() + i, trial.begin() + j + 1);
        if (path_cost(trial) + 1e-12 < path_cost(order)) {
          order = std::move(trial);
          improved = true;
        }
      }
  }
  ViewPath path;
  path.order.push_back(start.id);
  for (int i : order) path.order.push_back(views[i].id);
  path.total_cost = path_cost(order);
  path.exact = false;
  return path;
}

}  // namespace

ViewPath shortest_hamiltonian_path(const View& start, const std::vector<View>& views,
                                   int exact_limit) {
  for (const View& v : views)
    if (v.id == start.id)
      throw std::invalid_argument("shortest_hamiltonian_path: start must not be in views");
  if (views.empty()) return ViewPath{{start.id}, 0, true};
  if (static_cast<int>(views.size()) <= exact_limit) return held_karp(start, views);
  return nearest_neighbor_2opt(start, views);
}

}  // namespace tpvp
