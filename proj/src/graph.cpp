#include "aqicert/graph.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "aqicert/errors.hpp"

namespace aqicert {

FiniteGraph::FiniteGraph(std::size_t n, std::vector<Edge> edges) : adjacency_(n) {
  if (n == 0) throw InvalidArgument("graph must have at least one vertex");
  for (auto& [u, v] : edges) {
    if (u >= n || v >= n)
      throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                            ") out of range for " + std::to_string(n) + " vertices");
    if (u == v) throw InvalidArgument("loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
    throw InvalidArgument("repeated edge (" + std::to_string(dup->first) + "," +
                          std::to_string(dup->second) + ")");
  for (const auto& [u, v] : edges) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
  edges_ = std::move(edges);

  auto dist = distances_from(0);
  for (std::size_t v = 0; v < n; ++v)
    if (dist[v] < 0) throw InvalidArgument("graph is disconnected (vertex " + std::to_string(v) + ")");
}

std::size_t FiniteGraph::min_degree() const {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& list : adjacency_) best = std::min(best, list.size());
  return best;
}

std::size_t FiniteGraph::max_degree() const {
  std::size_t best = 0;
  for (const auto& list : adjacency_) best = std::max(best, list.size());
  return best;
}

bool FiniteGraph::adjacent(Point u, Point v) const {
  const auto& list = adjacency_.at(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<std::int32_t> FiniteGraph::distances_from(Point source) const {
  std::vector<std::int32_t> dist(size(), -1);
  std::vector<Point> queue;
  queue.reserve(size());
  queue.push_back(source);
  dist.at(source) = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Point v = queue[head];
    for (Point u : adjacency_[v]) {
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

std::optional<std::size_t> shortest_cycle_from(const FiniteGraph& g, Point root,
                                               std::size_t limit) {
  const std::size_t n = g.size();
  std::vector<std::int32_t> dist(n, -1);
  std::vector<Point> parent(n, n);
  std::vector<Point> queue{root};
  dist[root] = 0;
  std::size_t best = limit;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Point v = queue[head];
    if (2 * static_cast<std::size_t>(dist[v]) + 1 >= best) break;
    for (Point u : g.neighbours(v)) {
      if (u == parent[v]) continue;
      if (dist[u] >= 0) {
        best = std::min(best, static_cast<std::size_t>(dist[u] + dist[v] + 1));
      } else {
        dist[u] = dist[v] + 1;
        parent[u] = v;
        queue.push_back(u);
      }
    }
  }
  if (best >= limit) return std::nullopt;
  return best;
}

Girth girth(const FiniteGraph& g) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (Point v = 0; v < g.size(); ++v) {
    if (auto c = shortest_cycle_from(g, v, best)) best = *c;
    if (best == 3) break;
  }
  if (best == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return best;
}

FiniteGraph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Point u = 0; u < n; ++u)
    for (Point v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return FiniteGraph(n, std::move(edges));
}

FiniteGraph cycle_graph(std::size_t n) {
  if (n < 3) throw InvalidArgument("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Point v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return FiniteGraph(n, std::move(edges));
}

FiniteGraph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Point v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return FiniteGraph(n, std::move(edges));
}

FiniteGraph petersen_graph() {
  std::vector<Edge> edges;
  for (Point i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);          // outer 5-cycle
    edges.emplace_back(i, i + 5);                // spokes
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
  }
  return FiniteGraph(10, std::move(edges));
}

FiniteGraph lcf_graph(std::size_t n, std::span<const std::int64_t> pattern) {
  if (pattern.empty() || n < 4) throw InvalidArgument("empty LCF pattern");
  const auto sn = static_cast<std::int64_t>(n);
  std::vector<Edge> edges;
  for (std::int64_t v = 0; v < sn; ++v) {
    edges.emplace_back(v, (v + 1) % sn);
    std::int64_t jump = pattern[static_cast<std::size_t>(v) % pattern.size()];
    std::int64_t u = ((v + jump) % sn + sn) % sn;
    std::int64_t back = pattern[static_cast<std::size_t>(u) % pattern.size()];
    if (((u + back) % sn + sn) % sn != v)
      throw InvalidArgument("LCF pattern is not an involution at vertex " + std::to_string(v));
    if (v < u) edges.emplace_back(v, u);
  }
  return FiniteGraph(n, std::move(edges));
}

}  // namespace aqicert
