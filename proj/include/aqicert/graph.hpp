#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace aqicert {

using Point = std::size_t;
/// Sorted, duplicate-free list of point indices.
using PointSet = std::vector<Point>;
using Edge = std::pair<Point, Point>;

/// Girth of a graph; std::nullopt encodes an acyclic graph (infinite girth).
using Girth = std::optional<std::size_t>;

/// Simple connected undirected graph on vertices 0..n-1. Immutable.
class FiniteGraph {
 public:
  /// Throws InvalidArgument for loops, repeated edges, out-of-range endpoints or
  /// a disconnected result.
  FiniteGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const { return adjacency_.size(); }
  /// Edges with u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Point> neighbours(Point v) const { return adjacency_.at(v); }
  std::size_t degree(Point v) const { return adjacency_.at(v).size(); }
  std::size_t min_degree() const;
  std::size_t max_degree() const;
  bool adjacent(Point u, Point v) const;

  /// Breadth-first distances from source; unreachable entries cannot occur.
  std::vector<std::int32_t> distances_from(Point source) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Point>> adjacency_;
};

/// Length of the shortest cycle, by a breadth-first search rooted at every vertex.
Girth girth(const FiniteGraph& g);

/// Shortest cycle passing through `root`'s breadth-first tree, cut off at `limit`
/// (cycles of length >= limit are ignored). Used by the generators.
std::optional<std::size_t> shortest_cycle_from(const FiniteGraph& g, Point root,
                                               std::size_t limit);

FiniteGraph complete_graph(std::size_t n);
FiniteGraph cycle_graph(std::size_t n);
FiniteGraph path_graph(std::size_t n);
FiniteGraph petersen_graph();
/// Hamiltonian cubic graph in LCF notation: vertex v is joined to v±1 and to
/// v + pattern[v mod |pattern|] (mod n). Throws if the pattern is inconsistent.
FiniteGraph lcf_graph(std::size_t n, std::span<const std::int64_t> pattern);

}  // namespace aqicert
