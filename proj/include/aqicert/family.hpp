#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aqicert/graph.hpp"
#include "aqicert/metric_space.hpp"

namespace aqicert {

/// One member X_i of a family: a metric space, optionally carrying the graph
/// whose path metric it is (and then its girth).
class Block {
 public:
  explicit Block(FiniteMetricSpace space);
  explicit Block(FiniteGraph graph);

  const FiniteMetricSpace& space() const { return space_; }
  std::size_t size() const { return space_.size(); }
  bool is_graph() const { return graph_ != nullptr; }
  /// Throws PreconditionError for a metric-only block.
  const FiniteGraph& graph() const;
  Girth girth() const;

 private:
  FiniteMetricSpace space_;
  std::shared_ptr<const FiniteGraph> graph_;
  Girth girth_;
};

/// Ordered sequence of blocks, with an optional degree bound D.
class SpaceFamily {
 public:
  SpaceFamily() = default;
  explicit SpaceFamily(std::vector<Block> blocks, std::optional<std::size_t> degree_bound = {});
  static SpaceFamily from_graphs(std::vector<FiniteGraph> graphs,
                                 std::optional<std::size_t> degree_bound = {});

  std::size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }
  const Block& block(std::size_t i) const { return blocks_.at(i); }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::optional<std::size_t> degree_bound() const { return degree_bound_; }
  /// The recorded bound, or the largest vertex degree over all graph blocks.
  std::size_t effective_degree_bound() const;

  /// Empty string when the family qualifies as a large-girth family: every
  /// block a graph, degrees in [3, D], girth strictly increasing, cardinalities
  /// non-decreasing with |X_last| > |X_first| (when there are two or more
  /// blocks). Otherwise a description of the first violation.
  std::string large_girth_violation() const;
  /// Throws PreconditionError carrying large_girth_violation().
  void require_large_girth() const;

 private:
  std::vector<Block> blocks_;
  std::optional<std::size_t> degree_bound_;
};

/// Coarse disjoint union of a family: within-block distances are the block
/// metrics; d(x, y) = s_i + s_j for x in X_i, y in X_j with i != j, where
/// s_i = i + sum_{l <= i} diam(X_l) (blocks numbered from 1).
class CoarseDisjointUnion {
 public:
  /// Throws InternalError if the assembled distance fails the metric axioms.
  explicit CoarseDisjointUnion(SpaceFamily family, std::uint64_t check_seed = 0);

  const SpaceFamily& family() const { return family_; }
  const std::vector<Rational>& offsets() const { return offsets_; }
  std::size_t size() const { return starts_.back(); }

  struct Location {
    std::size_t block;
    Point point;
  };
  Location locate(Point global) const;
  Point global(std::size_t block, Point local) const;

  Rational distance(Point x, Point y) const;

  /// Full distance table as a metric space. Intended for small unions.
  FiniteMetricSpace materialize() const;

  /// Triangle inequality and positivity on every triple when size() <= exhaustive_limit,
  /// otherwise on `samples` seeded random triples. Returns the first violating
  /// triple description, or empty when the check passes.
  std::string metric_violation(std::size_t exhaustive_limit, std::size_t samples,
                               std::uint64_t seed) const;

 private:
  SpaceFamily family_;
  std::vector<Rational> offsets_;
  std::vector<std::size_t> starts_;
};

CoarseDisjointUnion assemble_union(const SpaceFamily& f);

}  // namespace aqicert
