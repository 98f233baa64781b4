#include "aqicert/family.hpp"

#include <algorithm>
#include <random>

#include "aqicert/errors.hpp"

namespace aqicert {

Block::Block(FiniteMetricSpace space) : space_(std::move(space)) {}

Block::Block(FiniteGraph graph)
    : space_(FiniteMetricSpace::from_graph(graph)),
      graph_(std::make_shared<const FiniteGraph>(std::move(graph))),
      girth_(aqicert::girth(*graph_)) {}

const FiniteGraph& Block::graph() const {
  if (!graph_) throw PreconditionError("block is a metric space, not a graph");
  return *graph_;
}

Girth Block::girth() const {
  if (!graph_) throw PreconditionError("girth requested for a non-graph block");
  return girth_;
}

SpaceFamily::SpaceFamily(std::vector<Block> blocks, std::optional<std::size_t> degree_bound)
    : blocks_(std::move(blocks)), degree_bound_(degree_bound) {}

SpaceFamily SpaceFamily::from_graphs(std::vector<FiniteGraph> graphs,
                                     std::optional<std::size_t> degree_bound) {
  std::vector<Block> blocks;
  blocks.reserve(graphs.size());
  for (auto& g : graphs) blocks.emplace_back(std::move(g));
  return SpaceFamily(std::move(blocks), degree_bound);
}

std::size_t SpaceFamily::effective_degree_bound() const {
  if (degree_bound_) return *degree_bound_;
  std::size_t d = 0;
  for (const auto& b : blocks_)
    if (b.is_graph()) d = std::max(d, b.graph().max_degree());
  return d;
}

std::string SpaceFamily::large_girth_violation() const {
  if (blocks_.empty()) return "family is empty";
  const std::size_t D = effective_degree_bound();
  if (D < 3) return "degree bound D = " + std::to_string(D) + " is below 3";
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& b = blocks_[i];
    if (!b.is_graph()) return "block " + std::to_string(i) + " is not a graph";
    const auto& g = b.graph();
    if (g.min_degree() < 3 || g.max_degree() > D)
      return "block " + std::to_string(i) + " has degrees in [" + std::to_string(g.min_degree()) +
             ", " + std::to_string(g.max_degree()) + "], outside [3, " + std::to_string(D) + "]";
    if (i > 0) {
      const Girth prev = blocks_[i - 1].girth();
      const Girth cur = b.girth();
      const bool increasing = !prev ? false : (!cur || *cur > *prev);
      if (!increasing) return "girth does not increase strictly at block " + std::to_string(i);
      if (b.size() < blocks_[i - 1].size())
        return "cardinality decreases at block " + std::to_string(i);
    }
  }
  if (blocks_.size() >= 2 && blocks_.back().size() <= blocks_.front().size())
    return "cardinalities do not grow along the family";
  return {};
}

void SpaceFamily::require_large_girth() const {
  if (auto why = large_girth_violation(); !why.empty())
    throw PreconditionError("not a large-girth family: " + why);
}

CoarseDisjointUnion::CoarseDisjointUnion(SpaceFamily family, std::uint64_t check_seed)
    : family_(std::move(family)) {
  if (family_.empty()) throw InvalidArgument("coarse disjoint union of an empty family");
  Rational running = 0;
  starts_.push_back(0);
  for (std::size_t i = 0; i < family_.size(); ++i) {
    running += family_.block(i).space().diameter();
    offsets_.push_back(Rational(static_cast<long>(i + 1)) + running);
    starts_.push_back(starts_.back() + family_.block(i).size());
  }
  if (auto bad = metric_violation(60, 10000, check_seed); !bad.empty())
    throw InternalError("assembled union is not a metric: " + bad);
}

CoarseDisjointUnion::Location CoarseDisjointUnion::locate(Point global) const {
  if (global >= size()) throw InvalidArgument("point index out of range");
  auto it = std::upper_bound(starts_.begin(), starts_.end(), global);
  std::size_t block = static_cast<std::size_t>(it - starts_.begin()) - 1;
  return {block, global - starts_[block]};
}

Point CoarseDisjointUnion::global(std::size_t block, Point local) const {
  if (block >= family_.size() || local >= family_.block(block).size())
    throw InvalidArgument("point index out of range");
  return starts_[block] + local;
}

Rational CoarseDisjointUnion::distance(Point x, Point y) const {
  auto a = locate(x);
  auto b = locate(y);
  if (a.block == b.block) return family_.block(a.block).space().distance(a.point, b.point);
  return offsets_[a.block] + offsets_[b.block];
}

FiniteMetricSpace CoarseDisjointUnion::materialize() const {
  const std::size_t n = size();
  std::vector<Rational> table(n * n);
  for (Point x = 0; x < n; ++x)
    for (Point y = 0; y < n; ++y) table[x * n + y] = distance(x, y);
  return FiniteMetricSpace::from_table(n, table);
}

std::string CoarseDisjointUnion::metric_violation(std::size_t exhaustive_limit,
                                                  std::size_t samples,
                                                  std::uint64_t seed) const {
  // Blocks are metrics on their own; cross-block triples only need
  // s_i >= diam(X_i) / 2, which the offset formula gives.
  for (std::size_t i = 0; i < family_.size(); ++i)
    if (offsets_[i] * 2 < family_.block(i).space().diameter())
      return "offset of block " + std::to_string(i) + " below half its diameter";

  auto check = [&](Point x, Point y, Point z) -> std::string {
    Rational xy = distance(x, y), yz = distance(y, z), xz = distance(x, z);
    if ((x == y) != (xy == 0)) return "positivity at (" + std::to_string(x) + "," + std::to_string(y) + ")";
    if (xz > xy + yz)
      return "triangle at (" + std::to_string(x) + "," + std::to_string(y) + "," +
             std::to_string(z) + ")";
    return {};
  };
  const std::size_t n = size();
  if (n <= exhaustive_limit) {
    for (Point x = 0; x < n; ++x)
      for (Point y = 0; y < n; ++y)
        for (Point z = 0; z < n; ++z)
          if (auto bad = check(x, y, z); !bad.empty()) return bad;
    return {};
  }
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < samples; ++t) {
    Point x = rng() % n, y = rng() % n, z = rng() % n;
    if (auto bad = check(x, y, z); !bad.empty()) return bad;
  }
  return {};
}

CoarseDisjointUnion assemble_union(const SpaceFamily& f) { return CoarseDisjointUnion(f); }

}  // namespace aqicert
