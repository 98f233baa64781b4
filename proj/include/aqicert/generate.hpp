#pragma once

#include <cstdint>
#include <vector>

#include "aqicert/family.hpp"
#include "aqicert/graph.hpp"

namespace aqicert {

enum class GeneratorStrategy {
  /// Configuration model first, cyclic lift when that runs out of budget.
  automatic,
  /// Random D-regular pairing, then double-edge swaps on short cycles.
  configuration,
  /// Z_m voltage lift of a fixed cubic cage (3-regular only); the size must be
  /// a multiple of the base order.
  cyclic_lift,
};

struct GeneratorOptions {
  GeneratorStrategy strategy = GeneratorStrategy::automatic;
  /// Fresh random starts per block and strategy.
  std::size_t restarts = 8;
  /// Accepted or rejected moves per start.
  std::size_t moves = 4000;
};

/// Moore bound for girth g at degree D, and the coarser 2 log_{D-1}(n) + 2
/// ceiling. False when either rules the target out.
bool girth_target_feasible(std::size_t D, std::size_t girth, std::size_t size);

/// Smallest vertex count the Moore bound allows for a D-regular graph of girth g.
std::size_t moore_bound(std::size_t D, std::size_t girth);

/// Connected D-regular graph on `size` vertices with girth >= target.
/// Throws GenerationFailure when the target is infeasible or the budget runs out.
FiniteGraph generate_large_girth_graph(std::size_t D, std::size_t girth_target, std::size_t size,
                                       std::uint64_t seed, const GeneratorOptions& opts = {});

/// One block per (target, size) pair; block i is seeded from seed and i.
SpaceFamily generate_large_girth_family(std::size_t D,
                                        const std::vector<std::size_t>& girth_targets,
                                        const std::vector<std::size_t>& sizes, std::uint64_t seed,
                                        const GeneratorOptions& opts = {});

/// Base orders usable by the cyclic lift.
std::vector<std::size_t> lift_base_orders();

}  // namespace aqicert
