#pragma once

#include <vector>

#include "aqicert/family.hpp"
#include "aqicert/report.hpp"

namespace aqicert {

/// Rational function on the vertices of a graph block.
struct L1Function {
  Block block;
  std::vector<Rational> values;

  /// Throws InvalidArgument unless `block` is a graph and sizes agree.
  L1Function(Block block, std::vector<Rational> values);

  PointSet support() const;
  Rational l1_norm() const;
  L1Function absolute() const;
};

/// Sum over ordered adjacent pairs of |eta(x) - eta(y)|, i.e. twice the edge sum.
Rational l1_gradient(const L1Function& eta);

/// Superlevel sets F_1 ⊇ F_2 ⊇ ... at the distinct positive values of eta with
/// coefficients a_j, so that eta = sum_j (a_j / |F_j|) chi_{F_j}.
struct LevelSetDecomposition {
  std::vector<PointSet> sets;
  std::vector<Rational> coefficients;

  /// sum_j (a_j / |F_j|) chi_{F_j} on n points.
  std::vector<Rational> reconstruct(std::size_t n) const;
};

/// Throws InvalidArgument for a negative value or the zero function.
LevelSetDecomposition level_set_decomposition(const L1Function& eta);

/// l1_gradient(eta) >= 2/(D-1) ||eta||_1, compared exactly, together with the
/// chain used to prove it: gradient(|eta|) <= gradient(eta); the level-set
/// identity; edge boundary >= vertex boundary on each F_j; and the tree ratio
/// |∂F_j| / |F_j| > 1/(D-1). Throws PreconditionError when diam(supp eta)
/// exceeds girth/2 or a degree lies outside [3, D].
CertificationReport verify_l1_poincare(const L1Function& eta, std::size_t D);

/// |∂_1 F| / |F|. The 1-neighbourhood of F is a tree, so the ratio exceeds
/// 1/(D-1); a violation throws InternalError. D defaults to the largest degree.
/// Throws PreconditionError unless diam(F) < girth/2 and min degree >= 3.
Rational tree_boundary_ratio(const Block& block, const PointSet& F, std::size_t D = 0);

/// Number of edges with exactly one endpoint in F.
std::size_t edge_boundary_size(const FiniteGraph& g, const PointSet& F);

}  // namespace aqicert
