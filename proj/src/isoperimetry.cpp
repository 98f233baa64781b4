#include "aqicert/isoperimetry.hpp"

#include <algorithm>
#include <map>

#include "aqicert/errors.hpp"

namespace aqicert {

namespace {

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Vertices outside F with a neighbour in F.
std::size_t vertex_boundary_size(const FiniteGraph& g, const PointSet& F) {
  std::vector<char> in(g.size(), 0), out(g.size(), 0);
  for (Point x : F) in.at(x) = 1;
  std::size_t count = 0;
  for (Point x : F)
    for (Point y : g.neighbours(x))
      if (!in[y] && !out[y]) {
        out[y] = 1;
        ++count;
      }
  return count;
}

void require_degrees(const FiniteGraph& g, std::size_t D) {
  if (g.min_degree() < 3 || g.max_degree() > D)
    throw PreconditionError("degrees lie in [" + std::to_string(g.min_degree()) + ", " +
                            std::to_string(g.max_degree()) + "], outside [3, " + std::to_string(D) + "]");
}

}  // namespace

L1Function::L1Function(Block b, std::vector<Rational> v) : block(std::move(b)), values(std::move(v)) {
  if (!block.is_graph()) throw InvalidArgument("an l1 function lives on a graph block");
  if (values.size() != block.size())
    throw InvalidArgument("function has " + std::to_string(values.size()) + " values for " +
                          std::to_string(block.size()) + " vertices");
}

PointSet L1Function::support() const {
  PointSet s;
  for (Point x = 0; x < values.size(); ++x)
    if (values[x] != 0) s.push_back(x);
  return s;
}

Rational L1Function::l1_norm() const {
  Rational t = 0;
  for (const auto& v : values) t += abs(v);
  return t;
}

L1Function L1Function::absolute() const {
  std::vector<Rational> v;
  v.reserve(values.size());
  for (const auto& q : values) v.push_back(abs(q));
  return L1Function(block, std::move(v));
}

Rational l1_gradient(const L1Function& eta) {
  Rational t = 0;
  for (const auto& [u, v] : eta.block.graph().edges()) t += abs(eta.values[u] - eta.values[v]);
  return 2 * t;
}

std::vector<Rational> LevelSetDecomposition::reconstruct(std::size_t n) const {
  std::vector<Rational> out(n, Rational(0));
  for (std::size_t j = 0; j < sets.size(); ++j) {
    const Rational h = coefficients[j] / static_cast<long>(sets[j].size());
    for (Point x : sets[j]) out.at(x) += h;
  }
  return out;
}

LevelSetDecomposition level_set_decomposition(const L1Function& eta) {
  std::map<Rational, int> levels;
  for (const auto& v : eta.values) {
    if (v < 0) throw InvalidArgument("level sets need a nonnegative function");
    if (v > 0) levels[v] = 0;
  }
  if (levels.empty()) throw InvalidArgument("level sets of the zero function");
  LevelSetDecomposition d;
  Rational prev = 0;
  for (const auto& [level, unused] : levels) {
    PointSet F;
    for (Point x = 0; x < eta.values.size(); ++x)
      if (eta.values[x] >= level) F.push_back(x);
    d.coefficients.push_back((level - prev) * static_cast<long>(F.size()));
    d.sets.push_back(std::move(F));
    prev = level;
  }
  return d;
}

std::size_t edge_boundary_size(const FiniteGraph& g, const PointSet& F) {
  std::vector<char> in(g.size(), 0);
  for (Point x : F) in.at(x) = 1;
  std::size_t count = 0;
  for (Point x : F)
    for (Point y : g.neighbours(x)) count += !in[y];
  return count;
}

Rational tree_boundary_ratio(const Block& block, const PointSet& F, std::size_t D) {
  const FiniteGraph& g = block.graph();
  if (F.empty()) throw InvalidArgument("boundary ratio of an empty set");
  if (g.min_degree() < 3) throw PreconditionError("minimum degree below 3");
  if (D == 0) D = g.max_degree();
  if (D < g.max_degree()) throw PreconditionError("degree bound below the largest degree");
  const Girth girth = block.girth();
  const Rational diam = diameter(block.space(), F);
  if (girth && diam * 2 >= static_cast<long>(*girth))
    throw PreconditionError("diam(F) = " + diam.str() + " is not below girth/2 = " +
                            std::to_string(*girth) + "/2");
  const Rational ratio(static_cast<long>(vertex_boundary_size(g, F)), static_cast<long>(F.size()));
  if (ratio <= Rational(1, static_cast<long>(D - 1)))
    throw InternalError("tree boundary ratio " + ratio.str() + " not above 1/(D-1)");
  return ratio;
}

CertificationReport verify_l1_poincare(const L1Function& eta, std::size_t D) {
  if (D < 3) throw PreconditionError("degree bound below 3");
  const FiniteGraph& g = eta.block.graph();
  require_degrees(g, D);
  const PointSet supp = eta.support();
  const Girth girth = eta.block.girth();
  if (!supp.empty() && girth) {
    const Rational diam = diameter(eta.block.space(), supp);
    if (diam * 2 > static_cast<long>(*girth))
      throw PreconditionError("diam(supp eta) = " + diam.str() + " exceeds girth/2 = " +
                              std::to_string(*girth) + "/2");
  }

  CertificationReport r;
  r.name = "l1_poincare";
  const Rational grad = l1_gradient(eta);
  const Rational norm = eta.l1_norm();
  const Rational eps(2, static_cast<long>(D - 1));
  const bool main = grad >= eps * norm;
  r.details["gradient"] = to_json(grad);
  r.details["l1_norm"] = to_json(norm);
  r.details["constant"] = to_json(eps);
  if (norm > 0) r.details["ratio"] = to_json(Rational(grad / norm));

  bool links = true;
  if (norm > 0) {
    const L1Function pos = eta.absolute();
    const Rational grad_abs = l1_gradient(pos);
    const bool reduction = grad_abs <= grad;
    const auto dec = level_set_decomposition(pos);
    Rational level_sum = 0, vertex_sum = 0;
    bool edge_vs_vertex = true, tree = true;
    for (std::size_t j = 0; j < dec.sets.size(); ++j) {
      const auto& F = dec.sets[j];
      const Rational w = dec.coefficients[j] / static_cast<long>(F.size());
      const auto eb = edge_boundary_size(g, F);
      const auto vb = vertex_boundary_size(g, F);
      level_sum += w * static_cast<long>(2 * eb);
      vertex_sum += 2 * w * static_cast<long>(vb);
      edge_vs_vertex = edge_vs_vertex && eb >= vb;
      tree = tree && Rational(static_cast<long>(vb), static_cast<long>(F.size())) >
                         Rational(1, static_cast<long>(D - 1));
    }
    const bool coarea = level_sum == grad_abs;
    const bool final_link = vertex_sum >= eps * norm;
    r.details["links"] = {{"absolute_value_reduction", reduction},
                          {"level_set_identity", coarea},
                          {"edge_vs_vertex_boundary", edge_vs_vertex && level_sum >= vertex_sum},
                          {"tree_ratio", tree},
                          {"sum_bound", final_link}};
    r.details["level_sets"] = dec.sets.size();
    links = reduction && coarea && edge_vs_vertex && tree && final_link;
  }
  r.details["links_hold"] = links;
  r.passed = main && links;
  r.message = main ? (links ? "gradient bound holds" : "gradient bound holds but a proof link fails")
                   : "gradient " + grad.str() + " below " + eps.str() + " * " + norm.str();
  return r;
}

}  // namespace aqicert
