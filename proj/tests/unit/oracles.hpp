#pragma once

// Independent reference computations for the tests. Nothing here calls into the
// library's algorithms beyond the plain data accessors.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "aqicert/embedding.hpp"
#include "aqicert/family.hpp"
#include "aqicert/graph.hpp"
#include "aqicert/rational.hpp"

namespace oracle {

using aqicert::Edge;
using aqicert::Point;
using aqicert::Rational;

using Adjacency = std::vector<std::vector<int>>;

inline Adjacency adjacency(const aqicert::FiniteGraph& g) {
  Adjacency a(g.size(), std::vector<int>(g.size(), 0));
  for (const auto& [u, v] : g.edges()) a[u][v] = a[v][u] = 1;
  return a;
}

inline std::vector<std::vector<long>> floyd(const aqicert::FiniteGraph& g) {
  const long inf = std::numeric_limits<long>::max() / 4;
  const std::size_t n = g.size();
  std::vector<std::vector<long>> d(n, std::vector<long>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

/// Shortest simple cycle by depth-first enumeration from each smallest vertex.
inline std::optional<std::size_t> girth_by_enumeration(const aqicert::FiniteGraph& g) {
  const std::size_t n = g.size();
  const Adjacency a = adjacency(g);
  std::optional<std::size_t> best;
  std::vector<char> on(n, 0);
  std::function<void(Point, Point, std::size_t)> dfs = [&](Point start, Point v, std::size_t len) {
    for (Point w = 0; w < n; ++w) {
      if (!a[v][w]) continue;
      if (w == start && len >= 3) {
        if (!best || len < *best) best = len;
        continue;
      }
      if (w <= start || on[w]) continue;
      on[w] = 1;
      dfs(start, w, len + 1);
      on[w] = 0;
    }
  };
  for (Point s = 0; s < n; ++s) {
    on[s] = 1;
    dfs(s, s, 1);
    on[s] = 0;
  }
  return best;
}

/// Connected random graph: a random tree plus extra random edges.
inline aqicert::FiniteGraph random_connected_graph(std::size_t n, std::size_t extra, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
  for (Point v = 1; v < n; ++v) {
    Point u = rng() % v;
    edges.emplace_back(u, v);
    used[u][v] = used[v][u] = 1;
  }
  for (std::size_t t = 0; t < extra; ++t) {
    Point u = rng() % n, v = rng() % n;
    if (u == v || used[u][v]) continue;
    used[u][v] = used[v][u] = 1;
    edges.emplace_back(u, v);
  }
  return aqicert::FiniteGraph(n, edges);
}

inline aqicert::FiniteGraph heawood_graph() {
  const std::int64_t p[] = {5, -5};
  return aqicert::lcf_graph(14, p);
}

/// Every subset of {0..n-1} as a bitmask, n <= 20.
template <class F>
void for_each_subset(std::size_t n, F f) {
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    aqicert::PointSet s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s.push_back(i);
    f(s);
  }
}

inline Rational diam(const aqicert::FiniteMetricSpace& s, const aqicert::PointSet& F) {
  Rational best = 0;
  for (Point x : F)
    for (Point y : F) best = std::max(best, s.distance(x, y));
  return best;
}

/// Scale-R Laplacian assembled from distances, dense.
inline Eigen::MatrixXd laplacian(const aqicert::FiniteMetricSpace& s, const Rational& R) {
  const auto n = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) {
      const Rational d = s.distance(static_cast<Point>(x), static_cast<Point>(y));
      if (x != y && d <= R) {
        L(x, y) = -1;
        L(x, x) += 1;
      }
    }
  return L;
}

inline double min_eigenvalue(const Eigen::MatrixXd& m, const aqicert::PointSet& F) {
  Eigen::MatrixXd sub(F.size(), F.size());
  for (std::size_t i = 0; i < F.size(); ++i)
    for (std::size_t j = 0; j < F.size(); ++j)
      sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(static_cast<Eigen::Index>(F[i]), static_cast<Eigen::Index>(F[j]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// min over subsets F with diam F <= S of lambda_min(m restricted to F): the
/// exact localized Rayleigh minimum.
inline double exhaustive_localized_min(const aqicert::FiniteMetricSpace& s, const Eigen::MatrixXd& m,
                                       const Rational& S) {
  double best = std::numeric_limits<double>::infinity();
  for_each_subset(s.size(), [&](const aqicert::PointSet& F) {
    if (diam(s, F) <= S) best = std::min(best, min_eigenvalue(m, F));
  });
  return best;
}

/// { y : 0 < d(y, F) <= R } by direct scan.
inline aqicert::PointSet boundary(const aqicert::FiniteMetricSpace& s, const aqicert::PointSet& F,
                                  const Rational& R) {
  aqicert::PointSet out;
  for (Point y = 0; y < s.size(); ++y) {
    if (std::find(F.begin(), F.end(), y) != F.end()) continue;
    for (Point x : F)
      if (s.distance(x, y) <= R) {
        out.push_back(y);
        break;
      }
  }
  return out;
}

/// Whether every F in Y_i (i > i_S) with diam F < S has
/// mu(boundary_k F) > mu(F) / (D - 1), with mu the pushforward of counting
/// measure, over all subsets.
inline bool exhaustive_mu_holds(const aqicert::AqiEmbedding& e, std::size_t i, const Rational& S,
                                std::size_t D) {
  const auto& Y = e.codomain.block(i).space();
  std::vector<long> count(Y.size(), 0);
  for (Point y : e.maps[i]) ++count[y];
  const long n = static_cast<long>(e.maps[i].size());
  bool ok = true;
  for_each_subset(Y.size(), [&](const aqicert::PointSet& F) {
    if (!ok || !(diam(Y, F) < S)) return;
    Rational mf = 0, mb = 0;
    for (Point y : F) mf += Rational(count[y], n);
    for (Point y : boundary(Y, F, e.k)) mb += Rational(count[y], n);
    if (!(mb > mf / static_cast<long>(D - 1))) ok = false;
  });
  return ok;
}

}  // namespace oracle
