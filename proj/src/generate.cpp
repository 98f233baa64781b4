#include "aqicert/generate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>

#include "aqicert/errors.hpp"

namespace aqicert {

namespace {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform(rng, i)]);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Short-closure scan shared by both strategies. A breadth-first search from
// `root` truncated at depth target/2 meets every cycle of length < target
// through the root's neighbourhood as a non-tree edge; each such edge adds
// (target - L)^2 + 1 to the penalty.

struct Scan {
  std::vector<std::int32_t> dist;
  std::vector<std::int64_t> via;  // arc id used to enter the vertex
  std::vector<std::size_t> parent;
  std::vector<std::uint32_t> seen;
  std::vector<std::size_t> queue;
  std::uint32_t stamp = 0;

  explicit Scan(std::size_t n) : dist(n), via(n), parent(n), seen(n, 0) { queue.reserve(n); }
};

// Neighbour access is abstracted so the lift can scan its cover implicitly.
// `nb(v, j, arc)` returns the j-th neighbour and an arc id with arc ^ 1 the
// reverse arc and arc >> 1 the underlying edge.
template <class Nb>
std::int64_t scan_root(Scan& s, std::size_t root, std::size_t degree_of_root_max, std::size_t target,
                       Nb&& nb, std::vector<std::size_t>* witness, std::size_t* witness_len) {
  ++s.stamp;
  s.queue.clear();
  s.queue.push_back(root);
  s.seen[root] = s.stamp;
  s.dist[root] = 0;
  s.via[root] = -1;
  s.parent[root] = root;
  std::int64_t pen = 0;
  for (std::size_t h = 0; h < s.queue.size(); ++h) {
    const std::size_t v = s.queue[h];
    if (2 * static_cast<std::size_t>(s.dist[v]) + 1 >= target) break;
    for (std::size_t j = 0; j < degree_of_root_max; ++j) {
      std::int64_t arc = 0;
      const std::size_t u = nb(v, j, arc);
      if (u == static_cast<std::size_t>(-1)) break;
      if (arc == s.via[v]) continue;
      if (s.seen[u] == s.stamp) {
        if ((arc ^ 1) == s.via[u]) continue;
        const std::size_t len = static_cast<std::size_t>(s.dist[u] + s.dist[v] + 1);
        if (len < target) {
          const auto gap = static_cast<std::int64_t>(target - len);
          pen += gap * gap + 1;
          if (witness && len < *witness_len) {
            *witness_len = len;
            witness->clear();
            witness->push_back(static_cast<std::size_t>(arc >> 1));
            for (std::size_t x = v; x != root; x = s.parent[x])
              witness->push_back(static_cast<std::size_t>(s.via[x] >> 1));
            for (std::size_t x = u; x != root; x = s.parent[x])
              witness->push_back(static_cast<std::size_t>(s.via[x] >> 1));
          }
        }
      } else {
        s.seen[u] = s.stamp;
        s.dist[u] = s.dist[v] + 1;
        s.via[u] = arc ^ 1;
        s.parent[u] = v;
        s.queue.push_back(u);
      }
    }
  }
  return pen;
}

std::size_t ceil_log(double base, double x) { return static_cast<std::size_t>(std::ceil(std::log(x) / std::log(base))); }

bool connected(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> q{0};
  seen[0] = 1;
  for (std::size_t h = 0; h < q.size(); ++h)
    for (auto u : adj[q[h]])
      if (!seen[u]) {
        seen[u] = 1;
        q.push_back(u);
      }
  return q.size() == n;
}

// ---------------------------------------------------------------------------
// Configuration model with double-edge swaps.

class Rewirer {
 public:
  Rewirer(std::size_t n, std::size_t D, std::size_t target, Rng& rng)
      : n_(n), D_(D), target_(target), rng_(rng), scan_(n), adj_(n) {}

  bool pair_up(std::size_t attempts) {
    for (std::size_t a = 0; a < attempts; ++a) {
      std::vector<std::size_t> stubs;
      for (std::size_t v = 0; v < n_; ++v)
        for (std::size_t d = 0; d < D_; ++d) stubs.push_back(v);
      shuffle(stubs, rng_);
      edges_.clear();
      index_.clear();
      for (auto& l : adj_) l.clear();
      bool ok = true;
      for (std::size_t i = 0; i + 1 < stubs.size() && ok; i += 2) {
        std::size_t u = stubs[i], v = stubs[i + 1];
        if (u == v || has_edge(u, v)) ok = false;
        else add_edge(u, v);
      }
      if (ok) return true;
    }
    return false;
  }

  bool improve(std::size_t moves) {
    std::int64_t pen = total_penalty();
    for (std::size_t it = 0; it < moves && pen > 0; ++it) {
      const std::size_t e = short_edge();
      const std::size_t f = uniform(rng_, edges_.size());
      if (e == f) continue;
      auto [a, b] = edges_[e];
      auto [c, d] = edges_[f];
      if (uniform(rng_, 2)) std::swap(c, d);
      if (a == c || a == d || b == c || b == d || has_edge(a, c) || has_edge(b, d)) continue;
      // (a,b), (c,d) -> (a,c), (d,b). Roots near the touched edges in either
      // graph are the only ones whose score can change.
      const std::array<std::size_t, 4> ends{a, b, c, d};
      auto region = near(ends);
      replace(e, a, c);
      replace(f, d, b);
      auto region2 = near(ends);
      region.insert(region.end(), region2.begin(), region2.end());
      std::sort(region.begin(), region.end());
      region.erase(std::unique(region.begin(), region.end()), region.end());
      const std::int64_t after = local_penalty(region);
      replace(e, a, b);
      replace(f, d, c);
      const std::int64_t before = local_penalty(region);
      if (after <= before) {
        replace(e, a, c);
        replace(f, d, b);
        pen += after - before;
      }
    }
    return pen == 0;
  }

  const std::vector<Edge>& edges() const { return edges_; }

 private:
  bool has_edge(std::size_t u, std::size_t v) const {
    return std::find(adj_[u].begin(), adj_[u].end(), v) != adj_[u].end();
  }
  void add_edge(std::size_t u, std::size_t v) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    edges_.emplace_back(u, v);
    index_[key(u, v)] = edges_.size() - 1;
  }
  // Edge e = (x, y) becomes (x, z).
  void replace(std::size_t e, std::size_t x, std::size_t z) {
    auto [p, q] = edges_[e];
    const std::size_t y = p == x ? q : p;
    std::replace(adj_[x].begin(), adj_[x].end(), y, z);
    std::replace(adj_[y].begin(), adj_[y].end(), x, static_cast<std::size_t>(-1));
    auto& ly = adj_[y];
    ly.erase(std::remove(ly.begin(), ly.end(), static_cast<std::size_t>(-1)), ly.end());
    adj_[z].push_back(x);
    edges_[e] = {x, z};
    index_.erase(key(x, y));
    index_[key(x, z)] = e;
  }

  std::size_t arc_id(std::size_t v, std::size_t u) {
    const std::size_t e = index_.at(key(v, u));
    return 2 * e + (v < u ? 0 : 1);
  }
  static std::uint64_t key(std::size_t p, std::size_t q) {
    if (p > q) std::swap(p, q);
    return (static_cast<std::uint64_t>(p) << 32) | q;
  }

  std::int64_t root_penalty(std::size_t r, std::vector<std::size_t>* w, std::size_t* wl) {
    auto nb = [&](std::size_t v, std::size_t j, std::int64_t& arc) -> std::size_t {
      if (j >= adj_[v].size()) return static_cast<std::size_t>(-1);
      const std::size_t u = adj_[v][j];
      arc = static_cast<std::int64_t>(arc_id(v, u));
      return u;
    };
    return scan_root(scan_, r, D_, target_, nb, w, wl);
  }

  std::int64_t total_penalty() {
    std::int64_t p = 0;
    for (std::size_t r = 0; r < n_; ++r) p += root_penalty(r, nullptr, nullptr);
    return p;
  }

  std::int64_t local_penalty(const std::vector<std::size_t>& roots) {
    std::int64_t p = 0;
    for (auto r : roots) p += root_penalty(r, nullptr, nullptr);
    return p;
  }

  std::vector<std::size_t> near(const std::array<std::size_t, 4>& ends) {
    const auto radius = static_cast<std::int32_t>(target_ / 2 + 1);
    std::vector<std::size_t> out;
    ++scan_.stamp;
    std::vector<std::size_t> q(ends.begin(), ends.end());
    for (auto v : q) {
      scan_.seen[v] = scan_.stamp;
      scan_.dist[v] = 0;
    }
    q.erase(std::unique(q.begin(), q.end()), q.end());
    for (std::size_t h = 0; h < q.size(); ++h) {
      const std::size_t v = q[h];
      out.push_back(v);
      if (scan_.dist[v] >= radius) continue;
      for (auto u : adj_[v])
        if (scan_.seen[u] != scan_.stamp) {
          scan_.seen[u] = scan_.stamp;
          scan_.dist[u] = scan_.dist[v] + 1;
          q.push_back(u);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // An edge on a shortest closure found from a random root onwards.
  std::size_t short_edge() {
    const std::size_t start = uniform(rng_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      std::vector<std::size_t> w;
      std::size_t wl = target_;
      root_penalty((start + i) % n_, &w, &wl);
      if (!w.empty()) return w[uniform(rng_, w.size())];
    }
    return uniform(rng_, edges_.size());
  }

  std::size_t n_, D_, target_;
  Rng& rng_;
  Scan scan_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

std::optional<FiniteGraph> try_configuration(std::size_t D, std::size_t target, std::size_t n,
                                             std::uint64_t seed, const GeneratorOptions& opts) {
  if ((n * D) % 2 != 0 || n <= D) return std::nullopt;
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    Rng rng(mix(seed, 100 + r));
    Rewirer w(n, D, target, rng);
    if (!w.pair_up(1000)) continue;
    if (!w.improve(opts.moves)) continue;
    if (!connected(n, w.edges())) continue;
    FiniteGraph g(n, w.edges());
    const Girth gg = girth(g);
    if (gg && *gg < target) throw InternalError("rewiring reported success below the girth target");
    return g;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Cyclic voltage lift of the Tutte-Coxeter graph (cubic, girth 8, order 30).
// The base Hamiltonian path carries voltage 0; the remaining 16 edges get
// voltages in Z_m chosen by hill climbing on the short-closure penalty. The
// lift is fibre-transitive, so one root per fibre suffices.

constexpr std::size_t kBaseOrder = 30;
constexpr std::array<int, 6> kBaseLcf{-13, -9, 7, -7, 9, 13};

struct BaseEdge {
  std::size_t a, b;
  std::size_t voltage;
  bool tree;
};

class Lifter {
 public:
  Lifter(std::size_t m, std::size_t target, Rng& rng)
      : k_(kBaseOrder), m_(m), target_(target), rng_(rng), scan_(kBaseOrder * m), inc_(kBaseOrder) {
    for (std::size_t v = 0; v < k_; ++v) {
      add((v + 1) % k_ == 0 ? 0 : v, (v + 1) % k_ == 0 ? v : v + 1, v + 1 < k_);
      const auto u = static_cast<std::size_t>(
          ((static_cast<long>(v) + kBaseLcf[v % kBaseLcf.size()]) % static_cast<long>(k_) +
           static_cast<long>(k_)) %
          static_cast<long>(k_));
      if (v < u) add(v, u, false);
    }
  }

  bool climb(std::size_t moves) {
    for (auto& e : edges_)
      if (!e.tree) e.voltage = uniform(rng_, m_);
    std::vector<std::size_t> witness;
    std::int64_t cur = penalty(&witness, -1);
    for (std::size_t it = 0; it < moves && cur > 0; ++it) {
      std::vector<std::size_t> cand;
      for (auto e : witness)
        if (!edges_[e].tree) cand.push_back(e);
      if (cand.empty()) return false;
      BaseEdge& e = edges_[cand[uniform(rng_, cand.size())]];
      std::int64_t best = -1;
      std::vector<std::size_t> ties;
      for (std::size_t t = 0; t < m_; ++t) {
        e.voltage = t;
        const std::int64_t p = penalty(nullptr, best);
        if (best < 0 || p < best) {
          best = p;
          ties.clear();
        }
        if (p == best) ties.push_back(t);
      }
      e.voltage = ties[uniform(rng_, ties.size())];
      cur = penalty(&witness, -1);
    }
    return cur == 0;
  }

  std::vector<Edge> lifted_edges() const {
    std::vector<Edge> out;
    for (const auto& e : edges_)
      for (std::size_t s = 0; s < m_; ++s)
        out.emplace_back(e.a + k_ * s, e.b + k_ * ((s + e.voltage) % m_));
    return out;
  }

 private:
  void add(std::size_t a, std::size_t b, bool tree) {
    edges_.push_back({a, b, 0, tree});
    const std::size_t id = edges_.size() - 1;
    inc_[a].push_back({id, true});
    inc_[b].push_back({id, false});
  }

  // Stops early once the running total exceeds `cutoff` (when cutoff >= 0).
  std::int64_t penalty(std::vector<std::size_t>* witness, std::int64_t cutoff) {
    auto nb = [&](std::size_t v, std::size_t j, std::int64_t& arc) -> std::size_t {
      const std::size_t bv = v % k_, s = v / k_;
      if (j >= inc_[bv].size()) return static_cast<std::size_t>(-1);
      const auto [id, forward] = inc_[bv][j];
      const BaseEdge& e = edges_[id];
      arc = static_cast<std::int64_t>(2 * id + (forward ? 1 : 0));
      const std::size_t other = forward ? e.b : e.a;
      const std::size_t shift = forward ? e.voltage : (m_ - e.voltage) % m_;
      return other + k_ * ((s + shift) % m_);
    };
    std::int64_t total = 0;
    std::size_t wl = target_;
    if (witness) witness->clear();
    for (std::size_t r = 0; r < k_; ++r) {
      total += scan_root(scan_, r, 3, target_, nb, witness, &wl);
      if (cutoff >= 0 && total > cutoff) return total;
    }
    return total;
  }

  std::size_t k_, m_, target_;
  Rng& rng_;
  Scan scan_;
  std::vector<BaseEdge> edges_;
  std::vector<std::vector<std::pair<std::size_t, bool>>> inc_;
};

std::optional<FiniteGraph> try_lift(std::size_t D, std::size_t target, std::size_t n,
                                    std::uint64_t seed, const GeneratorOptions& opts) {
  if (D != 3 || n % kBaseOrder != 0 || n == 0) return std::nullopt;
  const std::size_t m = n / kBaseOrder;
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    Rng rng(mix(seed, 200 + r));
    Lifter lift(m, target, rng);
    if (!lift.climb(opts.moves)) continue;
    auto edges = lift.lifted_edges();
    if (!connected(n, edges)) continue;
    FiniteGraph g(n, std::move(edges));
    const Girth gg = girth(g);
    if (gg && *gg < target) throw InternalError("lift reported success below the girth target");
    return g;
  }
  return std::nullopt;
}

}  // namespace

std::size_t moore_bound(std::size_t D, std::size_t g) {
  if (D < 2 || g < 3) throw InvalidArgument("moore bound needs D >= 2 and g >= 3");
  if (D == 2) return g;
  std::size_t total = 0, layer = 1;
  if (g % 2 == 1) {
    const std::size_t d = (g - 1) / 2;
    total = 1;
    layer = D;
    for (std::size_t i = 1; i <= d; ++i) {
      total += layer;
      layer *= D - 1;
    }
  } else {
    const std::size_t d = g / 2;
    for (std::size_t i = 0; i < d; ++i) {
      total += 2 * layer;
      layer *= D - 1;
    }
  }
  return total;
}

bool girth_target_feasible(std::size_t D, std::size_t g, std::size_t size) {
  if (D < 3) return false;
  if (g <= 3) return size >= D + 1;
  if (size < moore_bound(D, g)) return false;
  const double ceiling = 2.0 * std::log(static_cast<double>(size)) / std::log(static_cast<double>(D - 1)) + 2.0;
  return static_cast<double>(g) <= ceiling;
}

FiniteGraph generate_large_girth_graph(std::size_t D, std::size_t target, std::size_t size,
                                       std::uint64_t seed, const GeneratorOptions& opts) {
  if (D < 3) throw InvalidArgument("degree bound must be at least 3");
  if ((size * D) % 2 != 0)
    throw GenerationFailure("no " + std::to_string(D) + "-regular graph on " + std::to_string(size) +
                            " vertices (odd degree sum)");
  if (!girth_target_feasible(D, target, size))
    throw GenerationFailure("girth " + std::to_string(target) + " is infeasible for a " +
                            std::to_string(D) + "-regular graph on " + std::to_string(size) +
                            " vertices (Moore bound " + std::to_string(target >= 3 ? moore_bound(D, target) : 0) + ")");
  if (target <= 3 && size == D + 1) return complete_graph(size);

  std::optional<FiniteGraph> g;
  const bool lift_ok = D == 3 && size % kBaseOrder == 0;
  switch (opts.strategy) {
    case GeneratorStrategy::configuration:
      g = try_configuration(D, target, size, seed, opts);
      break;
    case GeneratorStrategy::cyclic_lift:
      if (!lift_ok)
        throw GenerationFailure("cyclic lift needs D = 3 and a size divisible by " +
                                std::to_string(kBaseOrder));
      g = try_lift(D, target, size, seed, opts);
      break;
    case GeneratorStrategy::automatic:
      // Rewiring stalls once the target passes about log2(n); those go to the lift.
      if (!lift_ok || target <= ceil_log(2.0, static_cast<double>(size)))
        g = try_configuration(D, target, size, seed, opts);
      if (!g && lift_ok) g = try_lift(D, target, size, seed, opts);
      break;
  }
  if (!g)
    throw GenerationFailure("no girth-" + std::to_string(target) + " graph on " +
                            std::to_string(size) + " vertices within the search budget");
  return std::move(*g);
}

SpaceFamily generate_large_girth_family(std::size_t D, const std::vector<std::size_t>& targets,
                                        const std::vector<std::size_t>& sizes, std::uint64_t seed,
                                        const GeneratorOptions& opts) {
  if (targets.size() != sizes.size())
    throw InvalidArgument("girth targets and sizes differ in length");
  if (targets.empty()) throw InvalidArgument("empty generator request");
  for (std::size_t i = 1; i < targets.size(); ++i)
    if (targets[i] <= targets[i - 1]) throw InvalidArgument("girth targets must increase");
  std::vector<FiniteGraph> graphs;
  for (std::size_t i = 0; i < targets.size(); ++i)
    graphs.push_back(generate_large_girth_graph(D, targets[i], sizes[i], mix(seed, i), opts));
  return SpaceFamily::from_graphs(std::move(graphs), D);
}

std::vector<std::size_t> lift_base_orders() { return {kBaseOrder}; }

}  // namespace aqicert
