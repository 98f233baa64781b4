#include "aqicert/embedding.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <unordered_map>

#include "aqicert/errors.hpp"

namespace aqicert {

namespace {

std::string pair_text(std::size_t i, Point x, Point y) {
  return "block " + std::to_string(i) + ", points (" + std::to_string(x) + "," + std::to_string(y) + ")";
}

// Integer window [lo, hi] for the scaled codomain distance, per scaled domain
// distance; both inequalities become two integer comparisons.
class Bounds {
 public:
  Bounds(const AqiEmbedding& e, std::size_t i)
      : a_(e.a), k_(e.k), b_(e.b[i]),
        sx_(e.domain.block(i).space().scale()),
        sy_(e.codomain.block(i).space().scale()) {}

  std::pair<std::int64_t, std::int64_t> operator()(std::int32_t dx) {
    if (dx >= 0 && dx < 256) {
      if (!small_set_[dx]) {
        small_[dx] = compute(dx);
        small_set_[dx] = true;
      }
      return small_[dx];
    }
    auto it = cache_.find(dx);
    if (it != cache_.end()) return it->second;
    return cache_[dx] = compute(dx);
  }

 private:
  std::pair<std::int64_t, std::int64_t> compute(std::int32_t dx) const {
    const Rational d(dx, sx_);
    const Integer lo = aqicert::ceil((a_ * d - b_) * sy_);
    const Integer hi = aqicert::floor(k_ * d * sy_);
    auto clamp = [](const Integer& z) {
      constexpr std::int64_t big = std::numeric_limits<std::int64_t>::max() / 2;
      if (z > big) return big;
      if (z < -big) return -big;
      return z.convert_to<std::int64_t>();
    };
    return {clamp(lo), clamp(hi)};
  }

  Rational a_, k_, b_;
  std::int64_t sx_, sy_;
  std::array<std::pair<std::int64_t, std::int64_t>, 256> small_{};
  std::array<bool, 256> small_set_{};
  std::unordered_map<std::int32_t, std::pair<std::int64_t, std::int64_t>> cache_;
};

}  // namespace

void AqiEmbedding::check_shape() const {
  if (domain.size() != codomain.size() || maps.size() != domain.size() || b.size() != domain.size())
    throw InvalidArgument("embedding block counts disagree: domain " + std::to_string(domain.size()) +
                          ", codomain " + std::to_string(codomain.size()) + ", maps " +
                          std::to_string(maps.size()) + ", b " + std::to_string(b.size()));
  if (a <= 0 || k <= 0) throw InvalidArgument("constants a and k must be positive");
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (b[i] < 0) throw InvalidArgument("b_" + std::to_string(i) + " is negative");
    if (maps[i].size() != domain.block(i).size())
      throw InvalidArgument("map " + std::to_string(i) + " is not total on its block");
    for (Point y : maps[i])
      if (y >= codomain.block(i).size())
        throw InvalidArgument("map " + std::to_string(i) + " leaves its codomain block");
  }
}

bool AqiEmbedding::surjective(std::size_t i) const {
  std::vector<char> hit(codomain.block(i).size(), 0);
  for (Point y : maps.at(i)) hit.at(y) = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

bool AqiEmbedding::surjective() const {
  for (std::size_t i = 0; i < maps.size(); ++i)
    if (!surjective(i)) return false;
  return true;
}

std::vector<PointSet> AqiEmbedding::fibres(std::size_t i) const {
  std::vector<PointSet> out(codomain.block(i).size());
  const auto& m = maps.at(i);
  for (Point x = 0; x < m.size(); ++x) out.at(m[x]).push_back(x);
  return out;
}

CertificationReport verify_aqi(const AqiEmbedding& e) {
  e.check_shape();
  CertificationReport r;
  r.name = "verify_aqi";
  r.details["a"] = to_json(e.a);
  r.details["k"] = to_json(e.k);
  Json bs = Json::array();
  for (const auto& b : e.b) bs.push_back(to_json(b));
  r.details["b"] = bs;

  bool inequalities = true;
  for (std::size_t i = 0; i < e.size() && inequalities; ++i) {
    const auto& X = e.domain.block(i).space();
    const auto& Y = e.codomain.block(i).space();
    const auto& phi = e.maps[i];
    Bounds bounds(e, i);
    for (Point x = 0; x < X.size() && inequalities; ++x) {
      const auto dx_row = X.row(x);
      const auto dy_row = Y.row(phi[x]);
      for (Point y = x + 1; y < X.size(); ++y) {
        const auto dx = dx_row[y];
        const std::int64_t dy = dy_row[phi[y]];
        const auto [lo, hi] = bounds(dx);
        if (dy < lo || dy > hi) {
          inequalities = false;
          r.details["witness"] = {{"block", i},
                                  {"x", x},
                                  {"y", y},
                                  {"d_domain", to_json(X.distance(x, y))},
                                  {"d_codomain", to_json(Y.distance(phi[x], phi[y]))},
                                  {"violated", dy < lo ? "lower" : "upper"}};
          r.message = std::string(dy < lo ? "lower" : "upper") + " inequality fails at " +
                      pair_text(i, x, y);
          break;
        }
      }
    }
  }
  r.details["inequalities_hold"] = inequalities;

  // Smallness proxy for b_i relative to girth.
  bool proxy = true;
  std::string proxy_note;
  Json ratios = Json::array();
  bool have_girth = e.size() >= 2;
  for (std::size_t i = 0; i < e.size() && have_girth; ++i)
    have_girth = e.domain.block(i).is_graph();
  if (have_girth) {
    std::vector<Rational> q;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const Girth g = e.domain.block(i).girth();
      q.push_back(g ? Rational(e.b[i] / static_cast<long>(*g)) : Rational(0));
      ratios.push_back(to_json(q.back()));
    }
    for (std::size_t i = 1; i < q.size() && proxy; ++i)
      if (q[i] > q[i - 1]) {
        proxy = false;
        proxy_note = "b_i/girth increases at block " + std::to_string(i);
      }
    if (proxy && q.back() * 2 > q.front()) {
      proxy = false;
      proxy_note = "final b_i/girth ratio exceeds half the initial ratio";
    }
  } else {
    proxy_note = e.size() < 2 ? "vacuous: fewer than two blocks" : "vacuous: no girth data";
  }
  r.details["b_girth_ratios"] = ratios;
  r.details["proxy_holds"] = proxy;
  if (!proxy_note.empty()) r.details["proxy_note"] = proxy_note;

  r.passed = inequalities && proxy;
  if (r.passed) r.message = "both inequalities hold on every pair";
  else if (inequalities) r.message = "smallness proxy fails: " + proxy_note;
  return r;
}

AqiEmbedding surjectivize(const AqiEmbedding& e) {
  e.check_shape();
  AqiEmbedding out;
  out.domain = e.domain;
  out.a = e.a;
  out.k = e.k;
  out.b = e.b;
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.surjective(i)) {
      blocks.push_back(e.codomain.block(i));
      out.maps.push_back(e.maps[i]);
      continue;
    }
    PointSet image = e.maps[i];
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    std::vector<Point> relabel(e.codomain.block(i).size(), 0);
    for (std::size_t j = 0; j < image.size(); ++j) relabel[image[j]] = j;
    std::vector<Point> m;
    m.reserve(e.maps[i].size());
    for (Point y : e.maps[i]) m.push_back(relabel[y]);
    blocks.emplace_back(e.codomain.block(i).space().induced(image));
    out.maps.push_back(std::move(m));
  }
  out.codomain = SpaceFamily(std::move(blocks), e.codomain.degree_bound());
  return out;
}

Rational preimage_diameter_bound(const AqiEmbedding& e, std::size_t i, const PointSet& F) {
  if (i >= e.size()) throw InvalidArgument("block index out of range");
  if (F.empty()) throw InvalidArgument("preimage bound of an empty set");
  if (!e.surjective(i)) throw PreconditionError("block " + std::to_string(i) + " is not surjective");
  const auto& Y = e.codomain.block(i).space();
  const Rational bound = (diameter(Y, F) + e.b[i]) / e.a;
  std::vector<char> in(Y.size(), 0);
  for (Point y : F) in.at(y) = 1;
  PointSet pre;
  for (Point x = 0; x < e.maps[i].size(); ++x)
    if (in[e.maps[i][x]]) pre.push_back(x);
  const Rational actual = diameter(e.domain.block(i).space(), pre);
  if (actual > bound)
    throw InternalError("preimage diameter " + actual.str() + " exceeds " + bound.str() +
                        " in block " + std::to_string(i));
  return bound;
}

std::size_t threshold_index(const AqiEmbedding& e, const Rational& S) {
  if (e.size() == 0) throw NoSuchIndex("empty family");
  auto holds = [&](std::size_t i) {
    const Block& blk = e.domain.block(i);
    if (!blk.is_graph()) throw PreconditionError("threshold index needs girth data on every block");
    const Girth g = blk.girth();
    if (!g) return true;
    return (S + e.b[i]) / e.a <= Rational(static_cast<long>(*g), 2);
  };
  std::size_t i = e.size();
  while (i > 0 && holds(i - 1)) --i;
  if (i == e.size())
    throw NoSuchIndex("(S + b_i)/a exceeds girth/2 on the last block for S = " + S.str());
  return i;
}

AqiEmbedding net_quotient(const SpaceFamily& f, const std::vector<Rational>& radii) {
  if (radii.size() != f.size()) throw InvalidArgument("one radius per block required");
  AqiEmbedding e;
  e.domain = f;
  e.a = 1;
  Rational rmax = 0;
  std::vector<Block> nets;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Rational& r = radii[i];
    if (r < 0) throw InvalidArgument("net radius must be nonnegative");
    rmax = std::max(rmax, r);
    const auto& X = f.block(i).space();
    const auto limit = X.scaled_at_most(r);
    const std::size_t n = X.size();
    // Greedy net in index order: a point joins when nothing in the net is within r.
    std::vector<char> covered(n, 0);
    PointSet net;
    for (Point x = 0; x < n; ++x) {
      if (covered[x]) continue;
      net.push_back(x);
      const auto row = X.row(x);
      for (Point y = 0; y < n; ++y)
        if (row[y] <= limit) covered[y] = 1;
    }
    std::vector<Point> phi(n);
    for (Point x = 0; x < n; ++x) {
      const auto row = X.row(x);
      std::size_t best = 0;
      std::int32_t best_d = std::numeric_limits<std::int32_t>::max();
      for (std::size_t j = 0; j < net.size(); ++j)
        if (row[net[j]] < best_d) {
          best_d = row[net[j]];
          best = j;
        }
      phi[x] = best;
    }
    nets.emplace_back(X.induced(net));
    e.maps.push_back(std::move(phi));
    e.b.push_back(2 * r);
  }
  e.k = 1 + 2 * rmax;
  e.codomain = SpaceFamily(std::move(nets));
  return e;
}

AqiEmbedding identity_embedding(const SpaceFamily& f) {
  AqiEmbedding e;
  e.domain = f;
  e.codomain = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<Point> m(f.block(i).size());
    for (Point x = 0; x < m.size(); ++x) m[x] = x;
    e.maps.push_back(std::move(m));
    e.b.push_back(0);
  }
  return e;
}

AqiEmbedding infer_constants(AqiEmbedding e, const Rational& a) {
  if (a <= 0) throw InvalidArgument("a must be positive");
  e.a = a;
  if (e.b.size() != e.size()) e.b.assign(e.size(), Rational(0));
  e.check_shape();
  Rational k = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& X = e.domain.block(i).space();
    const auto& Y = e.codomain.block(i).space();
    Rational b = 0;
    for (Point x = 0; x < X.size(); ++x)
      for (Point y = x + 1; y < X.size(); ++y) {
        const Rational dx = X.distance(x, y), dy = Y.distance(e.maps[i][x], e.maps[i][y]);
        k = std::max(k, Rational(dy / dx));
        b = std::max(b, Rational(a * dx - dy));
      }
    e.b[i] = b;
  }
  e.k = k > 0 ? k : Rational(1);
  return e;
}

}  // namespace aqicert
