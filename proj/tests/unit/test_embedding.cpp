#include <gtest/gtest.h>

#include <random>

#include "aqicert/embedding.hpp"
#include "aqicert/errors.hpp"
#include "aqicert/io.hpp"
#include "oracles.hpp"

using namespace aqicert;

namespace {

// Brute-force AQI inequalities over every pair.
bool inequalities_hold(const AqiEmbedding& e) {
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& X = e.domain.block(i).space();
    const auto& Y = e.codomain.block(i).space();
    for (Point x = 0; x < X.size(); ++x)
      for (Point y = 0; y < X.size(); ++y) {
        const Rational dx = X.distance(x, y), dy = Y.distance(e.maps[i][x], e.maps[i][y]);
        if (dy < e.a * dx - e.b[i] || dy > e.k * dx) return false;
      }
  }
  return true;
}

SpaceFamily small_family() {
  return SpaceFamily::from_graphs({complete_graph(4), petersen_graph(), oracle::heawood_graph()}, 3);
}

}  // namespace

TEST(Embedding, PetersenNetQuotient) {
  auto f = SpaceFamily::from_graphs({petersen_graph()}, 3);
  auto e = net_quotient(f, {Rational(1)});
  EXPECT_LE(e.codomain.block(0).size(), 4u);
  EXPECT_EQ(e.a, Rational(1));
  EXPECT_EQ(e.k, Rational(3));
  EXPECT_EQ(e.b[0], Rational(2));
  auto r = verify_aqi(e);
  EXPECT_TRUE(r.passed) << r.message;
  EXPECT_TRUE(inequalities_hold(e));
}

TEST(Embedding, IdentityAtRadiusZero) {
  auto f = small_family();
  auto e = net_quotient(f, {Rational(0), Rational(0), Rational(0)});
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_EQ(e.codomain.block(i).size(), f.block(i).size());
    for (Point x = 0; x < f.block(i).size(); ++x) EXPECT_EQ(e.maps[i][x], x);
  }
  EXPECT_TRUE(verify_aqi(identity_embedding(f)).passed);
}

TEST(Embedding, SinglePointCodomainFailsProxy) {
  auto f = small_family();
  std::vector<Rational> radii;
  for (const auto& b : f.blocks()) radii.push_back(b.space().diameter());
  auto e = net_quotient(f, radii);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(e.codomain.block(i).size(), 1u);
  auto r = verify_aqi(e);
  EXPECT_TRUE(r.details["inequalities_hold"].get<bool>());
  EXPECT_FALSE(r.details["proxy_holds"].get<bool>());
  EXPECT_FALSE(r.passed);
}

TEST(Embedding, NetQuotientAgreesWithBruteForce) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    auto g = oracle::random_connected_graph(5 + rng() % 30, rng() % 12, rng);
    auto f = SpaceFamily::from_graphs({g});
    const Rational r(static_cast<long>(rng() % 3));
    auto e = net_quotient(f, {r});
    EXPECT_TRUE(inequalities_hold(e));
    EXPECT_TRUE(verify_aqi(e).details["inequalities_hold"].get<bool>());
    const auto& X = f.block(0).space();
    const auto& Y = e.codomain.block(0).space();
    // Nearest net point, lowest index on ties; the codomain is the induced metric.
    std::vector<Point> net;
    for (Point x = 0; x < X.size(); ++x) {
      bool covered = false;
      for (Point c : net) covered = covered || X.distance(x, c) <= r;
      if (!covered) net.push_back(x);
    }
    ASSERT_EQ(net.size(), Y.size());
    for (Point x = 0; x < X.size(); ++x) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < net.size(); ++j)
        if (X.distance(x, net[j]) < X.distance(x, net[best])) best = j;
      EXPECT_EQ(e.maps[0][x], best);
    }
    for (std::size_t a = 0; a < net.size(); ++a)
      for (std::size_t b = 0; b < net.size(); ++b) EXPECT_EQ(Y.distance(a, b), X.distance(net[a], net[b]));
  }
}

TEST(Embedding, MonotoneInConstants) {
  auto f = small_family();
  auto e = net_quotient(f, {Rational(1), Rational(1), Rational(1)});
  ASSERT_TRUE(verify_aqi(e).details["inequalities_hold"].get<bool>());
  auto looser = e;
  looser.a = Rational(1, 2);
  looser.k = 5;
  for (auto& b : looser.b) b += 1;
  EXPECT_TRUE(verify_aqi(looser).details["inequalities_hold"].get<bool>());
  auto tighter = e;
  tighter.k = 1;
  EXPECT_FALSE(verify_aqi(tighter).details["inequalities_hold"].get<bool>());
}

TEST(Embedding, NonLipschitzRejectedWithWitness) {
  auto f = SpaceFamily::from_graphs({petersen_graph()}, 3);
  auto e = identity_embedding(f);
  std::swap(e.maps[0][0], e.maps[0][7]);
  auto r = verify_aqi(e);
  ASSERT_FALSE(r.passed);
  ASSERT_TRUE(r.details.contains("witness"));
  const auto& w = r.details["witness"];
  const Point x = w["x"], y = w["y"];
  const auto& X = f.block(0).space();
  const Rational dy = e.codomain.block(0).space().distance(e.maps[0][x], e.maps[0][y]);
  EXPECT_TRUE(dy > e.k * X.distance(x, y) || dy < e.a * X.distance(x, y) - e.b[0]);
}

TEST(Embedding, SurjectivizeIsIdempotent) {
  auto f = SpaceFamily::from_graphs({petersen_graph()}, 3);
  AqiEmbedding e = identity_embedding(f);
  for (auto& y : e.maps[0]) y = y % 5;
  e.k = 10;
  e.b[0] = 10;
  auto s1 = surjectivize(e);
  auto s2 = surjectivize(s1);
  EXPECT_TRUE(s1.surjective());
  EXPECT_EQ(s1.maps, s2.maps);
  EXPECT_EQ(s1.codomain.block(0).size(), 5u);
  EXPECT_EQ(format_metric(s1.codomain.block(0).space()), format_metric(s2.codomain.block(0).space()));
}

TEST(Embedding, PreimageDiameterBound) {
  auto f = small_family();
  auto e = net_quotient(f, {Rational(1), Rational(1), Rational(1)});
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& Y = e.codomain.block(i).space();
    ASSERT_LE(Y.size(), 20u);
    const auto fib = e.fibres(i);
    oracle::for_each_subset(Y.size(), [&](const PointSet& F) {
      PointSet pre;
      for (Point y : F) pre.insert(pre.end(), fib[y].begin(), fib[y].end());
      std::sort(pre.begin(), pre.end());
      const Rational bound = preimage_diameter_bound(e, i, F);
      EXPECT_EQ(bound, (oracle::diam(Y, F) + e.b[i]) / e.a);
      EXPECT_LE(oracle::diam(f.block(i).space(), pre), bound);
    });
  }
  EXPECT_THROW(preimage_diameter_bound(e, 0, {}), InvalidArgument);
}

TEST(Embedding, ThresholdIndex) {
  auto f = small_family();
  auto e = identity_embedding(f);
  // Girths 3, 5, 6: S <= girth/2 needs S <= 1.5, 2.5, 3.
  EXPECT_EQ(threshold_index(e, Rational(1)), 0u);
  EXPECT_EQ(threshold_index(e, Rational(2)), 1u);
  EXPECT_EQ(threshold_index(e, Rational(3)), 2u);
  EXPECT_THROW(threshold_index(e, Rational(4)), NoSuchIndex);
  auto m = identity_embedding(SpaceFamily({Block(FiniteMetricSpace::from_graph(petersen_graph()))}));
  EXPECT_THROW(threshold_index(m, Rational(1)), PreconditionError);
}

TEST(Embedding, FileRoundTrip) {
  auto f = small_family();
  auto e = net_quotient(f, {Rational(1), Rational(1), Rational(1)});
  auto g = parse_embedding(format_embedding(e), f, e.codomain);
  EXPECT_EQ(g.maps, e.maps);
  EXPECT_EQ(g.k, e.k);
  EXPECT_EQ(g.b, e.b);
  EXPECT_THROW(parse_embedding("0 1 1 0\n0 -> 0\n", f, f), ParseError);
  EXPECT_THROW(parse_embedding("0 1 1 0\n0 -> 99\n", f, f), ParseError);
}

TEST(Embedding, InferConstants) {
  auto f = SpaceFamily::from_graphs({petersen_graph()}, 3);
  auto e = net_quotient(f, {Rational(1)});
  auto fit = infer_constants(e);
  EXPECT_LE(fit.k, e.k);
  EXPECT_LE(fit.b[0], e.b[0]);
  EXPECT_TRUE(inequalities_hold(fit));
}
