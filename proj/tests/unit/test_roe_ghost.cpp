#include <gtest/gtest.h>

#include <random>

#include "aqicert/errors.hpp"
#include "aqicert/generate.hpp"
#include "aqicert/roe_ghost.hpp"
#include "oracles.hpp"

using namespace aqicert;

namespace {

AqiEmbedding sample_embedding() {
  auto f = generate_large_girth_family(3, {5, 6, 8}, {10, 14, 60}, 3);
  return net_quotient(f, {Rational(1), Rational(1), Rational(1)});
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = N(rng);
  return v;
}

// f(T) through a full dense eigendecomposition.
Eigen::MatrixXd dense_function(const SparseMatrix& T, double c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(T)};
  Eigen::VectorXd f = es.eigenvalues().unaryExpr([c](double t) { return std::max(0.0, 1 - 2 * t / c); });
  return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

TEST(Compression, ThetaIsAnIsometry) {
  auto e = sample_embedding();
  auto th = compression_isometry(e);
  std::mt19937_64 rng(1);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const SparseMatrix& t = th.blocks[i];
    Eigen::MatrixXd g = Eigen::MatrixXd(SparseMatrix(t.transpose()) * t);
    EXPECT_LE((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff(), 1e-12);
    for (int k = 0; k < 10; ++k) {
      auto f = random_vector(t.cols(), rng);
      EXPECT_NEAR((t * f).norm(), f.norm(), 1e-12 * f.norm());
    }
  }
  auto bad = e;
  bad.maps[2][0] = bad.maps[2][1];
  auto fib = bad.fibres(2);
  if (std::any_of(fib.begin(), fib.end(), [](const PointSet& s) { return s.empty(); }))
    EXPECT_THROW(compression_isometry(bad), PreconditionError);
}

TEST(Compression, PropagationKernelAndIdentity) {
  auto e = sample_embedding();
  auto cl = compressed_laplacian(e);
  std::mt19937_64 rng(2);
  EXPECT_EQ(cl.D.propagation, 2 * e.k);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& Y = e.codomain.block(i).space();
    const Eigen::MatrixXd D = Eigen::MatrixXd(cl.D.blocks[i]);
    Rational prop = 0;
    for (Eigen::Index x = 0; x < D.rows(); ++x)
      for (Eigen::Index y = 0; y < D.cols(); ++y)
        if (D(x, y) != 0) prop = std::max(prop, Y.distance(static_cast<Point>(x), static_cast<Point>(y)));
    EXPECT_EQ(prop, cl.measured[i]);
    EXPECT_LE(prop, 2 * e.k);
    EXPECT_LE((D * cl.kernel[i]).norm(), 1e-10 * cl.kernel[i].norm());
    const auto L = oracle::laplacian(e.domain.block(i).space(), 1);
    const Eigen::MatrixXd th = Eigen::MatrixXd(cl.theta.blocks[i]);
    for (int k = 0; k < 10; ++k) {
      auto f = random_vector(D.rows(), rng);
      const Eigen::VectorXd g = th * f;
      EXPECT_NEAR(f.dot(D * f), g.dot(L * g), 1e-10 * std::max(1.0, std::abs(g.dot(L * g))));
    }
  }
}

TEST(Compression, SupportEstimate) {
  auto e = sample_embedding();
  auto th = compression_isometry(e);
  std::mt19937_64 rng(3);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& X = e.domain.block(i).space();
    const auto& Y = e.codomain.block(i).space();
    for (int t = 0; t < 40; ++t) {
      const PointSet F = ball(Y, rng() % Y.size(), Rational(static_cast<long>(rng() % 3)));
      Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(Y.size()));
      for (Point y : F) f(static_cast<Eigen::Index>(y)) = 1 + static_cast<double>(rng() % 5);
      const Eigen::VectorXd g = th.blocks[i] * f;
      PointSet supp;
      for (Point x = 0; x < X.size(); ++x)
        if (g(static_cast<Eigen::Index>(x)) != 0) supp.push_back(x);
      EXPECT_LE(oracle::diam(X, supp), (oracle::diam(Y, F) + e.b[i]) / e.a);
    }
  }
}

TEST(Compression, IdentityEmbeddingGivesLaplacianGap) {
  auto f = SpaceFamily::from_graphs({petersen_graph(), oracle::heawood_graph()}, 3);
  auto e = identity_embedding(f);
  auto cl = compressed_laplacian(e);
  auto cert = localized_gap_compressed(e, cl, 1);
  ASSERT_TRUE(cert.i_S.has_value());
  for (const auto& r : cert.per_block)
    EXPECT_NEAR(r.min_rayleigh, localized_min_rayleigh(build_laplacian(f.block(r.index).space(), 1), 1).value, 1e-12);
  EXPECT_EQ(compressed_gap_constant(3), 1.0 / 12);
  EXPECT_THROW(compressed_gap_constant(1), InvalidArgument);
}

TEST(FunctionalCalculus, MatchesFullEigendecomposition) {
  auto e = sample_embedding();
  auto cl = compressed_laplacian(e);
  for (const double c : {1.0 / 12, 0.5, 2.0}) {
    auto fc = functional_calculus(cl.D, c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      const Eigen::MatrixXd want = dense_function(cl.D.blocks[i], c);
      const Eigen::MatrixXd got = fc.blocks[i].dense();
      EXPECT_LE((want - got).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_NEAR(fc.blocks[i].entry(0, 1), want(0, 1), 1e-9);
      const Eigen::MatrixXd T = Eigen::MatrixXd(cl.D.blocks[i]);
      EXPECT_LE((got * T - T * got).norm(), 1e-9);
      EXPECT_GE(fc.blocks[i].lambda_min, -1e-9);
    }
  }
  EXPECT_THROW(functional_calculus(cl.D, 0), InvalidArgument);
}

TEST(FunctionalCalculus, RejectsIndefiniteBlocks) {
  BlockOperator T;
  SparseMatrix m(2, 2);
  m.insert(0, 0) = -1;
  m.insert(1, 1) = 1;
  T.blocks.push_back(m);
  EXPECT_THROW(functional_calculus(T, 1), PreconditionError);
  EXPECT_DOUBLE_EQ(cutoff(0, 1), 1);
  EXPECT_DOUBLE_EQ(cutoff(0.25, 1), 0.5);
  EXPECT_DOUBLE_EQ(cutoff(0.75, 1), 0);
}

TEST(Ghost, ProfileOfNetQuotient) {
  auto e = sample_embedding();
  auto cl = compressed_laplacian(e);
  auto gp = ghost_profile(functional_calculus(cl.D, 1.0 / 12));
  ASSERT_EQ(gp.blocks.size(), 3u);
  for (const auto& b : gp.blocks) {
    EXPECT_GE(b.rank, 1u);
    EXPECT_GE(b.norm, 1 - 1e-9);
  }
  const auto j = gp.to_json();
  EXPECT_TRUE(j["surrogate"].get<bool>());
  EXPECT_EQ(gp.to_csv().substr(0, 16), "block,max_entry\n");
}

TEST(Ghost, VerdictRules) {
  auto block = [](double value, double v0) {
    SpectralFunctionBlock b;
    b.n = 2;
    b.vectors = Eigen::MatrixXd(2, 1);
    b.vectors << v0, std::sqrt(1 - v0 * v0);
    b.values = Eigen::VectorXd::Constant(1, value);
    b.eigenvalues = Eigen::VectorXd::Zero(1);
    return b;
  };
  FunctionalCalculus one{1, {block(1, 0.6)}};
  auto p1 = ghost_profile(one);
  EXPECT_EQ(p1.verdict, "PASS");
  ASSERT_EQ(p1.warnings.size(), 1u);

  FunctionalCalculus rising{1, {block(1, 0.6), block(1, 0.8), block(1, 1.0)}};
  auto p2 = ghost_profile(rising);
  EXPECT_EQ(p2.verdict, "FAIL");
  EXPECT_TRUE(p2.offending_block.has_value());

  FunctionalCalculus empty{1, {block(1, 1.0), block(0, 1.0)}};
  EXPECT_EQ(ghost_profile(empty).verdict, "FAIL");
}
