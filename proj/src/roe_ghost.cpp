#include "aqicert/roe_ghost.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "aqicert/errors.hpp"

namespace aqicert {

namespace {

SparseMatrix domain_laplacian(const Block& X, const Rational& R) {
  if (!X.is_graph() || R >= 2) return build_laplacian(X.space(), R).matrix;
  if (R < 1) return build_laplacian(X.space(), R).matrix;
  // Scale in [1, 2) on a graph: the combinatorial Laplacian.
  const FiniteGraph& g = X.graph();
  std::vector<Eigen::Triplet<double>> t;
  for (Point x = 0; x < g.size(); ++x) {
    t.emplace_back(static_cast<int>(x), static_cast<int>(x), static_cast<double>(g.degree(x)));
    for (Point u : g.neighbours(x)) t.emplace_back(static_cast<int>(x), static_cast<int>(u), -1.0);
  }
  SparseMatrix m(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double max_abs(const SparseMatrix& m) {
  double best = 0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

}  // namespace

Rational measured_propagation(const SparseMatrix& m, const FiniteMetricSpace& rows,
                              const FiniteMetricSpace& cols) {
  if (&rows != &cols && rows.size() != cols.size())
    throw InvalidArgument("propagation needs one space indexing rows and columns");
  std::int32_t best = 0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (it.value() != 0)
        best = std::max(best, rows.scaled(static_cast<Point>(it.row()), static_cast<Point>(it.col())));
  return Rational(best, rows.scale());
}

BlockOperator compression_isometry(const AqiEmbedding& e, double tol) {
  e.check_shape();
  BlockOperator out;
  out.propagation = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e.surjective(i)) throw PreconditionError("block " + std::to_string(i) + " is not surjective");
    const auto& phi = e.maps[i];
    std::vector<long> count(e.codomain.block(i).size(), 0);
    for (Point y : phi) ++count[y];
    std::vector<Eigen::Triplet<double>> t;
    for (Point x = 0; x < phi.size(); ++x)
      t.emplace_back(static_cast<int>(x), static_cast<int>(phi[x]), 1.0 / std::sqrt(static_cast<double>(count[phi[x]])));
    SparseMatrix th(static_cast<Eigen::Index>(phi.size()), static_cast<Eigen::Index>(count.size()));
    th.setFromTriplets(t.begin(), t.end());
    SparseMatrix gram = SparseMatrix(th.transpose()) * th;
    SparseMatrix id(gram.rows(), gram.cols());
    id.setIdentity();
    if (max_abs(gram - id) > tol)
      throw InternalError("theta is not an isometry on block " + std::to_string(i));
    out.blocks.push_back(std::move(th));
  }
  return out;
}

Json CompressedLaplacian::to_json() const {
  Json j;
  j["R"] = aqicert::to_json(R);
  j["declared_propagation"] = aqicert::to_json(D.propagation);
  Json bs = Json::array();
  for (std::size_t i = 0; i < D.blocks.size(); ++i)
    bs.push_back({{"index", i},
                  {"size", D.blocks[i].rows()},
                  {"propagation", aqicert::to_json(measured[i])},
                  {"kernel_residual", number(kernel_residual[i])}});
  j["blocks"] = bs;
  return j;
}

CompressedLaplacian compressed_laplacian(const AqiEmbedding& e, const Rational& R, double kernel_tol,
                                         double isometry_tol) {
  CompressedLaplacian cl;
  cl.theta = compression_isometry(e, isometry_tol);
  cl.R = R;
  cl.D.propagation = 2 * e.k * R;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Block& X = e.domain.block(i);
    const auto& Y = e.codomain.block(i).space();
    SparseMatrix lap = domain_laplacian(X, R);
    const SparseMatrix& th = cl.theta.blocks[i];
    SparseMatrix d = SparseMatrix(th.transpose()) * (lap * th);
    d.prune(0.0);
    const SparseMatrix dt = d.transpose();
    if (max_abs(d - dt) > 1e-12)
      throw InternalError("compressed Laplacian is not symmetric on block " + std::to_string(i));
    const Rational prop = measured_propagation(d, Y, Y);
    if (prop > cl.D.propagation)
      throw InternalError("compressed Laplacian has propagation " + prop.str() + " > " +
                          cl.D.propagation.str() + " on block " + std::to_string(i));
    Eigen::VectorXd w(Y.size());
    std::vector<long> count(Y.size(), 0);
    for (Point y : e.maps[i]) ++count[y];
    for (Point y = 0; y < Y.size(); ++y) w(static_cast<Eigen::Index>(y)) = std::sqrt(static_cast<double>(count[y]));
    const double res = (d * w).norm() / w.norm();
    if (!(res <= kernel_tol))
      throw InternalError("w_i is not in the kernel of D_i on block " + std::to_string(i) +
                          " (relative residual " + std::to_string(res) + ")");
    cl.D.blocks.push_back(std::move(d));
    cl.laplacians.push_back(std::move(lap));
    cl.kernel.push_back(std::move(w));
    cl.kernel_residual.push_back(res);
    cl.measured.push_back(prop);
  }
  return cl;
}

double compressed_gap_constant(std::size_t D) {
  if (D < 2) throw InvalidArgument("degree bound below 2");
  const double d1 = static_cast<double>(D - 1);
  return 1.0 / (d1 * d1 * static_cast<double>(D));
}

SpectralCertificate localized_gap_compressed(const AqiEmbedding& e, const CompressedLaplacian& cl,
                                             const Rational& S, double c, double tol) {
  if (c <= 0) c = compressed_gap_constant(e.domain.effective_degree_bound());
  SpectralCertificate cert;
  cert.R = cl.R;
  cert.epsilon = c;
  cert.S = S;
  const std::size_t iS = threshold_index(e, S);
  cert.i_S = iS;
  if (iS + 1 >= e.size()) {
    cert.status = "fail";
    cert.message = "no recorded block beyond i_S = " + std::to_string(iS);
    return cert;
  }
  cert.status = "pass";
  for (std::size_t i = iS + 1; i < e.size(); ++i) {
    const auto& Y = e.codomain.block(i).space();
    const SparseMatrix& d = cl.D.blocks[i];
    auto m = localized_min_rayleigh(Y, d, S);
    cert.per_block.push_back({i, m.value, m.center});

    // <D f, f> against <Delta theta f, theta f> on the minimizing vector.
    Eigen::VectorXd f = Eigen::VectorXd::Zero(d.rows());
    for (std::size_t j = 0; j < m.witness.support.size(); ++j)
      f(static_cast<Eigen::Index>(m.witness.support[j])) = m.witness.values(static_cast<Eigen::Index>(j));
    const Eigen::VectorXd g = cl.theta.blocks[i] * f;
    const double lhs = f.dot(d * f), rhs = g.dot(cl.laplacians[i] * g);
    if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, std::abs(rhs)))
      throw InternalError("<Df,f> differs from <Delta theta f, theta f> on block " + std::to_string(i));

    if (cert.status == "pass" && m.value < c - tol) {
      if (auto w = refute_localized_gap(Y, d, S, c, tol)) {
        cert.status = "fail";
        cert.message = "vector with support diameter <= S below c in block " + std::to_string(i);
        cert.witness_block = i;
        cert.witness = std::move(w);
      } else {
        cert.status = "inconclusive";
        cert.message = "ball bound below c in block " + std::to_string(i) + " without a genuine violation";
        cert.witness_block = i;
      }
    }
  }
  if (cert.status == "pass")
    cert.message = "localized gap of D_i at least c for every block beyond i_S";
  return cert;
}

double cutoff(double t, double c) { return std::max(0.0, 1.0 - 2.0 * t / c); }

double SpectralFunctionBlock::entry(std::size_t x, std::size_t y) const {
  double s = 0;
  for (Eigen::Index j = 0; j < values.size(); ++j)
    s += values(j) * vectors(static_cast<Eigen::Index>(x), j) * vectors(static_cast<Eigen::Index>(y), j);
  return s;
}

Eigen::MatrixXd SpectralFunctionBlock::dense() const {
  if (values.size() == 0) return Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  return vectors * values.asDiagonal() * vectors.transpose();
}

FunctionalCalculus functional_calculus(const BlockOperator& T, double c, double tol) {
  if (!(c > 0)) throw InvalidArgument("cutoff constant must be positive");
  FunctionalCalculus out;
  out.c = c;
  for (std::size_t i = 0; i < T.blocks.size(); ++i) {
    const SparseMatrix& s = T.blocks[i];
    if (s.rows() != s.cols()) throw InvalidArgument("functional calculus needs square blocks");
    const lapack_int n = static_cast<lapack_int>(s.rows());
    SpectralFunctionBlock blk;
    blk.n = static_cast<std::size_t>(n);
    if (n == 0) {
      out.blocks.push_back(std::move(blk));
      continue;
    }
    // Householder tridiagonalization of the dense block, then MRRR on the
    // window (-inf, c/2) where the cutoff is nonzero, then back-transformation.
    Eigen::MatrixXd a = Eigen::MatrixXd(s);
    std::vector<double> diag(static_cast<std::size_t>(n)), off(static_cast<std::size_t>(n), 0.0),
        tau(static_cast<std::size_t>(std::max<lapack_int>(n - 1, 1)));
    lapack_int info = LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', n, a.data(), n, diag.data(), off.data(), tau.data());
    if (info != 0) throw InternalError("dsytrd failed with info " + std::to_string(info));

    double bound = 0;
    for (lapack_int k = 0; k < n; ++k)
      bound = std::max(bound, std::abs(diag[static_cast<std::size_t>(k)]) + 2 * std::abs(off[static_cast<std::size_t>(k)]));
    const double vl = -bound - 1.0, vu = c / 2;

    lapack_int m = 0;
    lapack_logical tryrac = 1;
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
    double count = 0;
    {
      auto d2 = diag, e2 = off;
      info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'V', n, d2.data(), e2.data(), vl, vu, 0, 0, &m,
                            w.data(), &count, n, -1, isuppz.data(), &tryrac);
      if (info != 0) throw InternalError("dstemr size query failed with info " + std::to_string(info));
    }
    const auto nzc = std::max<lapack_int>(static_cast<lapack_int>(count), 1);
    Eigen::MatrixXd z(n, nzc);
    tryrac = 1;
    info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'V', n, diag.data(), off.data(), vl, vu, 0, 0, &m,
                          w.data(), z.data(), n, nzc, isuppz.data(), &tryrac);
    if (info != 0) throw InternalError("dstemr failed with info " + std::to_string(info));
    if (m > 0) {
      info = LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'L', 'N', n, m, a.data(), n, tau.data(), z.data(), n);
      if (info != 0) throw InternalError("dormtr failed with info " + std::to_string(info));
    }
    a.resize(0, 0);

    blk.vectors = z.leftCols(m);
    blk.eigenvalues.resize(m);
    blk.values.resize(m);
    for (lapack_int j = 0; j < m; ++j) {
      blk.eigenvalues(j) = w[static_cast<std::size_t>(j)];
      blk.values(j) = cutoff(w[static_cast<std::size_t>(j)], c);
    }
    blk.lambda_min = m > 0 ? w[0] : vu;
    if (blk.lambda_min < -tol)
      throw PreconditionError("block " + std::to_string(i) + " is not positive semidefinite (eigenvalue " +
                              std::to_string(blk.lambda_min) + ")");
    out.blocks.push_back(std::move(blk));
  }
  return out;
}

Json GhostProfile::to_json() const {
  Json j;
  Json bs = Json::array();
  for (const auto& b : blocks)
    bs.push_back({{"index", b.index}, {"norm", number(b.norm)}, {"max_entry", number(b.max_entry)}, {"rank", b.rank}});
  j["blocks"] = bs;
  j["verdict"] = verdict;
  j["message"] = message;
  j["warnings"] = warnings;
  j["offending_block"] = offending_block ? Json(*offending_block) : Json(nullptr);
  j["surrogate"] = true;
  return j;
}

std::string GhostProfile::to_csv() const {
  std::ostringstream os;
  os << "block,max_entry\n";
  for (const auto& b : blocks) os << b.index << ',' << number(b.max_entry).dump() << '\n';
  return os.str();
}

GhostProfile ghost_profile(const FunctionalCalculus& G, double rank_tol, double norm_tol) {
  GhostProfile p;
  for (std::size_t i = 0; i < G.blocks.size(); ++i) {
    const auto& b = G.blocks[i];
    GhostBlock gb{i, 0.0, 0.0, 0};
    for (Eigen::Index j = 0; j < b.values.size(); ++j) {
      gb.norm = std::max(gb.norm, std::abs(b.values(j)));
      if (std::abs(b.values(j)) > rank_tol) ++gb.rank;
    }
    // Largest |entry| of V diag(f) V^T, row by row.
    const Eigen::MatrixXd scaled = b.vectors * b.values.asDiagonal();
    for (Eigen::Index x = 0; x < static_cast<Eigen::Index>(b.n) && b.values.size() > 0; ++x) {
      const Eigen::VectorXd row = b.vectors * scaled.row(x).transpose();
      gb.max_entry = std::max(gb.max_entry, row.cwiseAbs().maxCoeff());
    }
    p.blocks.push_back(gb);
  }
  p.verdict = "PASS";
  for (const auto& b : p.blocks)
    if (b.rank < 1 || b.norm < 1 - norm_tol) {
      p.verdict = "FAIL";
      p.offending_block = b.index;
      p.message = "block " + std::to_string(b.index) + " has rank " + std::to_string(b.rank) +
                  " and norm " + std::to_string(b.norm);
      return p;
    }
  if (p.blocks.size() < 2) {
    p.warnings.push_back("insufficient blocks");
    p.message = "trend vacuous with fewer than two blocks";
    return p;
  }
  for (std::size_t i = std::max<std::size_t>(p.blocks.size() / 2, 1); i < p.blocks.size(); ++i)
    if (p.blocks[i].max_entry > p.blocks[i - 1].max_entry) {
      p.verdict = "FAIL";
      p.offending_block = i;
      p.message = "max entry increases at block " + std::to_string(i);
      return p;
    }
  p.message = "norm 1 and non-increasing max entries over the last half of the family";
  return p;
}

}  // namespace aqicert
