#include "aqicert/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include <algorithm>
#include <limits>
#include <set>

#include "aqicert/errors.hpp"

namespace aqicert {

namespace {

Eigen::MatrixXd principal(const SparseMatrix& m, const PointSet& idx, std::vector<int>& pos) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) pos[idx[static_cast<std::size_t>(j)]] = static_cast<int>(j);
  for (Eigen::Index j = 0; j < k; ++j)
    for (SparseMatrix::InnerIterator it(m, static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)])); it; ++it) {
      const int r = pos[static_cast<std::size_t>(it.row())];
      if (r >= 0) sub(r, j) = it.value();
    }
  for (auto p : idx) pos[p] = -1;
  return sub;
}

double lambda_min(Eigen::MatrixXd sub) {
  const auto n = static_cast<lapack_int>(sub.rows());
  if (n == 1) return sub(0, 0);
  if (n <= 48) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }
  lapack_int found = 0;
  double w[1];
  std::vector<lapack_int> isuppz(2);
  const int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, sub.data(), n, 0, 0, 1, 1, 0,
                                  &found, w, nullptr, 1, isuppz.data());
  if (info != 0 || found != 1) throw InternalError("dsyevr failed with info " + std::to_string(info));
  return w[0];
}

// Minimum over centres of lambda_min on the principal submatrix of
// ball_of(x). Only the minimizing ball gets an eigenvector.
template <class BallOf>
LocalizedMin scan_balls(const FiniteMetricSpace& space, const SparseMatrix& m, BallOf&& ball_of) {
  const std::size_t n = space.size();
  if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n)
    throw InvalidArgument("matrix dimension does not match the space");
  std::vector<int> pos(n, -1);
  LocalizedMin best;
  best.value = std::numeric_limits<double>::infinity();
  PointSet best_ball;
  for (Point x = 0; x < n; ++x) {
    PointSet b = ball_of(x);
    const double v = lambda_min(principal(m, b, pos));
    if (v < best.value) {
      best.value = v;
      best.center = x;
      best_ball = std::move(b);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(principal(m, best_ball, pos));
  best.value = es.eigenvalues()(0);
  best.witness.support = std::move(best_ball);
  best.witness.values = es.eigenvectors().col(0);
  return best;
}

PointSet ball_scaled(const FiniteMetricSpace& space, Point x, std::int64_t limit) {
  PointSet b;
  const auto row = space.row(x);
  for (Point y = 0; y < space.size(); ++y)
    if (row[y] <= limit) b.push_back(y);
  return b;
}

}  // namespace

ScaledLaplacian build_laplacian(const FiniteMetricSpace& s, const Rational& R) {
  if (R <= 0) throw InvalidArgument("Laplacian scale must be positive");
  const std::size_t n = s.size();
  const auto limit = s.scaled_at_most(R);
  std::vector<Eigen::Triplet<double>> t;
  for (Point x = 0; x < n; ++x) {
    const auto row = s.row(x);
    double deg = 0;
    for (Point y = 0; y < n; ++y)
      if (y != x && row[y] <= limit) {
        t.emplace_back(static_cast<int>(x), static_cast<int>(y), -1.0);
        deg += 1;
      }
    t.emplace_back(static_cast<int>(x), static_cast<int>(x), deg);
  }
  SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  return {s, R, std::move(m)};
}

LocalizedMin localized_min_rayleigh(const FiniteMetricSpace& space, const SparseMatrix& m,
                                    const Rational& S) {
  if (S < 0) throw InvalidArgument("support bound must be nonnegative");
  const auto limit = space.scaled_at_most(S);
  return scan_balls(space, m, [&](Point x) { return ball_scaled(space, x, limit); });
}

LocalizedMin localized_min_rayleigh(const ScaledLaplacian& L, const Rational& S) {
  return localized_min_rayleigh(L.space, L.matrix, S);
}

std::optional<LocalizedMin> refute_localized_gap(const FiniteMetricSpace& space,
                                                 const SparseMatrix& m, const Rational& S,
                                                 double epsilon, double tol) {
  if (S < 0) throw InvalidArgument("support bound must be nonnegative");
  if (!(epsilon > 0)) throw InvalidArgument("epsilon must be positive");
  // B(x, S) when its diameter is already <= S, otherwise B(x, S/2).
  const auto full = space.scaled_at_most(S);
  const auto half = space.scaled_at_most(S / 2);
  LocalizedMin found = scan_balls(space, m, [&](Point x) {
    PointSet b = ball_scaled(space, x, full);
    if (scaled_diameter(space, b) <= full) return b;
    return ball_scaled(space, x, half);
  });
  if (!(found.value < epsilon - tol)) return std::nullopt;
  // Re-evaluate on the returned vector rather than trusting the eigenvalue.
  const double q = rayleigh_quotient(m, found.witness);
  if (!(q < epsilon - tol)) return std::nullopt;
  if (diameter(space, found.witness.support) > S)
    throw InternalError("refutation witness exceeds the support bound");
  return found;
}

std::optional<LocalizedMin> refute_localized_gap(const ScaledLaplacian& L, const Rational& S,
                                                 double epsilon, double tol) {
  return refute_localized_gap(L.space, L.matrix, S, epsilon, tol);
}

double rayleigh_quotient(const SparseMatrix& m, const LocalVector& v) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(m.rows());
  for (std::size_t j = 0; j < v.support.size(); ++j)
    full(static_cast<Eigen::Index>(v.support[j])) = v.values(static_cast<Eigen::Index>(j));
  const double nn = full.squaredNorm();
  if (nn == 0) throw InvalidArgument("Rayleigh quotient of the zero vector");
  return full.dot(m * full) / nn;
}

Json SpectralCertificate::to_json() const {
  Json j;
  j["R"] = aqicert::to_json(R);
  j["epsilon"] = number(epsilon);
  j["S"] = aqicert::to_json(S);
  j["i_S"] = i_S ? Json(*i_S) : Json(nullptr);
  j["status"] = status;
  j["message"] = message;
  Json pb = Json::array();
  for (const auto& r : per_block)
    pb.push_back({{"index", r.index}, {"min_rayleigh", number(r.min_rayleigh)}, {"ball_center", r.ball_center}});
  j["per_block"] = pb;
  if (witness) {
    Json vals = Json::array();
    for (Eigen::Index t = 0; t < witness->witness.values.size(); ++t)
      vals.push_back(number(witness->witness.values(t)));
    j["witness"] = {{"block", witness_block ? Json(*witness_block) : Json(nullptr)},
                    {"rayleigh", number(witness->value)},
                    {"center", witness->center},
                    {"support", aqicert::to_json(witness->witness.support)},
                    {"values", vals}};
  }
  return j;
}

SpectralCertificate certify_weak_expansion(const SpaceFamily& f, const Rational& R, double epsilon,
                                           const Rational& S, double tol) {
  if (f.empty()) throw InvalidArgument("empty family");
  SpectralCertificate c;
  c.R = R;
  c.epsilon = epsilon;
  c.S = S;
  std::vector<bool> ok;
  std::vector<ScaledLaplacian> laps;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto L = build_laplacian(f.block(i).space(), R);
    auto m = localized_min_rayleigh(L, S);
    c.per_block.push_back({i, m.value, m.center});
    ok.push_back(m.value > epsilon + tol);
    laps.push_back(std::move(L));
  }
  std::size_t i = f.size();
  while (i > 0 && ok[i - 1]) --i;
  if (i < f.size()) {
    c.i_S = i;
    c.status = "pass";
    c.message = "localized Rayleigh quotient exceeds epsilon from block " + std::to_string(i);
    return c;
  }
  const std::size_t last = f.size() - 1;
  if (epsilon > 0) {
    if (auto w = refute_localized_gap(laps[last], S, epsilon, tol)) {
      c.status = "fail";
      c.message = "vector with support diameter <= S and Rayleigh quotient below epsilon in block " +
                  std::to_string(last);
      c.witness_block = last;
      c.witness = std::move(w);
      return c;
    }
  }
  c.status = "inconclusive";
  c.message = "ball bound below epsilon in block " + std::to_string(last) +
              " but no violation found on radius S/2 balls";
  return c;
}

std::vector<Rational> expansion_profile(const SpaceFamily& f, const Rational& R, double c,
                                        double tol) {
  if (!(c > 0)) throw InvalidArgument("expansion constant must be positive");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& s = f.block(i).space();
    const auto L = build_laplacian(s, R);
    std::set<std::int32_t> distinct;
    for (Point x = 0; x < s.size(); ++x) {
      const auto row = s.row(x);
      for (Point y = 0; y < s.size(); ++y) distinct.insert(row[y]);
    }
    const std::vector<std::int32_t> values(distinct.begin(), distinct.end());
    auto holds = [&](std::int32_t v) {
      const Rational S(v, s.scale());
      // The indicator of a ball bounds its smallest eigenvalue from above.
      for (Point x = 0; x < s.size(); ++x) {
        const auto row = s.row(x);
        std::vector<char> in(s.size(), 0);
        std::size_t count = 0;
        for (Point y = 0; y < s.size(); ++y)
          if (row[y] <= v) in[y] = 1, ++count;
        double total = 0;
        for (Point y = 0; y < s.size(); ++y) {
          if (!in[y]) continue;
          for (SparseMatrix::InnerIterator it(L.matrix, static_cast<Eigen::Index>(y)); it; ++it)
            if (in[static_cast<Point>(it.row())]) total += it.value();
        }
        if (total / static_cast<double>(count) < c - tol) return false;
      }
      return localized_min_rayleigh(L, S).value >= c - tol;
    };
    // The localized minimum is non-increasing in S (balls grow, eigenvalues
    // interlace), so the passing values form a prefix.
    std::size_t lo = 0, hi = values.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (holds(values[mid])) lo = mid + 1;
      else hi = mid;
    }
    out.push_back(lo == 0 ? Rational(-1) : Rational(values[lo - 1], s.scale()));
  }
  return out;
}

}  // namespace aqicert
