#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <vector>

#include "aqicert/family.hpp"
#include "aqicert/report.hpp"

namespace aqicert {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Default absolute tolerance on eigenvalue comparisons.
inline constexpr double kEigenTolerance = 1e-9;

/// Delta_R = degree - adjacency at scale R: entry -1 when 0 < d(x,y) <= R, the
/// diagonal counts such y. <Delta f, f> is the sum over unordered pairs.
struct ScaledLaplacian {
  FiniteMetricSpace space;
  Rational R;
  SparseMatrix matrix;
};

ScaledLaplacian build_laplacian(const FiniteMetricSpace& s, const Rational& R);

/// Vector supported on `support` (point indices); values[j] sits at support[j].
struct LocalVector {
  PointSet support;
  Eigen::VectorXd values;
};

struct LocalizedMin {
  double value = 0;
  Point center = 0;
  LocalVector witness;
};

/// min over centres x of lambda_min of the principal submatrix on B(x, S).
/// Lower bound for the Rayleigh quotient over vectors whose support has
/// diameter <= S; the witness is the minimizing eigenvector (support diameter
/// <= 2S). Works for any symmetric matrix indexed by the points of `space`.
LocalizedMin localized_min_rayleigh(const FiniteMetricSpace& space, const SparseMatrix& m,
                                    const Rational& S);
LocalizedMin localized_min_rayleigh(const ScaledLaplacian& L, const Rational& S);

/// Searches B(x, S) where its diameter is at most S and B(x, S/2) elsewhere.
/// A returned vector has support diameter <= S and
/// Rayleigh quotient < epsilon - tol, i.e. a genuine violation.
/// Throws InvalidArgument when epsilon <= 0 or S < 0.
std::optional<LocalizedMin> refute_localized_gap(const FiniteMetricSpace& space,
                                                 const SparseMatrix& m, const Rational& S,
                                                 double epsilon, double tol = kEigenTolerance);
std::optional<LocalizedMin> refute_localized_gap(const ScaledLaplacian& L, const Rational& S,
                                                 double epsilon, double tol = kEigenTolerance);

/// <m f, f> / <f, f> for a vector on a subset of the points.
double rayleigh_quotient(const SparseMatrix& m, const LocalVector& v);

struct SpectralBlockRecord {
  std::size_t index;
  double min_rayleigh;
  Point ball_center;
};

struct SpectralCertificate {
  Rational R;
  double epsilon = 0;
  Rational S;
  std::optional<std::size_t> i_S;
  std::vector<SpectralBlockRecord> per_block;
  /// "pass", "fail" (genuine witness found) or "inconclusive".
  std::string status;
  std::string message;
  std::optional<std::size_t> witness_block;
  std::optional<LocalizedMin> witness;

  bool passed() const { return status == "pass"; }
  Json to_json() const;
};

/// Least i_S with localized_min_rayleigh(Delta_{R,i}, S) > epsilon (beyond the
/// tolerance) for every i >= i_S. When none exists the last block is searched
/// for a genuine violation; without one the result is "inconclusive".
SpectralCertificate certify_weak_expansion(const SpaceFamily& f, const Rational& R,
                                           double epsilon, const Rational& S,
                                           double tol = kEigenTolerance);

/// Per block, the largest distance value S with localized_min_rayleigh >= c,
/// or -1 when even S = 0 fails. Throws InvalidArgument for c <= 0.
std::vector<Rational> expansion_profile(const SpaceFamily& f, const Rational& R, double c,
                                        double tol = kEigenTolerance);

}  // namespace aqicert
