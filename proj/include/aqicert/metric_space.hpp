#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "aqicert/graph.hpp"
#include "aqicert/rational.hpp"

namespace aqicert {

/// One row of a distance table, in scaled units.
class DistanceRow {
 public:
  DistanceRow(const std::uint8_t* narrow, const std::int32_t* wide) : narrow_(narrow), wide_(wide) {}
  std::int32_t operator[](std::size_t j) const { return narrow_ ? narrow_[j] : wide_[j]; }

 private:
  const std::uint8_t* narrow_;
  const std::int32_t* wide_;
};

/// Finite metric space with exact rational distances.
///
/// Distances are stored as numerators over one common denominator
/// (`scale()`), so every comparison against a rational radius reduces to an
/// integer comparison. Graph metrics have scale 1 and, when the diameter is
/// below 256, one byte per entry. Storage is shared between copies; the object
/// is immutable after construction.
class FiniteMetricSpace {
 public:
  /// Shortest-path metric of a connected graph.
  static FiniteMetricSpace from_graph(const FiniteGraph& g);

  /// Row-major n x n table. Checks zero diagonal, symmetry, positivity off the
  /// diagonal and the triangle inequality; throws InvalidArgument on violation.
  static FiniteMetricSpace from_table(std::size_t n, const std::vector<Rational>& table);

  std::size_t size() const { return n_; }
  std::int64_t scale() const { return scale_; }

  Rational distance(Point x, Point y) const;
  /// Numerator of d(x, y) over scale(). No bounds check.
  std::int32_t scaled(Point x, Point y) const {
    return narrow_ ? (*narrow_)[x * n_ + y] : (*wide_)[x * n_ + y];
  }
  DistanceRow row(Point x) const {
    return narrow_ ? DistanceRow(narrow_->data() + x * n_, nullptr)
                   : DistanceRow(nullptr, wide_->data() + x * n_);
  }

  /// Largest scaled value m with m / scale() <= r.
  std::int64_t scaled_at_most(const Rational& r) const;
  /// Largest scaled value m with m / scale() < r.
  std::int64_t scaled_below(const Rational& r) const;

  Rational diameter() const;
  Rational min_positive_distance() const;
  bool is_uniformly_discrete(const Rational& bound = Rational(1)) const;

  /// Metric restricted to `points` (sorted); point j of the result is points[j].
  FiniteMetricSpace induced(const PointSet& points) const;
  /// Same points with every distance multiplied by a positive factor.
  FiniteMetricSpace rescaled(const Rational& factor) const;

  /// Largest ball cardinality at radius r (the bounded-geometry profile N_r).
  std::size_t max_ball_size(const Rational& r) const;

 private:
  FiniteMetricSpace() = default;
  /// Picks byte storage when every entry fits.
  FiniteMetricSpace(std::size_t n, std::int64_t scale, std::vector<std::int32_t> table);

  std::size_t n_ = 0;
  std::int64_t scale_ = 1;
  std::shared_ptr<const std::vector<std::uint8_t>> narrow_;
  std::shared_ptr<const std::vector<std::int32_t>> wide_;
};

/// { y : d(x, y) <= r }. Throws InvalidArgument for a bad index or negative r.
PointSet ball(const FiniteMetricSpace& s, Point x, const Rational& r);

/// { y : 0 < d(y, F) <= R }. Throws InvalidArgument for empty F or R <= 0.
PointSet r_boundary(const FiniteMetricSpace& s, const PointSet& F, const Rational& R);

/// Largest pairwise distance within F. Throws InvalidArgument for empty F.
Rational diameter(const FiniteMetricSpace& s, const PointSet& F);
std::int64_t scaled_diameter(const FiniteMetricSpace& s, const PointSet& F);

/// Sorts, removes duplicates and range-checks a caller-supplied point list.
PointSet normalize(const FiniteMetricSpace& s, std::vector<Point> points);

}  // namespace aqicert
