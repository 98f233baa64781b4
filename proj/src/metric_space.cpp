#include "aqicert/metric_space.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "aqicert/errors.hpp"

namespace aqicert {

namespace {

constexpr std::int64_t kMaxScaled = std::numeric_limits<std::int32_t>::max();

std::int32_t narrow(const Integer& z) {
  if (z > kMaxScaled || z < -kMaxScaled)
    throw InvalidArgument("distance numerator " + z.str() + " exceeds 32-bit storage");
  return static_cast<std::int32_t>(z.convert_to<std::int64_t>());
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::int64_t scale,
                                     std::vector<std::int32_t> table)
    : n_(n), scale_(scale) {
  const bool fits = std::all_of(table.begin(), table.end(),
                                [](std::int32_t v) { return v >= 0 && v <= 255; });
  if (fits)
    narrow_ = std::make_shared<const std::vector<std::uint8_t>>(table.begin(), table.end());
  else
    wide_ = std::make_shared<const std::vector<std::int32_t>>(std::move(table));
}

FiniteMetricSpace FiniteMetricSpace::from_graph(const FiniteGraph& g) {
  const std::size_t n = g.size();
  // Fill a byte table directly; large graphs would not fit a 32-bit one.
  auto narrow = std::make_shared<std::vector<std::uint8_t>>(n * n);
  bool fits = true;
  for (Point x = 0; x < n && fits; ++x) {
    auto dist = g.distances_from(x);
    for (Point y = 0; y < n; ++y) {
      if (dist[y] > 255) {
        fits = false;
        break;
      }
      (*narrow)[x * n + y] = static_cast<std::uint8_t>(dist[y]);
    }
  }
  FiniteMetricSpace out;
  out.n_ = n;
  if (fits) {
    out.narrow_ = std::move(narrow);
    return out;
  }
  narrow.reset();
  auto wide = std::make_shared<std::vector<std::int32_t>>(n * n);
  for (Point x = 0; x < n; ++x) {
    auto dist = g.distances_from(x);
    std::copy(dist.begin(), dist.end(), wide->begin() + static_cast<std::ptrdiff_t>(x * n));
  }
  out.wide_ = std::move(wide);
  return out;
}

FiniteMetricSpace FiniteMetricSpace::from_table(std::size_t n,
                                                const std::vector<Rational>& table) {
  if (n == 0) throw InvalidArgument("metric space must have at least one point");
  if (table.size() != n * n)
    throw InvalidArgument("distance table has " + std::to_string(table.size()) +
                          " entries, expected " + std::to_string(n * n));
  Integer lcm = 1;
  for (const auto& q : table) {
    Integer d = boost::multiprecision::denominator(q);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  if (lcm > kMaxScaled) throw InvalidArgument("common denominator too large");
  std::vector<std::int32_t> t(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    Rational v = table[i] * Rational(lcm);
    t[i] = narrow(boost::multiprecision::numerator(v));
  }
  for (Point x = 0; x < n; ++x) {
    if (t[x * n + x] != 0) throw InvalidArgument("nonzero diagonal at " + std::to_string(x));
    for (Point y = 0; y < n; ++y) {
      if (t[x * n + y] != t[y * n + x])
        throw InvalidArgument("asymmetric distance at (" + std::to_string(x) + "," +
                              std::to_string(y) + ")");
      if (x != y && t[x * n + y] <= 0)
        throw InvalidArgument("non-positive distance between distinct points " +
                              std::to_string(x) + "," + std::to_string(y));
    }
  }
  for (Point x = 0; x < n; ++x)
    for (Point y = 0; y < n; ++y)
      for (Point z = 0; z < n; ++z)
        if (static_cast<std::int64_t>(t[x * n + z]) >
            static_cast<std::int64_t>(t[x * n + y]) + t[y * n + z])
          throw InvalidArgument("triangle inequality fails at (" + std::to_string(x) + "," +
                                std::to_string(y) + "," + std::to_string(z) + ")");
  return FiniteMetricSpace(n, lcm.convert_to<std::int64_t>(), std::move(t));
}

Rational FiniteMetricSpace::distance(Point x, Point y) const {
  if (x >= n_ || y >= n_) throw InvalidArgument("point index out of range");
  return Rational(scaled(x, y), scale_);
}

std::int64_t FiniteMetricSpace::scaled_at_most(const Rational& r) const {
  Integer m = aqicert::floor(r * Rational(scale_));
  if (m > kMaxScaled) return kMaxScaled;
  if (m < -1) return -1;
  return m.convert_to<std::int64_t>();
}

std::int64_t FiniteMetricSpace::scaled_below(const Rational& r) const {
  Integer m = aqicert::ceil(r * Rational(scale_)) - 1;
  if (m > kMaxScaled) return kMaxScaled;
  if (m < -1) return -1;
  return m.convert_to<std::int64_t>();
}

Rational FiniteMetricSpace::diameter() const {
  std::int32_t best = 0;
  if (narrow_)
    best = *std::max_element(narrow_->begin(), narrow_->end());
  else
    best = *std::max_element(wide_->begin(), wide_->end());
  return Rational(best, scale_);
}

Rational FiniteMetricSpace::min_positive_distance() const {
  std::int32_t best = std::numeric_limits<std::int32_t>::max();
  for (Point x = 0; x < n_; ++x) {
    const auto d = row(x);
    for (Point y = 0; y < n_; ++y)
      if (d[y] > 0) best = std::min(best, d[y]);
  }
  if (best == std::numeric_limits<std::int32_t>::max()) return Rational(0);
  return Rational(best, scale_);
}

bool FiniteMetricSpace::is_uniformly_discrete(const Rational& bound) const {
  return n_ == 1 || min_positive_distance() >= bound;
}

FiniteMetricSpace FiniteMetricSpace::induced(const PointSet& points) const {
  if (points.empty()) throw InvalidArgument("induced subspace of an empty set");
  const std::size_t m = points.size();
  std::vector<std::int32_t> table(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    if (points[i] >= n_) throw InvalidArgument("point index out of range");
    if (i > 0 && points[i] <= points[i - 1]) throw InvalidArgument("point set not sorted/unique");
    const auto d = row(points[i]);
    for (std::size_t j = 0; j < m; ++j) table[i * m + j] = d[points[j]];
  }
  return FiniteMetricSpace(m, scale_, std::move(table));
}

FiniteMetricSpace FiniteMetricSpace::rescaled(const Rational& factor) const {
  if (factor <= 0) throw InvalidArgument("rescaling factor must be positive");
  std::vector<Rational> entries(n_ * n_);
  for (std::size_t i = 0; i < n_ * n_; ++i)
    entries[i] = Rational(scaled(i / n_, i % n_), scale_) * factor;
  return from_table(n_, entries);
}

std::size_t FiniteMetricSpace::max_ball_size(const Rational& r) const {
  const auto limit = scaled_at_most(r);
  std::size_t best = 0;
  for (Point x = 0; x < n_; ++x) {
    const auto d = row(x);
    std::size_t count = 0;
    for (Point y = 0; y < n_; ++y) count += d[y] <= limit;
    best = std::max(best, count);
  }
  return best;
}

PointSet ball(const FiniteMetricSpace& s, Point x, const Rational& r) {
  if (x >= s.size()) throw InvalidArgument("ball centre out of range");
  if (r < 0) throw InvalidArgument("ball radius must be nonnegative");
  const auto limit = s.scaled_at_most(r);
  PointSet out;
  const auto d = s.row(x);
  for (Point y = 0; y < s.size(); ++y)
    if (d[y] <= limit) out.push_back(y);
  return out;
}

PointSet r_boundary(const FiniteMetricSpace& s, const PointSet& F, const Rational& R) {
  if (F.empty()) throw InvalidArgument("boundary of an empty set");
  if (R <= 0) throw InvalidArgument("boundary radius must be positive");
  const auto limit = s.scaled_at_most(R);
  std::vector<char> inside(s.size(), 0), near(s.size(), 0);
  for (Point x : F) {
    if (x >= s.size()) throw InvalidArgument("point index out of range");
    inside[x] = 1;
  }
  for (Point x : F) {
    const auto d = s.row(x);
    for (Point y = 0; y < s.size(); ++y)
      if (d[y] <= limit) near[y] = 1;
  }
  PointSet out;
  for (Point y = 0; y < s.size(); ++y)
    if (near[y] && !inside[y]) out.push_back(y);
  return out;
}

std::int64_t scaled_diameter(const FiniteMetricSpace& s, const PointSet& F) {
  if (F.empty()) throw InvalidArgument("diameter of an empty set");
  std::int64_t best = 0;
  for (Point x : F) {
    if (x >= s.size()) throw InvalidArgument("point index out of range");
    for (Point y : F) best = std::max<std::int64_t>(best, s.scaled(x, y));
  }
  return best;
}

Rational diameter(const FiniteMetricSpace& s, const PointSet& F) {
  return Rational(scaled_diameter(s, F), s.scale());
}

PointSet normalize(const FiniteMetricSpace& s, std::vector<Point> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (!points.empty() && points.back() >= s.size())
    throw InvalidArgument("point index out of range");
  return points;
}

}  // namespace aqicert
