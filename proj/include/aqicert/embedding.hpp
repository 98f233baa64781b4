#pragma once

#include <vector>

#include "aqicert/family.hpp"
#include "aqicert/report.hpp"

namespace aqicert {

/// Per-block maps phi_i: X_i -> Y_i with constants a, k and per-block b_i such
/// that a d(x,y) - b_i <= d(phi x, phi y) <= k d(x,y).
struct AqiEmbedding {
  SpaceFamily domain;
  SpaceFamily codomain;
  /// maps[i][x] = phi_i(x).
  std::vector<std::vector<Point>> maps;
  Rational a = 1;
  Rational k = 1;
  std::vector<Rational> b;

  std::size_t size() const { return maps.size(); }
  /// Throws InvalidArgument on block-count mismatch, a partial map, an
  /// out-of-range image or non-positive a, k / negative b_i.
  void check_shape() const;
  bool surjective(std::size_t i) const;
  bool surjective() const;
  /// fibres(i)[y] = phi_i^{-1}(y), sorted.
  std::vector<PointSet> fibres(std::size_t i) const;
};

/// Exhaustive check of both inequalities on every pair of every block, plus the
/// smallness proxy for b_i: the ratios b_i / girth(X_i) are non-increasing and
/// the last is at most half the first. The proxy is vacuous with fewer than two
/// blocks or without girth data. The first violating pair is the witness.
CertificationReport verify_aqi(const AqiEmbedding& e);

/// Codomain blocks replaced by the images with the induced metric. Idempotent.
AqiEmbedding surjectivize(const AqiEmbedding& e);

/// (diam F + b_i) / a, after checking it bounds diam(phi_i^{-1}(F)).
/// Throws PreconditionError when block i is not surjective, InvalidArgument
/// for empty F, InternalError if the bound fails.
Rational preimage_diameter_bound(const AqiEmbedding& e, std::size_t i, const PointSet& F);

/// Least block index i_S with (S + b_i)/a <= girth(X_i)/2 for every i >= i_S.
/// Throws NoSuchIndex when the last block already fails, PreconditionError when
/// the domain carries no girth data.
std::size_t threshold_index(const AqiEmbedding& e, const Rational& S);

/// Greedy r_i-net of each block in index order; every point maps to its
/// nearest net point (lowest index on ties). a = 1, k = 1 + 2 max r_i, b_i = 2 r_i.
AqiEmbedding net_quotient(const SpaceFamily& f, const std::vector<Rational>& radii);

/// Identity maps onto a copy of the family, a = k = 1, b = 0.
AqiEmbedding identity_embedding(const SpaceFamily& f);

/// Convenience fit used by the CLI only: with a fixed, k is the largest
/// stretch d(phi x, phi y)/d(x, y) and b_i the smallest additive slack.
AqiEmbedding infer_constants(AqiEmbedding e, const Rational& a = 1);

}  // namespace aqicert
