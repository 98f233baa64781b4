#pragma once

#include <optional>
#include <vector>

#include "aqicert/embedding.hpp"
#include "aqicert/report.hpp"

namespace aqicert {

/// One probability measure per block, as exact point masses.
struct MeasureFamily {
  std::vector<std::vector<Rational>> weights;

  /// Throws InvalidArgument unless every block is nonnegative with total 1.
  void check() const;
  Rational mass(std::size_t i, const PointSet& F) const;
};

/// mu_i({y}) = |phi_i^{-1}(y)| / |X_i|. Throws PreconditionError when a block
/// is not surjective.
MeasureFamily pushforward_measure(const AqiEmbedding& e);

/// mu(∂_R F) / mu(F). Throws InvalidArgument for empty F, PreconditionError
/// when mu(F) = 0.
Rational mu_boundary_ratio(const FiniteMetricSpace& Y, const std::vector<Rational>& mu,
                           const PointSet& F, const Rational& R);

struct ContainmentResult {
  bool contained = true;
  /// A domain point of ∂_1(phi^{-1} F) outside phi^{-1}(∂_R F).
  std::optional<Point> witness;
};

/// Whether ∂_1(phi_i^{-1} F) ⊆ phi_i^{-1}(∂_R F). Throws PreconditionError for a
/// non-surjective block or R < k.
ContainmentResult boundary_containment_check(const AqiEmbedding& e, std::size_t i,
                                             const PointSet& F, const Rational& R);

enum class MuMode {
  /// Exhaustive on balls up to the cap, proof path above it.
  automatic,
  /// Proof premises plus spot checks only.
  proof_path,
};

struct MuBlockRecord {
  std::size_t index;
  std::string mode;  // "exhaustive", "proof-path only" or "mixed"
  std::size_t balls_exhaustive = 0;
  std::size_t balls_proof_path = 0;
  std::size_t sets_checked = 0;
  std::optional<Rational> min_ratio;
};

struct MuSRecord {
  Rational S;
  std::optional<std::size_t> i_S;
  std::string status;  // "pass", "fail", "no-such-index"
  std::string message;
  std::vector<MuBlockRecord> blocks;
  std::optional<Rational> min_ratio;
  std::optional<std::size_t> witness_block;
  std::optional<PointSet> witness;
};

struct MuExpanderCertificate {
  Rational R;
  Rational epsilon;
  std::size_t exhaustive_cap = 15;
  std::vector<MuSRecord> records;
  /// Per-set proof-chain links checked and how many failed.
  std::size_t links_checked = 0;
  std::size_t link_failures = 0;

  bool passed() const;
  Json to_json() const;
};

/// For each S: i_S = threshold_index(e, S), then every F ⊆ Y_i with diam F < S
/// in each block i > i_S must satisfy mu(∂_k F) > mu(F)/(D-1), compared
/// exactly. Each tested F also has the chain
///   mu ratio = preimage ratio >= |∂(phi^{-1}F)|/|phi^{-1}F| > 1/(D-1)
/// checked link by link. Throws PreconditionError when the domain is not a
/// large-girth family, a block is not surjective, or phi is not k-Lipschitz.
MuExpanderCertificate certify_mu_weak_expander(const AqiEmbedding& e,
                                               const std::vector<Rational>& S_list,
                                               std::size_t exhaustive_cap = 15,
                                               MuMode mode = MuMode::automatic);

}  // namespace aqicert
