#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "aqicert/embedding.hpp"
#include "aqicert/spectral.hpp"

namespace aqicert {

/// Block-diagonal operator on a coarse disjoint union, one sparse block per
/// member, with a declared propagation bound.
struct BlockOperator {
  std::vector<SparseMatrix> blocks;
  Rational propagation;
};

/// Largest d(x, y) over nonzero entries, rows indexed by `rows`, columns by `cols`.
Rational measured_propagation(const SparseMatrix& m, const FiniteMetricSpace& rows,
                              const FiniteMetricSpace& cols);

/// theta_i (|X_i| x |Y_i|): one entry 1/sqrt|phi^{-1}(phi x)| per row at column
/// phi(x). Checks theta* theta = I to 1e-12. Throws PreconditionError for a
/// non-surjective embedding.
BlockOperator compression_isometry(const AqiEmbedding& e, double tol = 1e-12);

struct CompressedLaplacian {
  BlockOperator D;
  BlockOperator theta;
  /// Delta_{R,i} on the domain blocks.
  std::vector<SparseMatrix> laplacians;
  /// w_i(y) = sqrt|phi^{-1}(y)|.
  std::vector<Eigen::VectorXd> kernel;
  std::vector<double> kernel_residual;
  std::vector<Rational> measured;
  Rational R;

  Json to_json() const;
};

/// D_i = theta_i* Delta_{R,i} theta_i with declared propagation 2kR checked
/// entrywise, symmetry, and ||D_i w_i|| <= kernel_tol ||w_i||. A violated
/// guarantee throws InternalError.
CompressedLaplacian compressed_laplacian(const AqiEmbedding& e, const Rational& R = 1,
                                         double kernel_tol = 1e-10, double isometry_tol = 1e-12);

/// 1 / ((D-1)^2 D) for degree bound D.
double compressed_gap_constant(std::size_t D);

/// For every block i > threshold_index(e, S): localized_min_rayleigh(D_i, S) >= c
/// within tol, and <D_i f, f> = <Delta_i theta f, theta f> on the witness.
/// c defaults to compressed_gap_constant of the domain's degree bound.
SpectralCertificate localized_gap_compressed(const AqiEmbedding& e, const CompressedLaplacian& cl,
                                             const Rational& S, double c = 0,
                                             double tol = kEigenTolerance);

/// f(T) for one symmetric block, kept in factored form V diag(f) V^T over the
/// eigenpairs where f is nonzero.
struct SpectralFunctionBlock {
  std::size_t n = 0;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd values;
  /// Smallest eigenvalue of T when it falls in the computed window.
  double lambda_min = 0;

  double entry(std::size_t x, std::size_t y) const;
  Eigen::MatrixXd dense() const;
};

struct FunctionalCalculus {
  double c = 0;
  std::vector<SpectralFunctionBlock> blocks;
};

/// The cutoff max(0, 1 - 2t/c).
double cutoff(double t, double c);

/// f(T_i) with f = cutoff(., c), from a dense symmetric eigendecomposition
/// restricted to eigenvalues below c/2. Throws InvalidArgument for c <= 0 and
/// PreconditionError when a block has an eigenvalue below -tol.
FunctionalCalculus functional_calculus(const BlockOperator& T, double c,
                                       double tol = kEigenTolerance);

struct GhostBlock {
  std::size_t index;
  double norm;
  double max_entry;
  std::size_t rank;
};

struct GhostProfile {
  std::vector<GhostBlock> blocks;
  std::string verdict;  // "PASS" or "FAIL"
  std::string message;
  std::vector<std::string> warnings;
  std::optional<std::size_t> offending_block;

  Json to_json() const;
  std::string to_csv() const;
};

/// Norm, largest |entry| and rank above rank_tol per block. PASS when every
/// block has rank >= 1 and norm >= 1 - norm_tol and the max entries do not
/// increase across the last half of the family.
GhostProfile ghost_profile(const FunctionalCalculus& G, double rank_tol = 1e-8,
                           double norm_tol = 1e-9);

}  // namespace aqicert
