// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Dense kernels: column-pivoted QR and symmetric generalized eigensolve.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bddc/types.hpp"

namespace bddc {

/// Result of a column-pivoted Householder QR of an m x n matrix A:
///   A * P = Q * R,  i.e.  A = Q * R * P^T
/// with Q m x m orthogonal and R upper trapezoidal. The diagonal of R is
/// nonnegative and nonincreasing in magnitude. perm[k] is the original column
/// sitting at permuted position k.
struct PivotedQr {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
  std::vector<Index> perm;
  Index rank = 0;

  /// A reconstructed from the factors (columns scattered back).
  Eigen::MatrixXd reconstruct() const;
};

/// Column-pivoted QR with a relative drop tolerance: rank counts diagonal
/// entries larger than rel_drop_tol * |R_11|. A zero matrix has rank 0.
PivotedQr pivoted_qr(const Eigen::MatrixXd& a, double rel_drop_tol = 1e-8);

/// Eigenvalues (descending) and rhs-orthonormal eigenvectors of a pencil.
struct EigenReport {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  Index requested = 0;
  Index rhs_nullity = 0;
};

struct GeneralizedEigOptions {
  double null_rel_tol = 1e-9;       ///< rhs eigenvalue below this ratio is null
  double inclusion_rel_tol = 1e-6;  ///< allowed |lhs z| for z in null(rhs)
};

/// Largest k eigenvalues of lhs * w = lambda * rhs * w restricted to the
/// factorspace modulo null(rhs). Both matrices must be symmetric positive
/// semidefinite and null(rhs) must be contained in null(lhs); a violation
/// beyond tolerance raises NullspaceInclusionViolated. Eigenvectors are
/// rhs-orthonormal; lambda is clamped at zero against roundoff.
EigenReport generalized_eig_sym(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs,
                                Index k, const GeneralizedEigOptions& opts = {});

}  // namespace bddc
