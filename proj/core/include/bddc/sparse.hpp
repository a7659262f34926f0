// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Symmetric sparse assembly container and direct factorization.

#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bddc/types.hpp"

namespace bddc {

/// Symmetric sparse matrix assembled from (i, j, value) contributions.
/// Only one triangle needs to be added; duplicate pairs are summed on
/// finalize(). After finalize() the full symmetric matrix is available.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  explicit SparseSymMatrix(Index n) : n_(n) {}

  /// Accumulate a symmetric contribution. Either index order is accepted.
  void add(Index row, Index col, double value);

  /// Sum duplicates and build the full symmetric compressed form.
  void finalize();

  bool finalized() const { return finalized_; }
  Index dimension() const { return n_; }

  /// Nonzero count of the full symmetric matrix. Requires finalize().
  Index nonzeros() const;

  /// Full symmetric matrix. Requires finalize().
  const Eigen::SparseMatrix<double>& matrix() const;

  double max_diagonal() const;

  /// Wrap an existing full symmetric sparse matrix.
  static SparseSymMatrix from_sparse(const Eigen::SparseMatrix<double>& full);

 private:
  Index n_ = 0;
  bool finalized_ = false;
  std::vector<Eigen::Triplet<double>> upper_;
  Eigen::SparseMatrix<double> full_;
};

enum class FactorKind { Definite, SemidefiniteWithShift };

/// Opaque handle to a sparse Cholesky-type factorization.
class Factorization {
 public:
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  Index dimension() const;

  struct Impl;
  explicit Factorization(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Factor a symmetric matrix. Definite kind throws NotPositiveDefinite on
/// failure; SemidefiniteWithShift applies a small diagonal shift first.
Factorization factorize(const SparseSymMatrix& a, FactorKind kind = FactorKind::Definite);
Factorization factorize(const Eigen::SparseMatrix<double>& full_symmetric,
                        FactorKind kind = FactorKind::Definite);

/// Drop entries with |value| <= rel_tol * max|value| and compress.
Eigen::SparseMatrix<double> pruned(const Eigen::SparseMatrix<double>& m, double rel_tol = 1e-12);

}  // namespace bddc
