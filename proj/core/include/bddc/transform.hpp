// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Per-glob change of variables turning installed averages into
/// explicit dofs, and the group-mean projector of the transformed rows.

#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bddc/constraints.hpp"

namespace bddc {

/// Basis change on one glob's free dofs. h * t = I; the first rank rows of h
/// span the installed averages, so in new variables the constrained averages
/// are the explicit dofs sitting at the first rank glob-local slots,
/// explicit_slots[k] == k.
struct GlobTransform {
  int glob = 0;
  Index rank = 0;
  Eigen::MatrixXd h;  ///< completed average matrix (square)
  Eigen::MatrixXd t;  ///< its inverse, applied to subdomain blocks
  std::vector<Index> explicit_slots;
};

/// Disjoint-group mean projector: each group of W^c dofs is replaced by its
/// mean. This is the orthogonal projector onto the nullspace of the
/// transformed constraint rows.
class GroupProjector {
 public:
  /// Throws SingularGram if any dof appears in two groups.
  GroupProjector(std::vector<std::vector<Index>> groups, Index dim);

  void apply(Eigen::VectorXd& v) const;
  Eigen::SparseMatrix<double> matrix() const;
  const std::vector<std::vector<Index>>& groups() const { return groups_; }
  Index dimension() const { return dim_; }

 private:
  std::vector<std::vector<Index>> groups_;
  Index dim_ = 0;
};

struct ChangeOfVariables {
  std::vector<GlobTransform> glob_transforms;
  /// Per substructure: sparse local basis change (identity off the globs).
  std::vector<Eigen::SparseMatrix<double>> basis;
  /// Per (glob, explicit dof): the W^c ids of the sharers' copies, anchor
  /// first. These are the transformed equality groups.
  std::vector<std::vector<Index>> groups;
};

ChangeOfVariables change_of_variables(const ConstraintSet& set, const GlobSet& globset,
                                      const Mesh& mesh, const DofMap& dmap,
                                      const EmbeddingMaps& maps);

/// Equality rows of the transformed constraints: +1 on the anchor copy, -1 on
/// each other copy, one row per (group, non-anchor member).
Eigen::SparseMatrix<double> transformed_constraint_matrix(const ChangeOfVariables& cov,
                                                          const EmbeddingMaps& maps);

GroupProjector build_projection(const ChangeOfVariables& cov, const EmbeddingMaps& maps);

}  // namespace bddc
