// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Glob averages, their pairwise equality rows over W^c, and the
/// nullspace projector of the untransformed constraint matrix.

#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bddc/globs.hpp"
#include "bddc/spaces.hpp"

namespace bddc {

enum class AverageProvenance { Arithmetic, Adaptive };

/// One weighted average over a glob. Weights run over the glob's free dofs in
/// node-major order (node ascending, component fastest). Equality of this
/// average across every sharer of the glob is the constraint.
struct GlobAverage {
  int glob = 0;
  Eigen::VectorXd weights;
  AverageProvenance provenance = AverageProvenance::Arithmetic;
};

/// Installed constraints: per-glob rank-filtered averages. Row accounting
/// counts one equality row per average and non-anchor sharer (the anchor is
/// the smallest sharer).
struct ConstraintSet {
  std::vector<GlobAverage> averages;

  Index row_count(const GlobSet& globset) const;
  std::vector<std::vector<int>> by_glob(std::size_t n_globs) const;
};

/// Global free dofs of a glob in node-major order (Dirichlet dofs skipped).
std::vector<Index> glob_free_dofs(const Glob& glob, const Mesh& mesh, const DofMap& dmap);

/// Unit-weight averages per component on edge and/or face globs.
ConstraintSet arithmetic_constraints(const GlobSet& globset, const Mesh& mesh,
                                     const DofMap& dmap, bool edge_globs, bool face_globs);

/// Append an average unless it is linearly dependent on the glob's existing
/// ones. Returns whether it was kept.
bool add_average(ConstraintSet& set, const GlobSet& globset, const Mesh& mesh,
                 const DofMap& dmap, GlobAverage average);

/// Equality rows over W^c: for every average and non-anchor sharer, the
/// anchor's weighted sum minus that sharer's. Row order: glob, then average,
/// then sharer.
Eigen::SparseMatrix<double> constraint_matrix(const ConstraintSet& set, const GlobSet& globset,
                                              const Mesh& mesh, const DofMap& dmap,
                                              const EmbeddingMaps& maps);

/// Orthogonal projector onto the nullspace of constraint_matrix(...), formed
/// explicitly (dense per-glob blocks). Throws SingularGram if a glob's rows
/// are dependent.
Eigen::SparseMatrix<double> constraint_projector(const ConstraintSet& set,
                                                 const GlobSet& globset, const Mesh& mesh,
                                                 const DofMap& dmap, const EmbeddingMaps& maps);

}  // namespace bddc
