// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Pairwise substructure spaces: joint interface, corner-assembled
/// Schur complement, pair-renormalized averaging, and constraint restriction.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bddc/constraints.hpp"

namespace bddc {

/// Joint interface of two substructures with shared corner dofs identified.
/// Layout: corner dofs first, then the first substructure's copies of the
/// non-corner shared dofs, then the second's, then single-copy slots for the
/// interface dofs each substructure shares only with further neighbours.
struct PairSpace {
  int si = 0, sj = 0;
  std::vector<int> shared_globs;          ///< non-corner globs shared by both
  std::vector<Index> corner_globals;      ///< global dofs of shared corners
  std::vector<Index> noncorner_globals;   ///< per slot, grouped by shared_globs order
  std::vector<int> slot_glob;             ///< glob id per non-corner slot
  std::vector<Index> outer_globals;       ///< interface dofs touching only one side
  Eigen::VectorXd rho_i;                  ///< pair-renormalized weight of copy i
  Eigen::MatrixXd schur;                  ///< corner-assembled pair Schur complement

  Index n_corner() const { return static_cast<Index>(corner_globals.size()); }
  Index n_shared() const { return static_cast<Index>(noncorner_globals.size()); }
  Index n_outer() const { return static_cast<Index>(outer_globals.size()); }
  Index dim() const { return n_corner() + 2 * n_shared() + n_outer(); }

  /// Weighted jump annihilator: both copies of every non-corner slot get the
  /// pair average, corner and outer dofs stay.
  Eigen::VectorXd average_copies(const Eigen::VectorXd& v) const;
};

/// Build the pair space and its Schur complement: each substructure condenses
/// interior and private-boundary dofs, while the interface it shares with
/// further neighbours stays as explicit single-copy slots. Keeping that
/// surrounding skeleton in the trace measures a jump's energy against the rest
/// of the interface held fixed, the way the assembled operator sees it;
/// condensing it would let the pair relax around the jump and underestimate
/// it. Throws NotAdjacent if the two substructures share no dofs.
PairSpace build_pair(const std::vector<SubdomainSystem>& systems, const EmbeddingMaps& maps,
                     const GlobSet& globset, const Mesh& mesh, const DofMap& dmap, int si,
                     int sj);

/// Nullspace basis of the installed averages restricted to the pair: for each
/// shared glob, continuous columns plus sign-flipped kernel columns of its
/// average stack; corner and outer dofs pass through.
Eigen::MatrixXd pair_admissible_basis(const PairSpace& pair, const ConstraintSet& set,
                                      const GlobSet& globset, const Mesh& mesh,
                                      const DofMap& dmap);

}  // namespace bddc
