// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Product-space embeddings, corner-continuous numbering, weighted
/// interface averaging, and discrete harmonic extensions.

#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bddc/assemble.hpp"
#include "bddc/globs.hpp"
#include "bddc/sparse.hpp"

namespace bddc {

/// Index bookkeeping between the global space, the product space W (one block
/// per substructure), and the corner-continuous space W^c whose numbering puts
/// shared corner dofs first, then every substructure's remaining dofs.
struct EmbeddingMaps {
  // Product space W.
  std::vector<Index> w_offset;  ///< per substructure, block start in W
  Index w_dim = 0;
  /// global free dof -> its (substructure, local dof) copies, ascending.
  std::vector<std::vector<std::pair<int, Index>>> dof_copies;
  std::vector<Index> interface_dofs;       ///< global dofs with >= 2 copies
  std::vector<Index> global_to_interface;  ///< -1 when not on the interface

  // Corner-continuous space W^c.
  Index corner_dof_count = 0;
  Index wc_dim = 0;
  std::vector<std::vector<Index>> local_to_wc;   ///< per substructure, local dof -> W^c id
  std::vector<std::vector<char>> local_is_corner;
  std::vector<Index> corner_dof_of_global;       ///< global dof -> corner id, or -1

  Index interface_count() const { return static_cast<Index>(interface_dofs.size()); }
};

EmbeddingMaps build_embeddings(const std::vector<SubdomainSystem>& systems, Index free_count,
                               const GlobSet& globset, const DofMap& dmap);

/// Corner-assembled operator: substructure stiffnesses summed over shared
/// corner dofs, block-diagonal elsewhere.
SparseSymMatrix assemble_corner_operator(const std::vector<SubdomainSystem>& systems,
                                         const EmbeddingMaps& maps);

/// Weighted averaging from W onto the global space and its transpose. Weights
/// are proportional to the substructure stiffness diagonals.
class AveragingOperator {
 public:
  AveragingOperator(const std::vector<SubdomainSystem>& systems, const EmbeddingMaps& maps);

  /// E: W -> global. Every global dof gets the weighted mean of its copies.
  Eigen::VectorXd average(const Eigen::VectorXd& w) const;
  /// E^T: global -> W. Every copy gets its weight times the global value.
  Eigen::VectorXd distribute(const Eigen::VectorXd& u) const;
  /// Weight of one copy of a global dof.
  double weight(Index global_dof, int copy) const { return weights_[global_dof][copy]; }

 private:
  const EmbeddingMaps& maps_;
  std::vector<std::vector<double>> weights_;  ///< aligned with maps_.dof_copies
};

/// Substructure-interior solves: discrete harmonic extension from interface
/// values and its adjoint on residuals.
class HarmonicExtension {
 public:
  HarmonicExtension(const std::vector<SubdomainSystem>& systems, const EmbeddingMaps& maps);

  /// Overwrite interior values with the energy-minimal extension of the
  /// interface values (in place, W layout).
  void extend(Eigen::VectorXd& w) const;
  /// Adjoint map on residuals: fold interior residual onto the interface and
  /// zero it (in place, W layout).
  void fold_interior_residual(Eigen::VectorXd& w) const;

  const std::vector<Index>& interior(int s) const { return interior_[s]; }
  const std::vector<Index>& boundary(int s) const { return boundary_[s]; }
  /// Solve A_II x = b for one substructure.
  Eigen::VectorXd interior_solve(int s, const Eigen::VectorXd& b) const;
  /// A_IB block of one substructure (interior rows, interface columns).
  const Eigen::SparseMatrix<double>& coupling(int s) const { return coupling_[s]; }

 private:
  const EmbeddingMaps& maps_;
  std::vector<std::vector<Index>> interior_;   ///< local dofs with a single copy
  std::vector<std::vector<Index>> boundary_;   ///< local dofs on the interface
  std::vector<Factorization> interior_factor_;
  std::vector<Eigen::SparseMatrix<double>> coupling_;
};

}  // namespace bddc
