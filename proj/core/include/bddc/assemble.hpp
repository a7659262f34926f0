// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Element matrices, Dirichlet elimination, subdomain and global assembly.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bddc/mesh.hpp"
#include "bddc/problem.hpp"
#include "bddc/sparse.hpp"

namespace bddc {

/// Stiffness of one trilinear hexahedron (2x2x2 Gauss). Throws
/// DegenerateElement on nonpositive Jacobian determinant.
Eigen::MatrixXd element_stiffness(const std::array<std::array<double, 3>, 8>& corners,
                                  const Material& material, Physics physics);

/// Node-component to free-dof map after symmetric Dirichlet elimination.
struct DofMap {
  int dofs_per_node = 1;
  Index free_count = 0;
  std::vector<Index> dof;       ///< node*ncomp+c -> free dof id, or -1
  std::vector<double> value;    ///< prescribed value where dof == -1

  Index at(int node, int comp) const { return dof[Index(node) * dofs_per_node + comp]; }
};

/// Prescribed boundary value as a function of node position and component.
using BoundaryValue = std::function<double(const std::array<double, 3>&, int)>;

/// Eliminate the selected face dofs. An empty selection is allowed; the
/// resulting singular system surfaces as NotPositiveDefinite downstream.
DofMap apply_dirichlet(const Mesh& mesh, const std::vector<DirichletSpec>& dirichlet,
                       const BoundaryValue& value = nullptr);

/// One substructure: local stiffness (Dirichlet already eliminated), local
/// load, and the local-to-global dof map.
struct SubdomainSystem {
  int subdomain = 0;
  std::vector<int> nodes;          ///< global node ids, ascending
  std::vector<Index> global_dof;   ///< local dof -> global free dof
  std::vector<Index> node_comp;    ///< local dof -> node*ncomp + comp
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd load;

  Index dim() const { return static_cast<Index>(global_dof.size()); }
};

/// Assemble every substructure, including consistent surface/body loads and
/// inhomogeneous Dirichlet corrections.
std::vector<SubdomainSystem> assemble_subdomains(const Mesh& mesh, const Decomposition& deco,
                                                 const MaterialTable& materials,
                                                 const DofMap& dmap, const ProblemSpec& spec);

/// Global matrix assembled element-by-element (no substructuring).
SparseSymMatrix assemble_global_direct(const Mesh& mesh, const MaterialTable& materials,
                                       const DofMap& dmap);

/// Global matrix as the subassembly sum of the substructure matrices.
SparseSymMatrix assemble_global_from_subdomains(const std::vector<SubdomainSystem>& systems,
                                                Index free_count);

/// Global load vector summed from the substructure loads.
Eigen::VectorXd global_rhs(const std::vector<SubdomainSystem>& systems, Index free_count);

}  // namespace bddc
