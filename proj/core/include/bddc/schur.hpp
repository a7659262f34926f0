// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Interface-condensed problem: Schur operator action, condensed right
/// hand side, and interior back-substitution.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bddc/spaces.hpp"

namespace bddc {

/// The global problem condensed onto the interface. Matrix-free: every apply
/// runs one interior solve per substructure.
class InterfaceProblem {
 public:
  InterfaceProblem(const std::vector<SubdomainSystem>& systems, const EmbeddingMaps& maps,
                   const HarmonicExtension& harmonic);

  Index size() const { return maps_.interface_count(); }

  /// Schur operator action on interface values.
  Eigen::VectorXd apply(const Eigen::VectorXd& u_interface) const;

  /// Condensed right hand side from the substructure loads.
  Eigen::VectorXd rhs() const;

  /// Full solution on the free dofs: interface values plus interior
  /// back-substitution against the substructure loads.
  Eigen::VectorXd recover(const Eigen::VectorXd& u_interface) const;

 private:
  const std::vector<SubdomainSystem>& systems_;
  const EmbeddingMaps& maps_;
  const HarmonicExtension& harmonic_;
};

}  // namespace bddc
