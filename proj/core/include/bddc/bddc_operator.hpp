// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Stabilized coarse-constrained operator and the BDDC preconditioner.

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bddc/spaces.hpp"
#include "bddc/transform.hpp"

namespace bddc {

/// Corner-assembled operator in the transformed variables:
/// sum of Ts^T As Ts over substructures, corner dofs shared.
SparseSymMatrix assemble_transformed_operator(const std::vector<SubdomainSystem>& systems,
                                              const EmbeddingMaps& maps,
                                              const ChangeOfVariables& cov);

/// P a P + t (I - P) for a projector given as a sparse matrix. t <= 0 picks
/// the operator's largest diagonal entry; the value used is written back.
SparseSymMatrix stabilize(const SparseSymMatrix& a, const Eigen::SparseMatrix<double>& projector,
                          double t, double* t_used = nullptr);

/// The BDDC preconditioner on interface residuals: distribute by weights,
/// transform, restrict to the corner-continuous space, project, solve the
/// stabilized operator, and map back.
class BddcPreconditioner {
 public:
  BddcPreconditioner(const std::vector<SubdomainSystem>& systems, const EmbeddingMaps& maps,
                     const AveragingOperator& averaging, ChangeOfVariables cov,
                     double t = -1.0);

  Eigen::VectorXd apply(const Eigen::VectorXd& interface_residual) const;

  /// r (interface) -> projected transformed corner-continuous residual.
  Eigen::VectorXd restrict_residual(const Eigen::VectorXd& interface_residual) const;
  /// Solve the stabilized operator and re-project.
  Eigen::VectorXd coarse_solve(const Eigen::VectorXd& wc_residual) const;
  /// Corner-continuous correction -> averaged interface values.
  Eigen::VectorXd prolong(const Eigen::VectorXd& wc_correction) const;

  const SparseSymMatrix& stabilized() const { return stabilized_; }
  double stabilization_t() const { return t_; }

 private:
  const std::vector<SubdomainSystem>& systems_;
  const EmbeddingMaps& maps_;
  const AveragingOperator& averaging_;
  ChangeOfVariables cov_;
  GroupProjector projector_;
  SparseSymMatrix transformed_;
  SparseSymMatrix stabilized_;
  std::optional<Factorization> factor_;
  double t_ = 0;
};

}  // namespace bddc
