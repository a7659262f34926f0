// SPDX-License-Identifier: Apache-2.0

#include "bddc/bddc_operator.hpp"

namespace bddc {

SparseSymMatrix assemble_transformed_operator(const std::vector<SubdomainSystem>& systems,
                                              const EmbeddingMaps& maps,
                                              const ChangeOfVariables& cov) {
  SparseSymMatrix a(maps.wc_dim);
  for (const auto& sys : systems) {
    const auto& basis = cov.basis[sys.subdomain];
    const Eigen::SparseMatrix<double> local = basis.transpose() * sys.stiffness * basis;
    const auto& to_wc = maps.local_to_wc[sys.subdomain];
    for (int k = 0; k < local.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(local, k); it; ++it) {
        const Index r = to_wc[it.row()], c = to_wc[it.col()];
        if (r <= c) a.add(r, c, it.value());
      }
  }
  a.finalize();
  return a;
}

SparseSymMatrix stabilize(const SparseSymMatrix& a, const Eigen::SparseMatrix<double>& projector,
                          double t, double* t_used) {
  if (t <= 0) t = a.max_diagonal();
  if (t_used) *t_used = t;

  Eigen::SparseMatrix<double> identity(a.dimension(), a.dimension());
  identity.setIdentity();
  Eigen::SparseMatrix<double> m = projector * a.matrix() * projector;
  m += t * (identity - projector);
  const Eigen::SparseMatrix<double> sym = 0.5 * (Eigen::SparseMatrix<double>(m.transpose()) + m);
  return SparseSymMatrix::from_sparse(pruned(sym));
}

BddcPreconditioner::BddcPreconditioner(const std::vector<SubdomainSystem>& systems,
                                       const EmbeddingMaps& maps,
                                       const AveragingOperator& averaging,
                                       ChangeOfVariables cov, double t)
    : systems_(systems),
      maps_(maps),
      averaging_(averaging),
      cov_(std::move(cov)),
      projector_(build_projection(cov_, maps)) {
  transformed_ = assemble_transformed_operator(systems, maps, cov_);
  stabilized_ = stabilize(transformed_, projector_.matrix(), t, &t_);
  factor_ = factorize(stabilized_, FactorKind::Definite);
}

Eigen::VectorXd BddcPreconditioner::restrict_residual(
    const Eigen::VectorXd& interface_residual) const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Index>(maps_.dof_copies.size()));
  for (Index i = 0; i < maps_.interface_count(); ++i)
    u(maps_.interface_dofs[i]) = interface_residual(i);
  const Eigen::VectorXd w = averaging_.distribute(u);

  Eigen::VectorXd wc = Eigen::VectorXd::Zero(maps_.wc_dim);
  for (const auto& sys : systems_) {
    const int s = sys.subdomain;
    const Eigen::VectorXd y =
        cov_.basis[s].transpose() * w.segment(maps_.w_offset[s], sys.dim());
    for (Index l = 0; l < sys.dim(); ++l) wc(maps_.local_to_wc[s][l]) += y(l);
  }
  projector_.apply(wc);
  return wc;
}

Eigen::VectorXd BddcPreconditioner::coarse_solve(const Eigen::VectorXd& wc_residual) const {
  Eigen::VectorXd rhs = wc_residual;
  projector_.apply(rhs);
  Eigen::VectorXd x = factor_->solve(rhs);
  projector_.apply(x);
  // One refinement pass against the exact projected operator: for a projected
  // iterate the stabilization term drops out of the residual, so the accuracy
  // does not degrade when t dwarfs the operator scale.
  Eigen::VectorXd residual = transformed_.matrix() * x;
  projector_.apply(residual);
  residual = rhs - residual;
  Eigen::VectorXd correction = factor_->solve(residual);
  projector_.apply(correction);
  x += correction;
  return x;
}

Eigen::VectorXd BddcPreconditioner::prolong(const Eigen::VectorXd& wc_correction) const {
  Eigen::VectorXd w(maps_.w_dim);
  for (const auto& sys : systems_) {
    const int s = sys.subdomain;
    Eigen::VectorXd z(sys.dim());
    for (Index l = 0; l < sys.dim(); ++l) z(l) = wc_correction(maps_.local_to_wc[s][l]);
    w.segment(maps_.w_offset[s], sys.dim()) = cov_.basis[s] * z;
  }
  const Eigen::VectorXd u = averaging_.average(w);
  Eigen::VectorXd out(maps_.interface_count());
  for (Index i = 0; i < maps_.interface_count(); ++i) out(i) = u(maps_.interface_dofs[i]);
  return out;
}

Eigen::VectorXd BddcPreconditioner::apply(const Eigen::VectorXd& interface_residual) const {
  return prolong(coarse_solve(restrict_residual(interface_residual)));
}

}  // namespace bddc
