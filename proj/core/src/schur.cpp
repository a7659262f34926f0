// SPDX-License-Identifier: Apache-2.0

#include "bddc/schur.hpp"

namespace bddc {

InterfaceProblem::InterfaceProblem(const std::vector<SubdomainSystem>& systems,
                                   const EmbeddingMaps& maps,
                                   const HarmonicExtension& harmonic)
    : systems_(systems), maps_(maps), harmonic_(harmonic) {}

Eigen::VectorXd InterfaceProblem::apply(const Eigen::VectorXd& u_interface) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
  for (const auto& sys : systems_) {
    const int s = sys.subdomain;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.dim());
    for (Index l : harmonic_.boundary(s)) {
      const Index i = maps_.global_to_interface[sys.global_dof[l]];
      x(l) = u_interface(i);
    }
    // Harmonic interior values make the interior residual rows vanish, so the
    // boundary rows of As x are this substructure's Schur contribution.
    const auto& interior = harmonic_.interior(s);
    if (!interior.empty()) {
      Eigen::VectorXd xb(harmonic_.boundary(s).size());
      for (std::size_t r = 0; r < harmonic_.boundary(s).size(); ++r)
        xb(r) = x(harmonic_.boundary(s)[r]);
      const Eigen::VectorXd xi = harmonic_.interior_solve(s, -(harmonic_.coupling(s) * xb));
      for (std::size_t r = 0; r < interior.size(); ++r) x(interior[r]) = xi(r);
    }
    const Eigen::VectorXd y = sys.stiffness * x;
    for (Index l : harmonic_.boundary(s))
      out(maps_.global_to_interface[sys.global_dof[l]]) += y(l);
  }
  return out;
}

Eigen::VectorXd InterfaceProblem::rhs() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
  for (const auto& sys : systems_) {
    const int s = sys.subdomain;
    const auto& interior = harmonic_.interior(s);
    Eigen::VectorXd fold = Eigen::VectorXd::Zero(harmonic_.boundary(s).size());
    if (!interior.empty()) {
      Eigen::VectorXd fi(interior.size());
      for (std::size_t r = 0; r < interior.size(); ++r) fi(r) = sys.load(interior[r]);
      fold = harmonic_.coupling(s).transpose() * harmonic_.interior_solve(s, fi);
    }
    for (std::size_t r = 0; r < harmonic_.boundary(s).size(); ++r) {
      const Index l = harmonic_.boundary(s)[r];
      out(maps_.global_to_interface[sys.global_dof[l]]) += sys.load(l) - fold(r);
    }
  }
  return out;
}

Eigen::VectorXd InterfaceProblem::recover(const Eigen::VectorXd& u_interface) const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Index>(maps_.dof_copies.size()));
  for (Index i = 0; i < size(); ++i) u(maps_.interface_dofs[i]) = u_interface(i);
  for (const auto& sys : systems_) {
    const int s = sys.subdomain;
    const auto& interior = harmonic_.interior(s);
    if (interior.empty()) continue;
    Eigen::VectorXd xb(harmonic_.boundary(s).size());
    for (std::size_t r = 0; r < harmonic_.boundary(s).size(); ++r)
      xb(r) = u_interface(maps_.global_to_interface[sys.global_dof[harmonic_.boundary(s)[r]]]);
    Eigen::VectorXd fi(interior.size());
    for (std::size_t r = 0; r < interior.size(); ++r) fi(r) = sys.load(interior[r]);
    const Eigen::VectorXd xi =
        harmonic_.interior_solve(s, fi - harmonic_.coupling(s) * xb);
    for (std::size_t r = 0; r < interior.size(); ++r)
      u(sys.global_dof[interior[r]]) = xi(r);
  }
  return u;
}

}  // namespace bddc
