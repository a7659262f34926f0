// SPDX-License-Identifier: Apache-2.0

#include "bddc/spaces.hpp"

#include <algorithm>

namespace bddc {

EmbeddingMaps build_embeddings(const std::vector<SubdomainSystem>& systems, Index free_count,
                               const GlobSet& globset, const DofMap& dmap) {
  EmbeddingMaps maps;
  const int n_sub = static_cast<int>(systems.size());

  maps.w_offset.resize(n_sub);
  maps.w_dim = 0;
  for (int s = 0; s < n_sub; ++s) {
    maps.w_offset[s] = maps.w_dim;
    maps.w_dim += systems[s].dim();
  }

  maps.dof_copies.assign(free_count, {});
  for (int s = 0; s < n_sub; ++s)
    for (Index l = 0; l < systems[s].dim(); ++l)
      maps.dof_copies[systems[s].global_dof[l]].emplace_back(s, l);

  maps.global_to_interface.assign(free_count, -1);
  for (Index g = 0; g < free_count; ++g)
    if (maps.dof_copies[g].size() >= 2) {
      maps.global_to_interface[g] = static_cast<Index>(maps.interface_dofs.size());
      maps.interface_dofs.push_back(g);
    }

  // Corner dofs first in W^c, in ascending corner-node order.
  maps.corner_dof_of_global.assign(free_count, -1);
  maps.corner_dof_count = 0;
  for (int node : globset.corner_nodes())
    for (int c = 0; c < dmap.dofs_per_node; ++c) {
      const Index g = dmap.at(node, c);
      if (g < 0) continue;
      maps.corner_dof_of_global[g] = maps.corner_dof_count++;
    }

  maps.local_to_wc.resize(n_sub);
  maps.local_is_corner.resize(n_sub);
  maps.wc_dim = maps.corner_dof_count;
  for (int s = 0; s < n_sub; ++s) {
    maps.local_to_wc[s].resize(systems[s].dim());
    maps.local_is_corner[s].resize(systems[s].dim());
    for (Index l = 0; l < systems[s].dim(); ++l) {
      const Index corner = maps.corner_dof_of_global[systems[s].global_dof[l]];
      maps.local_is_corner[s][l] = corner >= 0;
      maps.local_to_wc[s][l] = corner >= 0 ? corner : maps.wc_dim++;
    }
  }
  return maps;
}

SparseSymMatrix assemble_corner_operator(const std::vector<SubdomainSystem>& systems,
                                         const EmbeddingMaps& maps) {
  SparseSymMatrix a(maps.wc_dim);
  for (const auto& sys : systems) {
    const auto& to_wc = maps.local_to_wc[sys.subdomain];
    for (int k = 0; k < sys.stiffness.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, k); it; ++it)
        if (it.row() <= it.col()) a.add(to_wc[it.row()], to_wc[it.col()], it.value());
  }
  a.finalize();
  return a;
}

AveragingOperator::AveragingOperator(const std::vector<SubdomainSystem>& systems,
                                     const EmbeddingMaps& maps)
    : maps_(maps) {
  weights_.resize(maps.dof_copies.size());
  for (std::size_t g = 0; g < weights_.size(); ++g) {
    const auto& copies = maps.dof_copies[g];
    auto& w = weights_[g];
    w.resize(copies.size());
    double total = 0;
    for (std::size_t c = 0; c < copies.size(); ++c) {
      w[c] = systems[copies[c].first].stiffness.coeff(copies[c].second, copies[c].second);
      total += w[c];
    }
    for (double& v : w) v /= total;
  }
}

Eigen::VectorXd AveragingOperator::average(const Eigen::VectorXd& w) const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Index>(maps_.dof_copies.size()));
  for (std::size_t g = 0; g < maps_.dof_copies.size(); ++g) {
    const auto& copies = maps_.dof_copies[g];
    for (std::size_t c = 0; c < copies.size(); ++c)
      u(g) += weights_[g][c] * w(maps_.w_offset[copies[c].first] + copies[c].second);
  }
  return u;
}

Eigen::VectorXd AveragingOperator::distribute(const Eigen::VectorXd& u) const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(maps_.w_dim);
  for (std::size_t g = 0; g < maps_.dof_copies.size(); ++g) {
    const auto& copies = maps_.dof_copies[g];
    for (std::size_t c = 0; c < copies.size(); ++c)
      w(maps_.w_offset[copies[c].first] + copies[c].second) = weights_[g][c] * u(g);
  }
  return w;
}

HarmonicExtension::HarmonicExtension(const std::vector<SubdomainSystem>& systems,
                                     const EmbeddingMaps& maps)
    : maps_(maps) {
  const int n_sub = static_cast<int>(systems.size());
  interior_.resize(n_sub);
  boundary_.resize(n_sub);
  coupling_.resize(n_sub);
  interior_factor_.reserve(n_sub);

  for (int s = 0; s < n_sub; ++s) {
    const auto& sys = systems[s];
    for (Index l = 0; l < sys.dim(); ++l) {
      if (maps.dof_copies[sys.global_dof[l]].size() >= 2)
        boundary_[s].push_back(l);
      else
        interior_[s].push_back(l);
    }
    const Index ni = static_cast<Index>(interior_[s].size());
    const Index nb = static_cast<Index>(boundary_[s].size());

    std::vector<Index> role(sys.dim());  // interior rank or ~boundary rank
    for (Index r = 0; r < ni; ++r) role[interior_[s][r]] = r;
    for (Index r = 0; r < nb; ++r) role[boundary_[s][r]] = ~r;

    std::vector<Eigen::Triplet<double>> aii, aib;
    for (int k = 0; k < sys.stiffness.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, k); it; ++it) {
        const Index rr = role[it.row()], rc = role[it.col()];
        if (rr >= 0 && rc >= 0)
          aii.emplace_back(int(rr), int(rc), it.value());
        else if (rr >= 0 && rc < 0)
          aib.emplace_back(int(rr), int(~rc), it.value());
      }
    Eigen::SparseMatrix<double> interior_block(ni, ni);
    interior_block.setFromTriplets(aii.begin(), aii.end());
    coupling_[s].resize(ni, nb);
    coupling_[s].setFromTriplets(aib.begin(), aib.end());
    interior_factor_.push_back(factorize(interior_block, FactorKind::Definite));
  }
}

void HarmonicExtension::extend(Eigen::VectorXd& w) const {
  for (std::size_t s = 0; s < interior_.size(); ++s) {
    const Index ni = static_cast<Index>(interior_[s].size());
    if (ni == 0) continue;
    Eigen::VectorXd wb(boundary_[s].size());
    for (std::size_t r = 0; r < boundary_[s].size(); ++r)
      wb(r) = w(maps_.w_offset[s] + boundary_[s][r]);
    const Eigen::VectorXd minus_coupled = -(coupling_[s] * wb);
    const Eigen::VectorXd wi = interior_factor_[s].solve(minus_coupled);
    for (Index r = 0; r < ni; ++r) w(maps_.w_offset[s] + interior_[s][r]) = wi(r);
  }
}

void HarmonicExtension::fold_interior_residual(Eigen::VectorXd& w) const {
  for (std::size_t s = 0; s < interior_.size(); ++s) {
    const Index ni = static_cast<Index>(interior_[s].size());
    if (ni == 0) continue;
    Eigen::VectorXd ri(ni);
    for (Index r = 0; r < ni; ++r) ri(r) = w(maps_.w_offset[s] + interior_[s][r]);
    const Eigen::VectorXd folded = coupling_[s].transpose() * interior_factor_[s].solve(ri);
    for (std::size_t r = 0; r < boundary_[s].size(); ++r)
      w(maps_.w_offset[s] + boundary_[s][r]) -= folded(r);
    for (Index r = 0; r < ni; ++r) w(maps_.w_offset[s] + interior_[s][r]) = 0.0;
  }
}

Eigen::VectorXd HarmonicExtension::interior_solve(int s, const Eigen::VectorXd& b) const {
  return interior_factor_[s].solve(b);
}

}  // namespace bddc
