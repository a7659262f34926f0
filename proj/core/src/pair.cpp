// SPDX-License-Identifier: Apache-2.0

#include "bddc/pair.hpp"

#include <algorithm>
#include <array>

#include "bddc/dense_eig.hpp"

namespace bddc {

Eigen::VectorXd PairSpace::average_copies(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = v;
  const Index nc = n_corner(), nf = n_shared();
  for (Index t = 0; t < nf; ++t) {
    const double mean = rho_i(t) * v(nc + t) + (1.0 - rho_i(t)) * v(nc + nf + t);
    out(nc + t) = mean;
    out(nc + nf + t) = mean;
  }
  return out;
}

namespace {

Index local_of(const EmbeddingMaps& maps, Index global_dof, int subdomain) {
  for (const auto& [s, l] : maps.dof_copies[global_dof])
    if (s == subdomain) return l;
  throw Error("dof has no copy in the requested substructure");
}

/// Dense Schur complement of one substructure onto the listed local dofs.
Eigen::MatrixXd local_schur(const SubdomainSystem& sys, const std::vector<Index>& keep) {
  const Index nk = static_cast<Index>(keep.size());
  std::vector<Index> role(sys.dim(), -1);
  for (Index r = 0; r < nk; ++r) role[keep[r]] = r;
  std::vector<Index> rest;
  for (Index l = 0; l < sys.dim(); ++l)
    if (role[l] < 0) rest.push_back(l);
  const Index nr = static_cast<Index>(rest.size());
  std::vector<Index> rest_rank(sys.dim(), -1);
  for (Index r = 0; r < nr; ++r) rest_rank[rest[r]] = r;

  Eigen::MatrixXd akk = Eigen::MatrixXd::Zero(nk, nk);
  Eigen::MatrixXd ark = Eigen::MatrixXd::Zero(nr, nk);
  std::vector<Eigen::Triplet<double>> arr;
  for (int k = 0; k < sys.stiffness.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, k); it; ++it) {
      const Index r = it.row(), c = it.col();
      if (role[r] >= 0 && role[c] >= 0)
        akk(role[r], role[c]) = it.value();
      else if (role[r] < 0 && role[c] >= 0)
        ark(rest_rank[r], role[c]) = it.value();
      else if (role[r] < 0 && role[c] < 0)
        arr.emplace_back(int(rest_rank[r]), int(rest_rank[c]), it.value());
    }
  if (nr == 0) return akk;

  Eigen::SparseMatrix<double> interior(nr, nr);
  interior.setFromTriplets(arr.begin(), arr.end());
  const Factorization factor = factorize(interior, FactorKind::Definite);
  const Eigen::MatrixXd x = factor.solve(Eigen::MatrixXd(ark));
  return akk - ark.transpose() * x;
}

}  // namespace

PairSpace build_pair(const std::vector<SubdomainSystem>& systems, const EmbeddingMaps& maps,
                     const GlobSet& globset, const Mesh& mesh, const DofMap& dmap, int si,
                     int sj) {
  PairSpace pair;
  pair.si = si;
  pair.sj = sj;

  auto shares_both = [&](const Glob& g) {
    return std::binary_search(g.subdomains.begin(), g.subdomains.end(), si) &&
           std::binary_search(g.subdomains.begin(), g.subdomains.end(), sj);
  };

  for (std::size_t gi = 0; gi < globset.globs.size(); ++gi) {
    const Glob& glob = globset.globs[gi];
    if (!shares_both(glob)) continue;
    const auto dofs = glob_free_dofs(glob, mesh, dmap);
    if (glob.kind == GlobKind::Corner) {
      pair.corner_globals.insert(pair.corner_globals.end(), dofs.begin(), dofs.end());
    } else {
      pair.shared_globs.push_back(static_cast<int>(gi));
      for (Index g : dofs) {
        pair.noncorner_globals.push_back(g);
        pair.slot_glob.push_back(static_cast<int>(gi));
      }
    }
  }
  if (pair.corner_globals.empty() && pair.noncorner_globals.empty())
    throw NotAdjacent("substructures " + std::to_string(si) + " and " + std::to_string(sj) +
                      " share no interface dofs");

  std::array<std::vector<Index>, 2> outer_side;
  for (const Glob& glob : globset.globs) {
    const bool has_i = std::binary_search(glob.subdomains.begin(), glob.subdomains.end(), si);
    const bool has_j = std::binary_search(glob.subdomains.begin(), glob.subdomains.end(), sj);
    if (has_i == has_j) continue;
    const auto dofs = glob_free_dofs(glob, mesh, dmap);
    auto& list = outer_side[has_i ? 0 : 1];
    list.insert(list.end(), dofs.begin(), dofs.end());
  }
  pair.outer_globals = outer_side[0];
  pair.outer_globals.insert(pair.outer_globals.end(), outer_side[1].begin(),
                            outer_side[1].end());

  const Index nc = pair.n_corner(), nf = pair.n_shared();
  pair.rho_i.resize(nf);
  for (Index t = 0; t < nf; ++t) {
    const Index g = pair.noncorner_globals[t];
    const double di =
        systems[si].stiffness.coeff(local_of(maps, g, si), local_of(maps, g, si));
    const double dj =
        systems[sj].stiffness.coeff(local_of(maps, g, sj), local_of(maps, g, sj));
    pair.rho_i(t) = di / (di + dj);
  }

  pair.schur = Eigen::MatrixXd::Zero(pair.dim(), pair.dim());
  for (int side = 0; side < 2; ++side) {
    const int s = side == 0 ? si : sj;
    const std::vector<Index>& outer = outer_side[side];
    const Index outer_base = side == 0 ? 0 : static_cast<Index>(outer_side[0].size());
    std::vector<Index> keep;
    std::vector<Index> slot;  // pair-space position per kept local dof
    keep.reserve(nc + nf + static_cast<Index>(outer.size()));
    for (Index t = 0; t < nc; ++t) {
      keep.push_back(local_of(maps, pair.corner_globals[t], s));
      slot.push_back(t);
    }
    for (Index t = 0; t < nf; ++t) {
      keep.push_back(local_of(maps, pair.noncorner_globals[t], s));
      slot.push_back(nc + (side == 0 ? 0 : nf) + t);
    }
    for (Index t = 0; t < static_cast<Index>(outer.size()); ++t) {
      keep.push_back(local_of(maps, outer[t], s));
      slot.push_back(nc + 2 * nf + outer_base + t);
    }
    const Eigen::MatrixXd schur_s = local_schur(systems[s], keep);
    for (Index a = 0; a < schur_s.rows(); ++a)
      for (Index b = 0; b < schur_s.cols(); ++b) pair.schur(slot[a], slot[b]) += schur_s(a, b);
  }
  return pair;
}

Eigen::MatrixXd pair_admissible_basis(const PairSpace& pair, const ConstraintSet& set,
                                      const GlobSet& globset, const Mesh& mesh,
                                      const DofMap& dmap) {
  const Index nc = pair.n_corner(), nf = pair.n_shared();
  const auto by_glob = set.by_glob(globset.globs.size());

  std::vector<Eigen::VectorXd> columns;
  for (Index t = 0; t < nc; ++t) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(pair.dim());
    col(t) = 1.0;
    columns.push_back(std::move(col));
  }

  Index base = 0;
  for (int gi : pair.shared_globs) {
    const auto dofs = glob_free_dofs(globset.globs[gi], mesh, dmap);
    const Index n = static_cast<Index>(dofs.size());

    for (Index t = 0; t < n; ++t) {  // continuous directions
      Eigen::VectorXd col = Eigen::VectorXd::Zero(pair.dim());
      col(nc + base + t) = 1.0;
      col(nc + nf + base + t) = 1.0;
      columns.push_back(std::move(col));
    }

    Eigen::MatrixXd kernel;  // jump directions allowed by the averages
    if (by_glob[gi].empty()) {
      kernel = Eigen::MatrixXd::Identity(n, n);
    } else {
      Eigen::MatrixXd rows(by_glob[gi].size(), n);
      for (std::size_t a = 0; a < by_glob[gi].size(); ++a)
        rows.row(a) = set.averages[by_glob[gi][a]].weights.transpose();
      const auto qr = pivoted_qr(rows);
      const Index r = qr.rank;
      kernel = Eigen::MatrixXd::Zero(n, n - r);
      if (n > r) {
        const Eigen::MatrixXd u = qr.r.topLeftCorner(r, r);
        const Eigen::MatrixXd v = qr.r.topRightCorner(r, n - r);
        const Eigen::MatrixXd top = -u.triangularView<Eigen::Upper>().solve(v);
        for (Index a = 0; a < r; ++a) kernel.row(qr.perm[a]) = top.row(a);
        for (Index a = r; a < n; ++a) kernel(qr.perm[a], a - r) = 1.0;
      }
    }
    for (Index c = 0; c < kernel.cols(); ++c) {
      Eigen::VectorXd col = Eigen::VectorXd::Zero(pair.dim());
      col.segment(nc + base, n) = kernel.col(c);
      col.segment(nc + nf + base, n) = -kernel.col(c);
      columns.push_back(std::move(col));
    }
    base += n;
  }

  for (Index t = 0; t < pair.n_outer(); ++t) {  // the surrounding skeleton is free
    Eigen::VectorXd col = Eigen::VectorXd::Zero(pair.dim());
    col(nc + 2 * nf + t) = 1.0;
    columns.push_back(std::move(col));
  }

  Eigen::MatrixXd z(pair.dim(), static_cast<Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) z.col(static_cast<Index>(c)) = columns[c];
  return z;
}

}  // namespace bddc
