// SPDX-License-Identifier: Apache-2.0

#include "bddc/transform.hpp"

#include <algorithm>
#include <numeric>

#include "bddc/dense_eig.hpp"

namespace bddc {

GroupProjector::GroupProjector(std::vector<std::vector<Index>> groups, Index dim)
    : groups_(std::move(groups)), dim_(dim) {
  std::vector<char> seen(dim, 0);
  for (const auto& g : groups_)
    for (Index id : g) {
      if (seen[id]) throw SingularGram("transformed equality groups overlap");
      seen[id] = 1;
    }
}

void GroupProjector::apply(Eigen::VectorXd& v) const {
  for (const auto& g : groups_) {
    double mean = 0;
    for (Index id : g) mean += v(id);
    mean /= static_cast<double>(g.size());
    for (Index id : g) v(id) = mean;
  }
}

Eigen::SparseMatrix<double> GroupProjector::matrix() const {
  std::vector<char> grouped(dim_, 0);
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& g : groups_) {
    const double inv = 1.0 / static_cast<double>(g.size());
    for (Index a : g) {
      grouped[a] = 1;
      for (Index b : g) trip.emplace_back(int(a), int(b), inv);
    }
  }
  for (Index i = 0; i < dim_; ++i)
    if (!grouped[i]) trip.emplace_back(int(i), int(i), 1.0);
  Eigen::SparseMatrix<double> p(dim_, dim_);
  p.setFromTriplets(trip.begin(), trip.end());
  return p;
}

namespace {

/// Complete the kept averages of one glob to a square change of variables.
GlobTransform build_glob_transform(int glob, const Eigen::MatrixXd& avg_rows) {
  const Index r_in = avg_rows.rows();
  const Index n = avg_rows.cols();
  const auto qr = pivoted_qr(avg_rows);
  if (qr.rank < r_in) throw SingularGram("dependent averages slipped past the rank filter");
  const Index r = qr.rank;

  const Eigen::MatrixXd u = qr.r.topLeftCorner(r, r);
  const Eigen::MatrixXd v = qr.r.topRightCorner(r, n - r);

  // In pivot-permuted coordinates: rows [U V] on top, identity fill below.
  Eigen::MatrixXd h_perm = Eigen::MatrixXd::Zero(n, n);
  h_perm.topLeftCorner(r, r) = u;
  h_perm.topRightCorner(r, n - r) = v;
  h_perm.bottomRightCorner(n - r, n - r).setIdentity();

  Eigen::MatrixXd t_perm = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd u_inv =
      u.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(r, r));
  t_perm.topLeftCorner(r, r) = u_inv;
  t_perm.topRightCorner(r, n - r) = -u_inv * v;
  t_perm.bottomRightCorner(n - r, n - r).setIdentity();

  GlobTransform out;
  out.glob = glob;
  out.rank = r;
  out.h.resize(n, n);
  out.t.resize(n, n);
  // Column i of the permuted frame is original column perm[i]. Rows of h and
  // columns of t stay in plain order: new variable k < r is the k-th
  // orthogonalized average, so the explicit slots are the first rank
  // positions, while the pass-through variables land on the non-pivot dofs.
  for (Index i = 0; i < n; ++i) {
    out.h.col(qr.perm[i]) = h_perm.col(i);
    out.t.row(qr.perm[i]) = t_perm.row(i);
  }
  out.explicit_slots.resize(r);
  std::iota(out.explicit_slots.begin(), out.explicit_slots.end(), Index{0});
  return out;
}

}  // namespace

ChangeOfVariables change_of_variables(const ConstraintSet& set, const GlobSet& globset,
                                      const Mesh& mesh, const DofMap& dmap,
                                      const EmbeddingMaps& maps) {
  ChangeOfVariables cov;
  const auto by_glob = set.by_glob(globset.globs.size());

  const int n_sub = static_cast<int>(maps.local_to_wc.size());
  std::vector<std::vector<Eigen::Triplet<double>>> trip(n_sub);
  std::vector<std::vector<char>> covered(n_sub);
  for (int s = 0; s < n_sub; ++s) covered[s].assign(maps.local_to_wc[s].size(), 0);

  for (std::size_t gi = 0; gi < globset.globs.size(); ++gi) {
    if (by_glob[gi].empty()) continue;
    const Glob& glob = globset.globs[gi];
    const auto dofs = glob_free_dofs(glob, mesh, dmap);
    const Index n = static_cast<Index>(dofs.size());

    Eigen::MatrixXd avg_rows(by_glob[gi].size(), n);
    for (std::size_t a = 0; a < by_glob[gi].size(); ++a)
      avg_rows.row(a) = set.averages[by_glob[gi][a]].weights.transpose();
    cov.glob_transforms.push_back(build_glob_transform(static_cast<int>(gi), avg_rows));
    const GlobTransform& gt = cov.glob_transforms.back();

    for (int s : glob.subdomains) {
      std::vector<Index> local(n);
      for (Index t = 0; t < n; ++t) {
        for (const auto& [cs, cl] : maps.dof_copies[dofs[t]])
          if (cs == s) local[t] = cl;
        covered[s][local[t]] = 1;
      }
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
          if (gt.t(a, b) != 0.0)
            trip[s].emplace_back(int(local[a]), int(local[b]), gt.t(a, b));
    }

    for (Index k = 0; k < gt.rank; ++k) {
      std::vector<Index> group;
      const Index g_dof = dofs[gt.explicit_slots[k]];
      for (int s : glob.subdomains)
        for (const auto& [cs, cl] : maps.dof_copies[g_dof])
          if (cs == s) group.push_back(maps.local_to_wc[s][cl]);
      cov.groups.push_back(std::move(group));
    }
  }

  cov.basis.resize(n_sub);
  for (int s = 0; s < n_sub; ++s) {
    const Index dim = static_cast<Index>(covered[s].size());
    for (Index l = 0; l < dim; ++l)
      if (!covered[s][l]) trip[s].emplace_back(int(l), int(l), 1.0);
    cov.basis[s].resize(dim, dim);
    cov.basis[s].setFromTriplets(trip[s].begin(), trip[s].end());
  }
  return cov;
}

Eigen::SparseMatrix<double> transformed_constraint_matrix(const ChangeOfVariables& cov,
                                                          const EmbeddingMaps& maps) {
  std::vector<Eigen::Triplet<double>> trip;
  Index row = 0;
  for (const auto& group : cov.groups)
    for (std::size_t i = 1; i < group.size(); ++i) {
      trip.emplace_back(int(row), int(group.front()), 1.0);
      trip.emplace_back(int(row), int(group[i]), -1.0);
      ++row;
    }
  Eigen::SparseMatrix<double> d(row, maps.wc_dim);
  d.setFromTriplets(trip.begin(), trip.end());
  return d;
}

GroupProjector build_projection(const ChangeOfVariables& cov, const EmbeddingMaps& maps) {
  return GroupProjector(cov.groups, maps.wc_dim);
}

}  // namespace bddc
