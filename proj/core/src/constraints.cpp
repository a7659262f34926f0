// SPDX-License-Identifier: Apache-2.0

#include "bddc/constraints.hpp"

#include <algorithm>

#include "bddc/dense_eig.hpp"

namespace bddc {

Index ConstraintSet::row_count(const GlobSet& globset) const {
  Index rows = 0;
  for (const auto& avg : averages)
    rows += static_cast<Index>(globset.globs[avg.glob].subdomains.size()) - 1;
  return rows;
}

std::vector<std::vector<int>> ConstraintSet::by_glob(std::size_t n_globs) const {
  std::vector<std::vector<int>> out(n_globs);
  for (std::size_t a = 0; a < averages.size(); ++a)
    out[averages[a].glob].push_back(static_cast<int>(a));
  return out;
}

std::vector<Index> glob_free_dofs(const Glob& glob, const Mesh& mesh, const DofMap& dmap) {
  std::vector<Index> dofs;
  dofs.reserve(glob.nodes.size() * dmap.dofs_per_node);
  for (int node : glob.nodes)
    for (int c = 0; c < dmap.dofs_per_node; ++c)
      if (dmap.at(node, c) >= 0) dofs.push_back(dmap.at(node, c));
  return dofs;
}

ConstraintSet arithmetic_constraints(const GlobSet& globset, const Mesh& mesh,
                                     const DofMap& dmap, bool edge_globs, bool face_globs) {
  ConstraintSet set;
  for (std::size_t gi = 0; gi < globset.globs.size(); ++gi) {
    const Glob& glob = globset.globs[gi];
    if (glob.kind == GlobKind::Corner) continue;
    if (glob.kind == GlobKind::Edge && !edge_globs) continue;
    if (glob.kind == GlobKind::Face && !face_globs) continue;

    // One unit-weight average per component, over the glob's free dofs.
    std::vector<std::pair<int, int>> node_comp;
    for (int node : glob.nodes)
      for (int c = 0; c < dmap.dofs_per_node; ++c)
        if (dmap.at(node, c) >= 0) node_comp.emplace_back(node, c);
    if (node_comp.empty()) continue;

    for (int c = 0; c < dmap.dofs_per_node; ++c) {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Index>(node_comp.size()));
      for (std::size_t t = 0; t < node_comp.size(); ++t)
        if (node_comp[t].second == c) w(t) = 1.0;
      if (w.isZero()) continue;
      set.averages.push_back({static_cast<int>(gi), std::move(w), AverageProvenance::Arithmetic});
    }
  }
  return set;
}

bool add_average(ConstraintSet& set, const GlobSet& globset, const Mesh& mesh,
                 const DofMap& dmap, GlobAverage average) {
  if (average.weights.isZero()) return false;
  std::vector<const Eigen::VectorXd*> existing;
  for (const auto& avg : set.averages)
    if (avg.glob == average.glob) existing.push_back(&avg.weights);

  if (!existing.empty()) {
    Eigen::MatrixXd stack(average.weights.size(), existing.size() + 1);
    for (std::size_t c = 0; c < existing.size(); ++c) stack.col(c) = *existing[c];
    stack.col(existing.size()) = average.weights;
    if (pivoted_qr(stack).rank <= static_cast<Index>(existing.size())) return false;
  }
  set.averages.push_back(std::move(average));
  return true;
}

namespace {

/// W^c column of one glob dof copy inside one sharer.
Index wc_index(const EmbeddingMaps& maps, Index global_dof, int subdomain) {
  for (const auto& [s, l] : maps.dof_copies[global_dof])
    if (s == subdomain) return maps.local_to_wc[s][l];
  throw Error("glob dof has no copy in its sharing substructure");
}

}  // namespace

Eigen::SparseMatrix<double> constraint_matrix(const ConstraintSet& set, const GlobSet& globset,
                                              const Mesh& mesh, const DofMap& dmap,
                                              const EmbeddingMaps& maps) {
  std::vector<Eigen::Triplet<double>> trip;
  Index row = 0;
  const auto by_glob = set.by_glob(globset.globs.size());
  for (std::size_t gi = 0; gi < globset.globs.size(); ++gi) {
    if (by_glob[gi].empty()) continue;
    const Glob& glob = globset.globs[gi];
    const auto dofs = glob_free_dofs(glob, mesh, dmap);
    const int anchor = glob.subdomains.front();
    for (int ai : by_glob[gi]) {
      const auto& w = set.averages[ai].weights;
      for (std::size_t si = 1; si < glob.subdomains.size(); ++si) {
        const int other = glob.subdomains[si];
        for (Index t = 0; t < w.size(); ++t) {
          if (w(t) == 0.0) continue;
          trip.emplace_back(int(row), int(wc_index(maps, dofs[t], anchor)), w(t));
          trip.emplace_back(int(row), int(wc_index(maps, dofs[t], other)), -w(t));
        }
        ++row;
      }
    }
  }
  Eigen::SparseMatrix<double> d(row, maps.wc_dim);
  d.setFromTriplets(trip.begin(), trip.end());
  return d;
}

Eigen::SparseMatrix<double> constraint_projector(const ConstraintSet& set,
                                                 const GlobSet& globset, const Mesh& mesh,
                                                 const DofMap& dmap, const EmbeddingMaps& maps) {
  std::vector<Eigen::Triplet<double>> trip;
  for (Index i = 0; i < maps.wc_dim; ++i) trip.emplace_back(int(i), int(i), 1.0);

  const auto by_glob = set.by_glob(globset.globs.size());
  for (std::size_t gi = 0; gi < globset.globs.size(); ++gi) {
    if (by_glob[gi].empty()) continue;
    const Glob& glob = globset.globs[gi];
    const auto dofs = glob_free_dofs(glob, mesh, dmap);
    const int m = static_cast<int>(glob.subdomains.size());
    const Index n = static_cast<Index>(dofs.size());
    const Index rows = static_cast<Index>(by_glob[gi].size()) * (m - 1);

    // Support columns: every sharer's copy of every glob dof.
    std::vector<Index> cols(static_cast<std::size_t>(m) * n);
    for (int s = 0; s < m; ++s)
      for (Index t = 0; t < n; ++t)
        cols[static_cast<std::size_t>(s) * n + t] = wc_index(maps, dofs[t], glob.subdomains[s]);

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(rows, static_cast<Index>(cols.size()));
    Index r = 0;
    for (int ai : by_glob[gi]) {
      const auto& w = set.averages[ai].weights;
      for (int si = 1; si < m; ++si) {
        block.row(r).segment(0, n) = w.transpose();
        block.row(r).segment(Index(si) * n, n) = -w.transpose();
        ++r;
      }
    }

    if (pivoted_qr(block.transpose()).rank < rows)
      throw SingularGram("dependent equality rows on one glob");
    const Eigen::MatrixXd gram = block * block.transpose();
    const Eigen::MatrixXd correction = block.transpose() * gram.llt().solve(block);
    for (Index a = 0; a < correction.rows(); ++a)
      for (Index b = 0; b < correction.cols(); ++b)
        if (correction(a, b) != 0.0)
          trip.emplace_back(int(cols[a]), int(cols[b]), -correction(a, b));
  }

  Eigen::SparseMatrix<double> p(maps.wc_dim, maps.wc_dim);
  p.setFromTriplets(trip.begin(), trip.end());
  return p;
}

}  // namespace bddc
