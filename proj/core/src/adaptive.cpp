// SPDX-License-Identifier: Apache-2.0

#include "bddc/adaptive.hpp"

#include <algorithm>
#include <cmath>

#include "bddc/dense_eig.hpp"

namespace bddc {

std::vector<std::pair<int, int>> face_pairs(const GlobSet& globset) {
  std::vector<std::pair<int, int>> pairs;
  for (const auto& glob : globset.globs)
    if (glob.kind == GlobKind::Face)
      pairs.emplace_back(glob.subdomains[0], glob.subdomains[1]);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

namespace {

struct PairSolve {
  PairSpace space;
  Eigen::MatrixXd admissible;  ///< Z
  EigenReport eig;
};

PairSolve solve_pair(const ConstraintSet& set, const GlobSet& globset, const Mesh& mesh,
                     const DofMap& dmap, const std::vector<SubdomainSystem>& systems,
                     const EmbeddingMaps& maps, int si, int sj, Index request) {
  PairSolve out;
  out.space = build_pair(systems, maps, globset, mesh, dmap, si, sj);
  out.admissible = pair_admissible_basis(out.space, set, globset, mesh, dmap);

  const Eigen::MatrixXd& z = out.admissible;
  Eigen::MatrixXd jump = z;
  for (Index c = 0; c < z.cols(); ++c)
    jump.col(c) -= out.space.average_copies(z.col(c));

  const Eigen::MatrixXd s_jump = out.space.schur * jump;
  const Eigen::MatrixXd lhs = jump.transpose() * s_jump;
  const Eigen::MatrixXd rhs = z.transpose() * (out.space.schur * z);
  out.eig = generalized_eig_sym(lhs, rhs, std::min(request, z.cols()));
  return out;
}

/// Jump functional of one eigenvector as a weight vector over the non-corner
/// slots: rho-weighted difference of the Schur image of its jump part.
Eigen::VectorXd jump_functional(const PairSpace& pair, const Eigen::VectorXd& w) {
  const Eigen::VectorXd d = pair.schur * (w - pair.average_copies(w));
  const Index nc = pair.n_corner(), nf = pair.n_shared();
  Eigen::VectorXd a(nf);
  for (Index t = 0; t < nf; ++t)
    a(t) = (1.0 - pair.rho_i(t)) * d(nc + t) - pair.rho_i(t) * d(nc + nf + t);
  return a;
}

int count_above(const Eigen::VectorXd& values, double tau) {
  int k = 0;
  while (k < values.size() && values(k) > tau) ++k;
  return k;
}

EnrichmentOutcome run_pairs(ConstraintSet* enrich_into, const ConstraintSet& base,
                            const GlobSet& globset, const Mesh& mesh, const DofMap& dmap,
                            const std::vector<SubdomainSystem>& systems,
                            const EmbeddingMaps& maps, const EnrichmentOptions& opts,
                            Index request) {
  EnrichmentOutcome outcome;
  for (const auto& [si, sj] : face_pairs(globset)) {
    const PairSolve solve =
        solve_pair(base, globset, mesh, dmap, systems, maps, si, sj, request);
    PairReport report;
    report.si = si;
    report.sj = sj;
    const auto& lambda = solve.eig.eigenvalues;
    report.eigenvalues.assign(lambda.data(), lambda.data() + lambda.size());

    if (enrich_into) {
      if (opts.fixed_count >= 0)
        report.enforced = std::min<int>(opts.fixed_count, static_cast<int>(lambda.size()));
      else
        report.enforced = std::min(count_above(lambda, opts.tau), opts.max_vectors);
      report.omega_next =
          report.enforced < static_cast<int>(lambda.size()) ? lambda(report.enforced) : 0.0;
      report.saturated = report.omega_next > opts.tau && opts.fixed_count < 0;

      for (int m = 0; m < report.enforced; ++m) {
        const Eigen::VectorXd functional =
            jump_functional(solve.space, solve.admissible * solve.eig.eigenvectors.col(m));
        const double scale = functional.norm();
        // Split per glob; each surviving piece becomes its own average.
        Index base_slot = 0;
        for (int gi : solve.space.shared_globs) {
          const auto dofs = glob_free_dofs(globset.globs[gi], mesh, dmap);
          const Index n = static_cast<Index>(dofs.size());
          Eigen::VectorXd piece = functional.segment(base_slot, n);
          base_slot += n;
          if (piece.norm() <= 1e-12 * scale) continue;
          if (globset.globs[gi].kind == GlobKind::Edge && !opts.keep_edge_constraints)
            continue;
          Index top;
          piece.cwiseAbs().maxCoeff(&top);
          piece /= piece(top) < 0 ? -piece.norm() : piece.norm();
          if (add_average(*enrich_into, globset, mesh, dmap,
                          {gi, std::move(piece), AverageProvenance::Adaptive}))
            ++report.kept;
          else
            ++report.dropped;
        }
      }
    } else {
      report.enforced = 0;
      report.omega_next = lambda.size() > 0 ? lambda(0) : 0.0;
    }

    outcome.omega_tilde = std::max(outcome.omega_tilde, report.omega_next);
    outcome.kept += report.kept;
    outcome.dropped += report.dropped;
    outcome.pairs.push_back(std::move(report));
  }
  return outcome;
}

}  // namespace

EnrichmentOutcome enrich_constraints(ConstraintSet& set, const GlobSet& globset,
                                     const Mesh& mesh, const DofMap& dmap,
                                     const std::vector<SubdomainSystem>& systems,
                                     const EmbeddingMaps& maps, const EnrichmentOptions& opts) {
  const ConstraintSet base = set;  // every pair is solved against the same base
  const Index request =
      (opts.fixed_count >= 0 ? opts.fixed_count : opts.max_vectors) + 1;
  return run_pairs(&set, base, globset, mesh, dmap, systems, maps, opts, request);
}

EnrichmentOutcome pair_indicator(const ConstraintSet& set, const GlobSet& globset,
                                 const Mesh& mesh, const DofMap& dmap,
                                 const std::vector<SubdomainSystem>& systems,
                                 const EmbeddingMaps& maps) {
  return run_pairs(nullptr, set, globset, mesh, dmap, systems, maps, EnrichmentOptions{}, 1);
}

}  // namespace bddc
