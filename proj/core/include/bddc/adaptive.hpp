// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Pairwise generalized eigenproblems, the condition indicator, and
/// eigenvector-driven constraint enrichment.

#pragma once

#include <utility>
#include <vector>

#include "bddc/pair.hpp"

namespace bddc {

struct PairReport {
  int si = 0, sj = 0;
  std::vector<double> eigenvalues;  ///< descending, as computed
  int enforced = 0;                 ///< eigenvectors turned into constraints
  double omega_next = 0;            ///< first eigenvalue left unenforced
  bool saturated = false;           ///< vector cap hit above the threshold
  int kept = 0, dropped = 0;        ///< averages surviving / failing the rank filter
};

struct EnrichmentOptions {
  double tau = 10.0;                 ///< eigenvalue threshold
  int max_vectors = 15;              ///< per-pair enforcement cap
  bool keep_edge_constraints = false;
  int fixed_count = -1;              ///< >= 0 enforces exactly this many per pair
};

struct EnrichmentOutcome {
  std::vector<PairReport> pairs;
  double omega_tilde = 0;  ///< max of omega_next over pairs
  Index kept = 0, dropped = 0;
};

/// Substructure pairs sharing a face glob, ascending, deduplicated.
std::vector<std::pair<int, int>> face_pairs(const GlobSet& globset);

/// Solve every face pair's eigenproblem against the installed averages and
/// append one average per dominant eigenvector (faces always; edges only when
/// keep_edge_constraints). The reported omega_next values are predicted from
/// these base solves.
EnrichmentOutcome enrich_constraints(ConstraintSet& set, const GlobSet& globset,
                                     const Mesh& mesh, const DofMap& dmap,
                                     const std::vector<SubdomainSystem>& systems,
                                     const EmbeddingMaps& maps, const EnrichmentOptions& opts);

/// Largest eigenvalue per face pair for a fixed constraint set; no rows are
/// added. omega_tilde is the indicator max over pairs.
EnrichmentOutcome pair_indicator(const ConstraintSet& set, const GlobSet& globset,
                                 const Mesh& mesh, const DofMap& dmap,
                                 const std::vector<SubdomainSystem>& systems,
                                 const EmbeddingMaps& maps);

}  // namespace bddc
