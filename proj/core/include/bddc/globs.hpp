// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Interface classification into corners, edges, and faces, plus
/// deterministic corner selection.

#pragma once

#include <vector>

#include "bddc/mesh.hpp"

namespace bddc {

enum class GlobKind { Corner, Edge, Face };

/// A connected set of interface nodes with a common sharing set. Faces are
/// shared by exactly two substructures, edges by more; a corner is a
/// single-node glob whose dof copies get identified directly.
struct Glob {
  GlobKind kind = GlobKind::Face;
  std::vector<int> nodes;        ///< mesh node ids, ascending
  std::vector<int> subdomains;   ///< sharing set, ascending
};

struct GlobSet {
  std::vector<Glob> globs;  ///< corners first, then edges, then faces
  /// Corners produced by pure sharing-set classification, before endpoint
  /// promotion and pair repair. Reported for diagnostics.
  int classification_corner_count = 0;

  Index count(GlobKind kind) const {
    Index n = 0;
    for (const auto& g : globs)
      if (g.kind == kind) ++n;
    return n;
  }
  std::vector<int> corner_nodes() const {
    std::vector<int> out;
    for (const auto& g : globs)
      if (g.kind == GlobKind::Corner) out.push_back(g.nodes.front());
    return out;
  }
};

/// Group interface nodes by sharing set, split groups into mesh-connected
/// components, and classify each component.
GlobSet classify_globs(const Mesh& mesh, const Decomposition& deco);

/// Promote nodes to corners until every substructure pair is safely pinned:
/// 1. edge-glob path endpoints become corners unless they sit next to an
///    interface node with a strictly larger sharing set;
/// 2. face pairs lacking three non-collinear shared corners (one corner for
///    scalar problems) promote rim vertices of the face glob, farthest from
///    the already-shared corners first, distance ties promoted together.
/// Throws CornerSelectionFailed if a pair cannot be pinned.
void select_corners(GlobSet& globset, const Mesh& mesh, const Decomposition& deco);

}  // namespace bddc
