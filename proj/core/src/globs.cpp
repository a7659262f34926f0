// SPDX-License-Identifier: Apache-2.0

#include "bddc/globs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <unordered_set>

namespace bddc {

namespace {

struct GridCoords {
  int i, j, k;
};

GridCoords grid_of(const Mesh& mesh, int node) {
  const int nx = mesh.nodes_per_axis[0], ny = mesh.nodes_per_axis[1];
  return {node % nx, (node / nx) % ny, node / (nx * ny)};
}

/// Grid 6-neighborhood (nodes joined by an element edge).
std::vector<int> grid_neighbors(const Mesh& mesh, int node) {
  const auto g = grid_of(mesh, node);
  const auto& np = mesh.nodes_per_axis;
  std::vector<int> out;
  out.reserve(6);
  if (g.i > 0) out.push_back(mesh.node_id(g.i - 1, g.j, g.k));
  if (g.i + 1 < np[0]) out.push_back(mesh.node_id(g.i + 1, g.j, g.k));
  if (g.j > 0) out.push_back(mesh.node_id(g.i, g.j - 1, g.k));
  if (g.j + 1 < np[1]) out.push_back(mesh.node_id(g.i, g.j + 1, g.k));
  if (g.k > 0) out.push_back(mesh.node_id(g.i, g.j, g.k - 1));
  if (g.k + 1 < np[2]) out.push_back(mesh.node_id(g.i, g.j, g.k + 1));
  return out;
}

int kind_rank(GlobKind k) { return k == GlobKind::Corner ? 0 : (k == GlobKind::Edge ? 1 : 2); }

void sort_canonical(std::vector<Glob>& globs) {
  std::sort(globs.begin(), globs.end(), [](const Glob& a, const Glob& b) {
    if (kind_rank(a.kind) != kind_rank(b.kind)) return kind_rank(a.kind) < kind_rank(b.kind);
    return a.nodes.front() < b.nodes.front();
  });
}

bool strict_superset(const std::vector<int>& big, const std::vector<int>& small) {
  return big.size() > small.size() &&
         std::includes(big.begin(), big.end(), small.begin(), small.end());
}

double squared_distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

GlobSet classify_globs(const Mesh& mesh, const Decomposition& deco) {
  std::map<std::vector<int>, std::vector<int>> groups;
  for (int n = 0; n < mesh.node_count(); ++n)
    if (deco.node_subdomains[n].size() >= 2) groups[deco.node_subdomains[n]].push_back(n);

  GlobSet out;
  for (const auto& [sharers, nodes] : groups) {
    std::unordered_set<int> pending(nodes.begin(), nodes.end());
    for (int seed : nodes) {
      if (!pending.count(seed)) continue;
      Glob glob;
      glob.subdomains = sharers;
      std::queue<int> frontier;
      frontier.push(seed);
      pending.erase(seed);
      while (!frontier.empty()) {
        const int n = frontier.front();
        frontier.pop();
        glob.nodes.push_back(n);
        for (int nb : grid_neighbors(mesh, n))
          if (pending.count(nb)) {
            pending.erase(nb);
            frontier.push(nb);
          }
      }
      std::sort(glob.nodes.begin(), glob.nodes.end());
      if (sharers.size() == 2)
        glob.kind = GlobKind::Face;
      else if (glob.nodes.size() == 1)
        glob.kind = GlobKind::Corner;
      else
        glob.kind = GlobKind::Edge;
      out.globs.push_back(std::move(glob));
    }
  }
  out.classification_corner_count = static_cast<int>(out.count(GlobKind::Corner));
  sort_canonical(out.globs);
  return out;
}

namespace {

class CornerSelection {
 public:
  CornerSelection(GlobSet& globset, const Mesh& mesh, const Decomposition& deco)
      : globset_(globset), mesh_(mesh), deco_(deco) {
    for (const auto& g : globset_.globs)
      if (g.kind == GlobKind::Corner) corners_.push_back(g.nodes.front());
  }

  void run() {
    promote_edge_endpoints();
    repair_pairs();
    std::erase_if(globset_.globs, [](const Glob& g) { return g.nodes.empty(); });
    sort_canonical(globset_.globs);
  }

 private:
  // Index-based: pushing the new corner glob may reallocate the glob vector.
  void promote(std::size_t source, int node) {
    auto& nodes = globset_.globs[source].nodes;
    nodes.erase(std::find(nodes.begin(), nodes.end(), node));
    Glob corner;
    corner.kind = GlobKind::Corner;
    corner.nodes = {node};
    corner.subdomains = deco_.node_subdomains[node];
    globset_.globs.push_back(std::move(corner));
    corners_.push_back(node);
  }

  int in_glob_neighbors(const std::unordered_set<int>& members, int node) const {
    int count = 0;
    for (int nb : grid_neighbors(mesh_, node)) count += members.count(nb) ? 1 : 0;
    return count;
  }

  void promote_edge_endpoints() {
    const std::size_t n_globs = globset_.globs.size();
    for (std::size_t gi = 0; gi < n_globs; ++gi) {
      if (globset_.globs[gi].kind != GlobKind::Edge) continue;
      const std::unordered_set<int> members(globset_.globs[gi].nodes.begin(),
                                            globset_.globs[gi].nodes.end());
      std::vector<int> promoted;
      for (int node : globset_.globs[gi].nodes) {
        if (in_glob_neighbors(members, node) > 1) continue;  // not a path endpoint
        bool next_to_bigger = false;
        for (int nb : grid_neighbors(mesh_, node))
          if (strict_superset(deco_.node_subdomains[nb], globset_.globs[gi].subdomains)) {
            next_to_bigger = true;
            break;
          }
        if (!next_to_bigger) promoted.push_back(node);
      }
      for (int node : promoted) promote(gi, node);
    }
  }

  std::vector<int> shared_corners(const std::vector<int>& pair) const {
    std::vector<int> out;
    for (int c : corners_)
      if (std::includes(deco_.node_subdomains[c].begin(), deco_.node_subdomains[c].end(),
                        pair.begin(), pair.end()))
        out.push_back(c);
    return out;
  }

  bool pinned(const std::vector<int>& shared) const {
    if (mesh_.physics == Physics::Scalar) return !shared.empty();
    if (shared.size() < 3) return false;
    // Three non-collinear points exclude relative rigid motion.
    const auto& p0 = mesh_.coords[shared[0]];
    for (std::size_t a = 1; a < shared.size(); ++a) {
      const auto& p1 = mesh_.coords[shared[a]];
      const double u[3] = {p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]};
      for (std::size_t b = a + 1; b < shared.size(); ++b) {
        const auto& p2 = mesh_.coords[shared[b]];
        const double v[3] = {p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]};
        const double cx = u[1] * v[2] - u[2] * v[1];
        const double cy = u[2] * v[0] - u[0] * v[2];
        const double cz = u[0] * v[1] - u[1] * v[0];
        if (cx * cx + cy * cy + cz * cz > 1e-16) return true;
      }
    }
    return false;
  }

  /// Candidates sorted farthest-from-existing-corners first, node id breaking
  /// exact ties; groups of equal distance are promoted together.
  void promote_candidates(std::size_t glob, std::vector<int> candidates,
                          const std::vector<int>& pair) {
    while (!candidates.empty()) {
      auto shared = shared_corners(pair);
      if (pinned(shared)) return;
      std::vector<std::pair<double, int>> ranked;
      for (int node : candidates) {
        double dmin = std::numeric_limits<double>::infinity();
        for (int c : shared)
          dmin = std::min(dmin, squared_distance(mesh_.coords[node], mesh_.coords[c]));
        ranked.emplace_back(dmin, node);
      }
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      const double top = ranked.front().first;
      std::vector<int> group;
      for (const auto& [d, node] : ranked)
        if (d == top || std::abs(d - top) <= 1e-9 * std::max(1.0, top)) group.push_back(node);
      for (int node : group) {
        promote(glob, node);
        candidates.erase(std::find(candidates.begin(), candidates.end(), node));
      }
    }
  }

  void repair_pairs() {
    std::vector<std::size_t> faces;
    for (std::size_t gi = 0; gi < globset_.globs.size(); ++gi)
      if (globset_.globs[gi].kind == GlobKind::Face) faces.push_back(gi);
    std::sort(faces.begin(), faces.end(), [&](std::size_t a, std::size_t b) {
      if (globset_.globs[a].subdomains != globset_.globs[b].subdomains)
        return globset_.globs[a].subdomains < globset_.globs[b].subdomains;
      return globset_.globs[a].nodes.front() < globset_.globs[b].nodes.front();
    });

    for (std::size_t gi : faces) {
      const std::vector<int> pair = globset_.globs[gi].subdomains;
      if (pinned(shared_corners(pair))) continue;

      const auto& nodes = globset_.globs[gi].nodes;
      const std::unordered_set<int> members(nodes.begin(), nodes.end());
      std::vector<int> rim;
      for (int node : nodes)
        if (in_glob_neighbors(members, node) <= 2) rim.push_back(node);
      promote_candidates(gi, rim, pair);

      if (!pinned(shared_corners(pair)))
        promote_candidates(gi, globset_.globs[gi].nodes, pair);  // copy: promote mutates
      if (!pinned(shared_corners(pair)))
        throw CornerSelectionFailed("cannot pin substructure pair " + std::to_string(pair[0]) +
                                    "," + std::to_string(pair[1]) +
                                    ": too few non-collinear shared corners");
    }
  }

  GlobSet& globset_;
  const Mesh& mesh_;
  const Decomposition& deco_;
  std::vector<int> corners_;
};

}  // namespace

void select_corners(GlobSet& globset, const Mesh& mesh, const Decomposition& deco) {
  CornerSelection(globset, mesh, deco).run();
}

}  // namespace bddc
