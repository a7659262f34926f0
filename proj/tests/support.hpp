// SPDX-License-Identifier: Apache-2.0
// Shared fixtures for the test suites: canned problem specs, the assembly
// pipeline up to the embedding maps, solver wiring, and dense probes.

#pragma once

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bddc/adaptive.hpp"
#include "bddc/assemble.hpp"
#include "bddc/bddc_operator.hpp"
#include "bddc/constraints.hpp"
#include "bddc/globs.hpp"
#include "bddc/mesh.hpp"
#include "bddc/pcg.hpp"
#include "bddc/problem.hpp"
#include "bddc/schur.hpp"
#include "bddc/spaces.hpp"
#include "bddc/transform.hpp"

namespace support {

using namespace bddc;

/// Homogeneous unit-material cube: clamp one face, load the opposite one.
inline ProblemSpec cube_spec(std::array<int, 3> subdomains, int elements_per_edge,
                             Physics physics, bool clamp = true,
                             BoxFace clamp_face = BoxFace::XMin,
                             BoxFace load_face = BoxFace::XMax) {
  ProblemSpec spec;
  spec.subdomains = subdomains;
  spec.elements_per_edge = elements_per_edge;
  spec.physics = physics;
  spec.materials[0] = Material{};
  if (clamp) spec.dirichlet.push_back({clamp_face, {true, true, true}});
  LoadSpec load;
  load.face = load_face;
  load.traction = {0.0, 0.0, -1.0};
  load.flux = 1.0;
  spec.loads.push_back(load);
  return spec;
}

/// Two-by-two-by-two elasticity cube with four stiff vertical bars embedded in
/// a soft matrix. Each bar sits centered in one column of subdomains and runs
/// the full height, so it crosses the horizontal subdomain interfaces through
/// face interiors. Clamped at the bottom, pressed down from the top.
inline ProblemSpec composite_cube_spec(int elements_per_edge = 4) {
  ProblemSpec spec;
  spec.subdomains = {2, 2, 2};
  spec.elements_per_edge = elements_per_edge;
  spec.physics = Physics::Elasticity;
  spec.materials[0] = Material{1.0, 1.0e6, 0.45};
  spec.materials[1] = Material{1.0, 2.1e11, 0.30};
  const int e = elements_per_edge;
  for (int sx = 0; sx < 2; ++sx)
    for (int sy = 0; sy < 2; ++sy) {
      MaterialRegion bar;
      bar.lo = {sx * e + e / 4, sy * e + e / 4, 0};
      bar.hi = {sx * e + (3 * e) / 4, sy * e + (3 * e) / 4, 2 * e};
      bar.material = 1;
      spec.regions.push_back(bar);
    }
  spec.dirichlet.push_back({BoxFace::ZMin, {true, true, true}});
  LoadSpec load;
  load.face = BoxFace::ZMax;
  load.traction = {0.0, 0.0, -1.0};
  spec.loads.push_back(load);
  return spec;
}

/// Assembly pipeline up to the embedding maps.
struct Pipeline {
  ProblemSpec spec;
  Mesh mesh;
  Decomposition deco;
  DofMap dmap;
  std::vector<SubdomainSystem> systems;
  GlobSet globset;
  EmbeddingMaps maps;
};

inline Pipeline build_pipeline(const ProblemSpec& spec, bool promote_corners = true) {
  Pipeline p;
  p.spec = spec;
  p.mesh = build_cube_mesh(spec.subdomains, spec.elements_per_edge, spec.physics, spec.regions);
  p.deco = decompose_cube(p.mesh, spec.subdomains);
  p.dmap = apply_dirichlet(p.mesh, spec.dirichlet);
  p.systems = assemble_subdomains(p.mesh, p.deco, spec.materials, p.dmap, spec);
  p.globset = classify_globs(p.mesh, p.deco);
  if (promote_corners) select_corners(p.globset, p.mesh, p.deco);
  p.maps = build_embeddings(p.systems, p.dmap.free_count, p.globset, p.dmap);
  return p;
}

/// Everything needed to run the preconditioned interface solve. The members
/// are heap-held so the struct can be returned while internal references
/// stay valid.
struct SolverSetup {
  std::unique_ptr<HarmonicExtension> harmonic;
  std::unique_ptr<AveragingOperator> averaging;
  std::unique_ptr<InterfaceProblem> interface;
  std::unique_ptr<BddcPreconditioner> preconditioner;
};

inline SolverSetup make_solver(const Pipeline& p, const ConstraintSet& set, double t = -1.0) {
  SolverSetup s;
  s.harmonic = std::make_unique<HarmonicExtension>(p.systems, p.maps);
  s.averaging = std::make_unique<AveragingOperator>(p.systems, p.maps);
  s.interface = std::make_unique<InterfaceProblem>(p.systems, p.maps, *s.harmonic);
  auto cov = change_of_variables(set, p.globset, p.mesh, p.dmap, p.maps);
  s.preconditioner = std::make_unique<BddcPreconditioner>(p.systems, p.maps, *s.averaging,
                                                          std::move(cov), t);
  return s;
}

/// Run the preconditioned interface solve with the problem's own right hand
/// side.
inline PcgResult solve_interface(const SolverSetup& s, double tolerance = 1e-8,
                                 Index max_iterations = 500) {
  PcgOptions opts;
  opts.tolerance = tolerance;
  opts.max_iterations = max_iterations;
  const auto op = [&](const Eigen::VectorXd& v) { return s.interface->apply(v); };
  const auto pre = [&](const Eigen::VectorXd& v) { return s.preconditioner->apply(v); };
  return pcg(op, pre, s.interface->rhs(), opts);
}

/// Scatter a continuous global vector into the product space W.
inline Eigen::VectorXd continuous_to_w(const EmbeddingMaps& maps, const Eigen::VectorXd& u) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(maps.w_dim);
  for (Index g = 0; g < static_cast<Index>(maps.dof_copies.size()); ++g)
    for (const auto& [s, l] : maps.dof_copies[g]) w(maps.w_offset[s] + l) = u(g);
  return w;
}

/// Scatter a continuous global vector into the corner-continuous space W^c.
/// Corner copies share one id, so the writes agree.
inline Eigen::VectorXd continuous_to_wc(const EmbeddingMaps& maps, const Eigen::VectorXd& u) {
  Eigen::VectorXd wc = Eigen::VectorXd::Zero(maps.wc_dim);
  for (Index g = 0; g < static_cast<Index>(maps.dof_copies.size()); ++g)
    for (const auto& [s, l] : maps.dof_copies[g]) wc(maps.local_to_wc[s][l]) = u(g);
  return wc;
}

/// Materialize a matrix-free operator by probing with unit vectors.
inline Eigen::MatrixXd dense_operator(
    Index n, const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op) {
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (Index j = 0; j < n; ++j) {
    e(j) = 1.0;
    a.col(j) = op(e);
    e(j) = 0.0;
  }
  return a;
}

/// Eigenvalues (ascending) of M*S for SPD S: they solve the symmetric pencil
/// (S*M*S) v = lambda S v, which Eigen handles by Cholesky reduction.
inline Eigen::VectorXd preconditioned_spectrum(const Eigen::MatrixXd& s,
                                               const Eigen::MatrixXd& m) {
  Eigen::MatrixXd sms = s * m * s;
  sms = 0.5 * (sms + sms.transpose().eval());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sms, s,
                                                               Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  return es.eigenvalues();
}

inline Eigen::VectorXd random_vector(Index n, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

}  // namespace support
