// SPDX-License-Identifier: Apache-2.0
// Acceptance gate. Each criterion is one self-contained check printed as a
// single PASS/FAIL line with its elapsed time; the exit code is the number of
// failures. Run a single criterion with --criterion N.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "bddc/experiment.hpp"

#include "../oracles.hpp"
#include "../support.hpp"

namespace {

using namespace bddc;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

Eigen::MatrixXd dense(const SparseSymMatrix& a) { return Eigen::MatrixXd(a.matrix()); }

Eigen::MatrixXd dense_schur(const support::SolverSetup& s) {
  return support::dense_operator(s.interface->size(),
                                 [&](const Eigen::VectorXd& v) { return s.interface->apply(v); });
}

Eigen::MatrixXd dense_preconditioner(const support::SolverSetup& s) {
  return support::dense_operator(s.interface->size(), [&](const Eigen::VectorXd& v) {
    return s.preconditioner->apply(v);
  });
}

GlobAverage random_average(const support::Pipeline& p, int glob, std::mt19937& rng) {
  GlobAverage avg;
  avg.glob = glob;
  avg.provenance = AverageProvenance::Adaptive;
  const auto dofs = glob_free_dofs(p.globset.globs[glob], p.mesh, p.dmap);
  avg.weights = support::random_vector(static_cast<Index>(dofs.size()), rng);
  return avg;
}

/// Map a corner-continuous vector into the transformed variables by solving
/// each substructure's basis block.
Eigen::VectorXd to_transformed(const support::Pipeline& p, const ChangeOfVariables& cov,
                               const Eigen::VectorXd& wc) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(wc.size());
  for (std::size_t s = 0; s < cov.basis.size(); ++s) {
    const auto& map = p.maps.local_to_wc[s];
    Eigen::VectorXd local(map.size());
    for (std::size_t l = 0; l < map.size(); ++l) local(l) = wc(map[l]);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(cov.basis[s]);
    if (lu.info() != Eigen::Success) throw std::runtime_error("basis block is singular");
    const Eigen::VectorXd transformed = lu.solve(local);
    for (std::size_t l = 0; l < map.size(); ++l) y(map[l]) = transformed(l);
  }
  return y;
}

// --- criterion 1: substructure bookkeeping on the reference cube ------------

Verdict structural_counts() {
  const auto p =
      support::build_pipeline(support::cube_spec({2, 2, 2}, 4, Physics::Elasticity, false));
  const Index corners = p.globset.count(GlobKind::Corner);
  const Index edges = p.globset.count(GlobKind::Edge);
  const Index faces = p.globset.count(GlobKind::Face);
  const auto edge_set = arithmetic_constraints(p.globset, p.mesh, p.dmap, true, false);
  const Index edge_rows = edge_set.row_count(p.globset);
  const bool pass = p.dmap.free_count == 2187 && corners == 7 && edges == 6 && faces == 12 &&
                    edge_rows == 54 && p.maps.wc_dim == 2925;
  return {pass, fmt("dofs %lld corners %lld edges %lld faces %lld edge_rows %lld wc %lld "
                    "(want 2187/7/6/12/54/2925)",
                    static_cast<long long>(p.dmap.free_count), static_cast<long long>(corners),
                    static_cast<long long>(edges), static_cast<long long>(faces),
                    static_cast<long long>(edge_rows), static_cast<long long>(p.maps.wc_dim))};
}

// --- criterion 2: the change of variables preserves sparsity ----------------

Verdict transformed_sparsity() {
  const auto p =
      support::build_pipeline(support::cube_spec({2, 2, 2}, 4, Physics::Elasticity, false));
  const auto set = arithmetic_constraints(p.globset, p.mesh, p.dmap, true, true);

  const ConstraintSet empty;
  const auto plain_cov = change_of_variables(empty, p.globset, p.mesh, p.dmap, p.maps);
  const auto plain = assemble_transformed_operator(p.systems, p.maps, plain_cov);
  const auto projector = constraint_projector(set, p.globset, p.mesh, p.dmap, p.maps);
  const auto stabilized_plain = stabilize(plain, projector, -1.0);

  const auto cov = change_of_variables(set, p.globset, p.mesh, p.dmap, p.maps);
  const auto transformed = assemble_transformed_operator(p.systems, p.maps, cov);
  const auto group_projector = build_projection(cov, p.maps).matrix();
  const auto stabilized_transformed = stabilize(transformed, group_projector, -1.0);

  const Index nnz_plain = stabilized_plain.nonzeros();
  const Index nnz_transformed = stabilized_transformed.nonzeros();
  return {nnz_transformed < nnz_plain,
          fmt("nnz transformed %lld < untransformed %lld", static_cast<long long>(nnz_transformed),
              static_cast<long long>(nnz_plain))};
}

// --- criterion 3: planar decomposition, corners only ------------------------

Verdict planar_corners_only() {
  const auto p = support::build_pipeline(
      support::cube_spec({2, 2, 1}, 8, Physics::Elasticity, true, BoxFace::XMin, BoxFace::XMax));
  if (p.mesh.total_dofs() != 7803)
    return {false, fmt("dofs %lld, want 7803", static_cast<long long>(p.mesh.total_dofs()))};
  const ConstraintSet corners_only;
  const auto s = support::make_solver(p, corners_only);
  PcgOptions options;
  options.tolerance = 1e-8;
  options.max_iterations = 500;
  options.preconditioned_residual = true;  // the solver's natural error norm
  const auto result =
      pcg([&](const Eigen::VectorXd& v) { return s.interface->apply(v); },
          [&](const Eigen::VectorXd& v) { return s.preconditioner->apply(v); },
          s.interface->rhs(), options);
  const bool pass = result.condition_estimate >= 22.64 && result.condition_estimate <= 33.96 &&
                    result.iterations >= 10 && result.iterations <= 16;
  return {pass,
          fmt("dofs 7803 kappa %.3f (want [22.64, 33.96]) iterations %lld (want [10, 16], "
              "preconditioned residual 1e-8)",
              result.condition_estimate, static_cast<long long>(result.iterations))};
}

// --- criterion 4: two substructures make the indicator sharp ----------------

Verdict two_substructure_sharpness() {
  bool pass = true;
  std::ostringstream detail;
  for (const auto physics : {Physics::Scalar, Physics::Elasticity}) {
    const auto p = support::build_pipeline(support::cube_spec({1, 1, 2}, 4, physics));
    const auto set = arithmetic_constraints(p.globset, p.mesh, p.dmap, true, true);
    const auto indicator =
        pair_indicator(set, p.globset, p.mesh, p.dmap, p.systems, p.maps);
    const auto s = support::make_solver(p, set);
    const auto spectrum = support::preconditioned_spectrum(dense_schur(s), dense_preconditioner(s));
    const double lambda_max = spectrum(spectrum.size() - 1);
    const double omega = indicator.omega_tilde;
    const bool bounded = lambda_max <= omega * (1.0 + 1e-6);
    const bool sharp = std::abs(lambda_max - omega) <= 1e-6 * std::max(1.0, omega);
    pass = pass && bounded && sharp;
    detail << (physics == Physics::Scalar ? "scalar" : "elasticity") << ": lambda_max "
           << fmt("%.9f", lambda_max) << " omega_tilde " << fmt("%.9f", omega) << "  ";
  }
  return {pass, detail.str()};
}

// --- criterion 5: the preconditioned spectrum never dips below one ----------

Verdict spectrum_floor() {
  struct Instance {
    const char* name;
    ProblemSpec spec;
  };
  const std::vector<Instance> instances = {
      {"cube-elastic", support::cube_spec({2, 2, 2}, 4, Physics::Elasticity)},
      {"cube-scalar", support::cube_spec({2, 2, 2}, 3, Physics::Scalar)},
      {"stack-elastic", support::cube_spec({1, 1, 2}, 4, Physics::Elasticity)},
      {"planar-scalar", support::cube_spec({2, 2, 1}, 4, Physics::Scalar)},
  };
  double worst = std::numeric_limits<double>::infinity();
  std::string worst_at = "-";
  for (const auto& instance : instances) {
    const auto p = support::build_pipeline(instance.spec);
    Eigen::MatrixXd schur;  // one dense Schur per instance, shared across modes
    for (const char* mode : {"c", "c+e", "c+e+f", "adaptive"}) {
      ConstraintSet set;
      if (std::strcmp(mode, "c") != 0)
        set = arithmetic_constraints(p.globset, p.mesh, p.dmap, true,
                                     std::strcmp(mode, "c+e+f") == 0);
      if (std::strcmp(mode, "adaptive") == 0) {
        EnrichmentOptions opts;
        opts.tau = 5.0;
        opts.max_vectors = 64;
        enrich_constraints(set, p.globset, p.mesh, p.dmap, p.systems, p.maps, opts);
      }
      const auto s = support::make_solver(p, set);
      if (schur.size() == 0) schur = dense_schur(s);
      const auto spectrum = support::preconditioned_spectrum(schur, dense_preconditioner(s));
      if (spectrum(0) < worst) {
        worst = spectrum(0);
        worst_at = std::string(instance.name) + "/" + mode;
      }
    }
  }
  return {worst >= 1.0 - 1e-8,
          fmt("min eigenvalue %.12f at %s (floor 1 - 1e-8)", worst, worst_at.c_str())};
}

// --- criterion 6: threshold sweep keeps every pair under tau ----------------

Verdict threshold_sweep() {
  const auto p = support::build_pipeline(support::composite_cube_spec(4));
  bool pass = true;
  std::ostringstream detail;
  Index previous_rows = -1;
  for (const double tau : {10.0, 5.0, 2.0}) {
    auto set = arithmetic_constraints(p.globset, p.mesh, p.dmap, true, false);
    EnrichmentOptions opts;
    opts.tau = tau;
    opts.max_vectors = 64;
    opts.keep_edge_constraints = true;
    enrich_constraints(set, p.globset, p.mesh, p.dmap, p.systems, p.maps, opts);
    const Index rows = set.row_count(p.globset);
    const auto recheck = pair_indicator(set, p.globset, p.mesh, p.dmap, p.systems, p.maps);
    double worst = 0;
    for (const auto& pair : recheck.pairs) worst = std::max(worst, pair.omega_next);
    const bool under = worst <= tau * (1.0 + 1e-6);
    const bool monotone = previous_rows < 0 || rows >= previous_rows;
    pass = pass && under && monotone;
    previous_rows = rows;
    detail << fmt("tau %g: Nc %lld resolved max %.4f  ", tau, static_cast<long long>(rows),
                  worst);
  }
  return {pass, detail.str()};
}

// --- criterion 7: the preconditioned solve agrees with a direct one ---------

Verdict solve_matches_direct() {
  struct Instance {
    const char* name;
    ProblemSpec spec;
  };
  const std::vector<Instance> instances = {
      {"cube-elastic", support::cube_spec({2, 2, 2}, 4, Physics::Elasticity)},
      {"cube-scalar", support::cube_spec({2, 2, 2}, 3, Physics::Scalar)},
      {"stack-elastic", support::cube_spec({1, 1, 2}, 4, Physics::Elasticity)},
      {"planar-scalar", support::cube_spec({2, 2, 1}, 4, Physics::Scalar)},
      {"composite", support::composite_cube_spec(4)},
  };
  double worst = 0;
  std::string worst_at = "-";
  for (const auto& instance : instances) {
    const auto p = support::build_pipeline(instance.spec);
    const auto set = arithmetic_constraints(p.globset, p.mesh, p.dmap, true, true);
    const auto s = support::make_solver(p, set);
    const auto result = support::solve_interface(s, 1e-10, 2000);
    const Eigen::VectorXd u = s.interface->recover(result.x);

    const auto a = assemble_global_from_subdomains(p.systems, p.dmap.free_count);
    const Eigen::VectorXd b = global_rhs(p.systems, p.dmap.free_count);
    const Eigen::VectorXd u_direct = factorize(a).solve(b);
    const double relative = (u - u_direct).norm() / u_direct.norm();
    if (relative > worst) {
      worst = relative;
      worst_at = instance.name;
    }
  }
  return {worst <= 1e-6, fmt("worst relative error %.3e at %s (limit 1e-6)", worst,
                             worst_at.c_str())};
}

// --- criterion 8: change-of-variables blocks invert exactly -----------------

Verdict transform_inverses() {
  // Unit-weight averages produce integer basis blocks.
  const auto scalar =
      support::build_pipeline(support::cube_spec({2, 2, 2}, 3, Physics::Scalar, false));
  const auto unit_set = arithmetic_constraints(scalar.globset, scalar.mesh, scalar.dmap, true, true);
  const auto unit_cov =
      change_of_variables(unit_set, scalar.globset, scalar.mesh, scalar.dmap, scalar.maps);
  bool integer_exact = !unit_cov.glob_transforms.empty();
  for (const auto& transform : unit_cov.glob_transforms) {
    const auto is_integer = [](const Eigen::MatrixXd& m) {
      return (m.array() == m.array().round()).all();
    };
    integer_exact = integer_exact && is_integer(transform.h) && is_integer(transform.t);
  }

  // Multi-average globs (several eigenvector or component rows per glob) still
  // satisfy h * t = I to machine precision.
  Index multi_average = 0;
  double worst = 0;
  for (const auto physics : {Physics::Scalar, Physics::Elasticity}) {
    for (const unsigned seed : {1u, 2u, 3u}) {
      const auto p = support::build_pipeline(support::cube_spec({2, 2, 2}, 2, physics, false));
      auto set = arithmetic_constraints(p.globset, p.mesh, p.dmap, true, true);
      std::mt19937 rng(seed);
      for (int g = 0; g < static_cast<int>(p.globset.globs.size()); ++g)
        if (p.globset.globs[g].kind != GlobKind::Corner)
          add_average(set, p.globset, p.mesh, p.dmap, random_average(p, g, rng));
      const auto cov = change_of_variables(set, p.globset, p.mesh, p.dmap, p.maps);
      for (const auto& transform : cov.glob_transforms) {
        const Index n = transform.h.rows();
        const double residual =
            (transform.h * transform.t - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
        worst = std::max(worst, residual);
        if (transform.rank >= 2) ++multi_average;
      }
    }
  }
  const bool pass = integer_exact && multi_average >= 50 && worst <= 1e-12;
  return {pass, fmt("unit averages integer: %s, multi-average globs %lld (need >= 50), "
                    "worst |h*t - I| %.2e",
                    integer_exact ? "yes" : "no", static_cast<long long>(multi_average), worst)};
}

// --- criterion 9: constraints annihilate continuous fields ------------------

Verdict continuous_annihilation() {
  const auto p = support::build_pipeline(support::cube_spec({2, 2, 2}, 2, Physics::Elasticity));
  auto set = arithmetic_constraints(p.globset, p.mesh, p.dmap, true, true);
  std::mt19937 rng(7);
  int added = 0;
  for (int g = 0; g < static_cast<int>(p.globset.globs.size()) && added < 2; ++g)
    if (p.globset.globs[g].kind == GlobKind::Face)
      added += add_average(set, p.globset, p.mesh, p.dmap, random_average(p, g, rng));

  const auto rows = constraint_matrix(set, p.globset, p.mesh, p.dmap, p.maps);
  const auto cov = change_of_variables(set, p.globset, p.mesh, p.dmap, p.maps);
  const auto transformed_rows = transformed_constraint_matrix(cov, p.maps);
  double worst_plain = 0, worst_transformed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd u = support::random_vector(p.dmap.free_count, rng);
    const Eigen::VectorXd wc = support::continuous_to_wc(p.maps, u);
    worst_plain = std::max(worst_plain, (rows * wc).cwiseAbs().maxCoeff());
    const Eigen::VectorXd y = to_transformed(p, cov, wc);
    worst_transformed = std::max(worst_transformed, (transformed_rows * y).cwiseAbs().maxCoeff());
  }
  const bool pass = worst_plain <= 1e-10 && worst_transformed <= 1e-10;
  return {pass, fmt("100 vectors: worst residual %.2e plain, %.2e transformed (limit 1e-10)",
                    worst_plain, worst_transformed)};
}

// --- criterion 10: adaptive constraints beat arithmetic ones ----------------

Verdict adaptive_beats_arithmetic() {
  ExperimentSpec spec;
  spec.problem = support::composite_cube_spec(4);
  spec.problem.solver.max_iterations = 2000;
  spec.modes = {Mode::CornersEdgesFaces, Mode::Adaptive};
  spec.tau_list = {100.0};
  spec.keep_edge_constraints = true;
  const auto result = run_experiment(spec);
  const auto& arithmetic = result.rows[0];
  const auto& adaptive = result.rows[1];
  const bool pass = adaptive.iterations < arithmetic.iterations &&
                    adaptive.kappa < arithmetic.kappa && adaptive.converged;
  return {pass, fmt("c+e+f: kappa %.1f it %lld%s | adaptive tau 100: kappa %.1f it %lld%s",
                    arithmetic.kappa, static_cast<long long>(arithmetic.iterations),
                    arithmetic.converged ? "" : "*", adaptive.kappa,
                    static_cast<long long>(adaptive.iterations), adaptive.converged ? "" : "*")};
}

// --- criterion 11: the stabilized solve equals the saddle-point solve -------

Verdict stabilized_matches_saddle() {
  struct Instance {
    const char* name;
    ProblemSpec spec;
  };
  const std::vector<Instance> instances = {
      {"stack-scalar", support::cube_spec({1, 1, 2}, 4, Physics::Scalar)},
      {"stack-elastic", support::cube_spec({1, 1, 2}, 3, Physics::Elasticity)},
      {"planar-scalar", support::cube_spec({2, 2, 1}, 3, Physics::Scalar)},
  };
  double worst = 0;
  std::string worst_at = "-";
  std::mt19937 rng(11);
  for (const auto& instance : instances) {
    const auto p = support::build_pipeline(instance.spec);
    const auto set = arithmetic_constraints(p.globset, p.mesh, p.dmap, true, true);

    const auto cov = change_of_variables(set, p.globset, p.mesh, p.dmap, p.maps);
    const Eigen::MatrixXd a = dense(assemble_transformed_operator(p.systems, p.maps, cov));
    const Eigen::MatrixXd rows =
        Eigen::MatrixXd(transformed_constraint_matrix(cov, p.maps));
    const auto projector = build_projection(cov, p.maps);
    const AveragingOperator averaging(p.systems, p.maps);

    for (int trial = 0; trial < 2; ++trial) {
      const Eigen::VectorXd residual = support::random_vector(p.maps.wc_dim, rng);
      const Eigen::VectorXd saddle = oracle::kkt_solve(a, rows, residual);
      Eigen::VectorXd projected = residual;
      projector.apply(projected);
      for (const double t : {-1.0, 1.0, 1e6}) {
        const BddcPreconditioner preconditioner(
            p.systems, p.maps, averaging,
            change_of_variables(set, p.globset, p.mesh, p.dmap, p.maps), t);
        const Eigen::VectorXd stabilized = preconditioner.coarse_solve(projected);
        const double relative = (stabilized - saddle).norm() / saddle.norm();
        if (relative > worst) {
          worst = relative;
          worst_at = fmt("%s t=%g", instance.name, t);
        }
      }
    }
  }
  return {worst <= 1e-9,
          fmt("worst relative gap %.3e at %s (limit 1e-9)", worst, worst_at.c_str())};
}

struct Criterion {
  int number;
  const char* title;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);

  const std::vector<Criterion> criteria = {
      {1, "substructure bookkeeping", structural_counts},
      {2, "transformed operator sparsity", transformed_sparsity},
      {3, "planar corners-only conditioning", planar_corners_only},
      {4, "two-substructure indicator sharpness", two_substructure_sharpness},
      {5, "preconditioned spectrum floor", spectrum_floor},
      {6, "threshold sweep bound", threshold_sweep},
      {7, "solve agrees with direct factorization", solve_matches_direct},
      {8, "change-of-variables inverses", transform_inverses},
      {9, "continuous-field annihilation", continuous_annihilation},
      {10, "adaptive beats arithmetic on the composite", adaptive_beats_arithmetic},
      {11, "stabilized solve equals saddle-point solve", stabilized_matches_saddle},
  };

  int failures = 0;
  int ran = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.number != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Verdict verdict;
    try {
      verdict = criterion.run();
    } catch (const std::exception& e) {
      verdict = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // Two criteria carry their own time budgets.
    if (criterion.number == 1 && seconds >= 5.0) {
      verdict.pass = false;
      verdict.detail += " [exceeded 5 s budget]";
    }
    if (criterion.number == 3 && seconds >= 60.0) {
      verdict.pass = false;
      verdict.detail += " [exceeded 60 s budget]";
    }
    std::printf("criterion %2d %s  %-45s %s  (%.1fs)\n", criterion.number,
                verdict.pass ? "PASS" : "FAIL", criterion.title, verdict.detail.c_str(),
                seconds);
    std::fflush(stdout);
    failures += verdict.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no such criterion: %d\n", only);
    return 1;
  }
  if (only == 0)
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
  return failures;
}
