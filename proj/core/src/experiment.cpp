// SPDX-License-Identifier: Apache-2.0

#include "bddc/experiment.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <exception>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "bddc/adaptive.hpp"
#include "bddc/assemble.hpp"
#include "bddc/bddc_operator.hpp"
#include "bddc/globs.hpp"
#include "bddc/matrix_market.hpp"
#include "bddc/pcg.hpp"
#include "bddc/schur.hpp"
#include "bddc/transform.hpp"

namespace bddc {

Mode parse_mode(const std::string& name) {
  if (name == "c") return Mode::CornersOnly;
  if (name == "c+e") return Mode::CornersEdges;
  if (name == "c+e+f") return Mode::CornersEdgesFaces;
  if (name == "c+e+f-3eigv") return Mode::ThreeEigenvectors;
  if (name == "adaptive") return Mode::Adaptive;
  throw BadProblemSpec("unknown constraint mode '" + name +
                       "' (expected c, c+e, c+e+f, c+e+f-3eigv, or adaptive)");
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::CornersOnly: return "c";
    case Mode::CornersEdges: return "c+e";
    case Mode::CornersEdgesFaces: return "c+e+f";
    case Mode::ThreeEigenvectors: return "c+e+f-3eigv";
    case Mode::Adaptive: return "adaptive";
  }
  return "?";
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string tau_label(double tau) {
  if (std::isinf(tau)) return "inf";
  std::ostringstream os;
  os.precision(4);
  os << tau;
  return os.str();
}

std::string sanitize(const std::string& label) {
  std::string out = label;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return out;
}

/// Random continuous vectors must satisfy every installed equality row.
void audit_compatibility(unsigned seed, const ConstraintSet& set, const GlobSet& globset,
                         const Mesh& mesh, const DofMap& dmap, const EmbeddingMaps& maps,
                         const std::string& label) {
  if (set.averages.empty()) return;
  const Eigen::SparseMatrix<double> rows = constraint_matrix(set, globset, mesh, dmap, maps);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd u(static_cast<Index>(maps.dof_copies.size()));
    for (Index g = 0; g < u.size(); ++g) u(g) = dist(rng);
    Eigen::VectorXd wc = Eigen::VectorXd::Zero(maps.wc_dim);
    for (Index g = 0; g < u.size(); ++g)
      for (const auto& [s, l] : maps.dof_copies[g]) wc(maps.local_to_wc[s][l]) = u(g);
    const double violation = (rows * wc).cwiseAbs().maxCoeff();
    if (violation > 1e-8)
      std::cerr << "warning: constraint row violated by a continuous vector (" << label
                << ", violation " << violation << ")\n";
  }
}

struct WorkItem {
  Mode mode;
  double tau;
  std::string label;
};

std::vector<WorkItem> plan_items(const ExperimentSpec& spec) {
  std::vector<WorkItem> items;
  for (Mode mode : spec.modes) {
    if (mode == Mode::Adaptive) {
      if (spec.tau_list.empty())
        throw BadProblemSpec("adaptive mode requires a nonempty tau list");
      for (double tau : spec.tau_list) items.push_back({mode, tau, tau_label(tau)});
    } else {
      items.push_back({mode, 0.0, mode_name(mode)});
    }
  }
  if (items.empty()) throw BadProblemSpec("no constraint modes requested");
  return items;
}

ExperimentResult run_items(const ExperimentSpec& spec, const std::vector<WorkItem>& items,
                           const char*& phase) {
  ExperimentResult result;
  const auto& problem = spec.problem;

  phase = "analysis";
  const auto t_analysis_start = std::chrono::steady_clock::now();
  const Mesh mesh =
      build_cube_mesh(problem.subdomains, problem.elements_per_edge, problem.physics,
                      problem.regions);
  const Decomposition deco = decompose_cube(mesh, problem.subdomains);
  const DofMap dmap = apply_dirichlet(mesh, problem.dirichlet);
  const std::vector<SubdomainSystem> systems =
      assemble_subdomains(mesh, deco, problem.materials, dmap, problem);

  GlobSet globset = classify_globs(mesh, deco);
  result.structure.classification_corners = globset.classification_corner_count;
  select_corners(globset, mesh, deco);

  const EmbeddingMaps maps = build_embeddings(systems, dmap.free_count, globset, dmap);
  const HarmonicExtension harmonic(systems, maps);
  const AveragingOperator averaging(systems, maps);
  const InterfaceProblem interface_problem(systems, maps, harmonic);
  const double seconds_analysis = seconds_since(t_analysis_start);

  result.structure.dofs = mesh.total_dofs();
  result.structure.free_dofs = dmap.free_count;
  result.structure.interface_dofs = maps.interface_count();
  result.structure.corners = static_cast<int>(globset.count(GlobKind::Corner));
  result.structure.edges = globset.count(GlobKind::Edge);
  result.structure.faces = globset.count(GlobKind::Face);
  result.structure.coarse_space_dim = maps.wc_dim;

  for (const auto& item : items) {
    ResultRow row;
    row.label = item.label;
    row.omega_tilde = std::numeric_limits<double>::quiet_NaN();
    row.seconds_analysis = seconds_analysis;

    phase = "factorization";
    const auto t_factorization_start = std::chrono::steady_clock::now();
    ConstraintSet set = arithmetic_constraints(
        globset, mesh, dmap,
        /*edge_globs=*/item.mode != Mode::CornersOnly,
        /*face_globs=*/item.mode == Mode::CornersEdgesFaces);

    if (item.mode == Mode::ThreeEigenvectors || item.mode == Mode::Adaptive) {
      EnrichmentOptions opts;
      opts.keep_edge_constraints = spec.keep_edge_constraints;
      if (item.mode == Mode::ThreeEigenvectors)
        opts.fixed_count = 3;
      else
        opts.tau = item.tau;
      const EnrichmentOutcome outcome =
          enrich_constraints(set, globset, mesh, dmap, systems, maps, opts);
      row.omega_tilde = outcome.omega_tilde;
    }
    row.constraint_rows = set.row_count(globset);

    ChangeOfVariables cov = change_of_variables(set, globset, mesh, dmap, maps);
    const BddcPreconditioner preconditioner(systems, maps, averaging, std::move(cov), -1.0);
    row.seconds_factorization = seconds_since(t_factorization_start);

    if (!spec.export_directory.empty()) {
      const std::string stem = spec.export_directory + "/" + sanitize(item.label);
      write_matrix_market_symmetric(stem + "_stabilized.mtx", preconditioner.stabilized());
      const ChangeOfVariables dump = change_of_variables(set, globset, mesh, dmap, maps);
      write_matrix_market(stem + "_constraints.mtx",
                          transformed_constraint_matrix(dump, maps));
    }

    audit_compatibility(spec.seed, set, globset, mesh, dmap, maps, item.label);

    phase = "iterations";
    const auto t_iterations_start = std::chrono::steady_clock::now();
    PcgOptions pcg_options;
    pcg_options.tolerance = problem.solver.tolerance;
    pcg_options.max_iterations = problem.solver.max_iterations;
    pcg_options.log = spec.iteration_log;
    try {
      const PcgResult pcg_result =
          pcg([&](const Eigen::VectorXd& v) { return interface_problem.apply(v); },
              [&](const Eigen::VectorXd& v) { return preconditioner.apply(v); },
              interface_problem.rhs(), pcg_options);
      row.kappa = pcg_result.condition_estimate;
      row.iterations = pcg_result.iterations;
    } catch (const MaxIterationsExceeded& e) {
      row.kappa = e.partial.condition_estimate;
      row.iterations = e.partial.iterations;
      row.converged = false;
      result.all_converged = false;
    }
    row.seconds_iterations = seconds_since(t_iterations_start);
    row.seconds_total =
        row.seconds_analysis + row.seconds_factorization + row.seconds_iterations;
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const std::vector<WorkItem> items = plan_items(spec);
  const char* phase = "analysis";
  try {
    return run_items(spec, items, phase);
  } catch (const Error&) {
    std::throw_with_nested(Error(std::string("experiment failed during the ") + phase +
                                 " phase"));
  }
}

void emit_table(std::ostream& out, const std::vector<ResultRow>& rows, TableFormat format,
                bool include_times) {
  auto significant = [](double v, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
  };
  auto fixed3 = [](double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    os << v;
    return os.str();
  };

  std::vector<std::string> header = {"mode_or_tau", "omega_tilde", "Nc", "kappa", "it"};
  if (include_times)
    for (const char* name : {"analysis_s", "factorization_s", "iterations_s", "total_s"})
      header.push_back(name);

  std::vector<std::vector<std::string>> body;
  for (const auto& row : rows) {
    std::vector<std::string> cells = {
        row.label,
        std::isnan(row.omega_tilde) ? "" : significant(row.omega_tilde, 4),
        std::to_string(row.constraint_rows),
        significant(row.kappa, 4),
        std::to_string(row.iterations) + (row.converged ? "" : "*"),
    };
    if (include_times) {
      cells.push_back(fixed3(row.seconds_analysis));
      cells.push_back(fixed3(row.seconds_factorization));
      cells.push_back(fixed3(row.seconds_iterations));
      cells.push_back(fixed3(row.seconds_total));
    }
    body.push_back(std::move(cells));
  }

  if (format == TableFormat::Csv) {
    for (std::size_t c = 0; c < header.size(); ++c)
      out << header[c] << (c + 1 < header.size() ? "," : "\n");
    for (const auto& cells : body)
      for (std::size_t c = 0; c < cells.size(); ++c)
        out << cells[c] << (c + 1 < cells.size() ? "," : "\n");
  } else {
    auto line = [&](const std::vector<std::string>& cells) {
      out << "|";
      for (const auto& cell : cells) out << " " << cell << " |";
      out << "\n";
    };
    line(header);
    std::vector<std::string> rule(header.size(), "---");
    line(rule);
    for (const auto& cells : body) line(cells);
  }
}

}  // namespace bddc
