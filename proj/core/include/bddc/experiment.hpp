// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Experiment driver: constraint-mode sweeps over one problem, result
/// tables, and matrix export.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bddc/problem.hpp"
#include "bddc/types.hpp"

namespace bddc {

enum class Mode {
  CornersOnly,         ///< "c"
  CornersEdges,        ///< "c+e"
  CornersEdgesFaces,   ///< "c+e+f"
  ThreeEigenvectors,   ///< "c+e+f-3eigv": three eigenvector constraints per face
  Adaptive,            ///< "adaptive": threshold-driven enrichment
};

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

struct ExperimentSpec {
  ProblemSpec problem;
  std::vector<Mode> modes{Mode::CornersEdgesFaces};
  std::vector<double> tau_list;  ///< adaptive sweep values (may contain inf)
  bool keep_edge_constraints = false;
  unsigned seed = 0;             ///< drives the random compatibility audit
  std::string export_directory;  ///< write Matrix Market dumps when nonempty
  std::ostream* iteration_log = nullptr;
};

struct ResultRow {
  std::string label;        ///< mode name, or tau for adaptive rows
  double omega_tilde = 0;   ///< NaN when not computed (non-eigenvalue modes)
  Index constraint_rows = 0;
  double kappa = 1.0;
  Index iterations = 0;
  bool converged = true;
  double seconds_analysis = 0, seconds_factorization = 0, seconds_iterations = 0,
         seconds_total = 0;
};

struct StructureSummary {
  Index dofs = 0;       ///< before Dirichlet elimination
  Index free_dofs = 0;
  Index interface_dofs = 0;
  int corners = 0;
  int classification_corners = 0;
  Index edges = 0, faces = 0;
  Index coarse_space_dim = 0;  ///< dim of the corner-continuous space
};

struct ExperimentResult {
  StructureSummary structure;
  std::vector<ResultRow> rows;
  bool all_converged = true;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

enum class TableFormat { Csv, Markdown };

/// Columns: mode/tau, omega-tilde, Nc, kappa (4 significant digits),
/// iterations, then the phase times unless include_times is off.
void emit_table(std::ostream& out, const std::vector<ResultRow>& rows, TableFormat format,
                bool include_times = true);

}  // namespace bddc
