// SPDX-License-Identifier: Apache-2.0
// Experiment driver: read a problem description, sweep constraint modes, and
// print a result table (CSV by default, Markdown for ".md" outputs).

#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bddc/experiment.hpp"
#include "bddc/problem.hpp"

namespace {

double parse_tau(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size())
    throw CLI::ValidationError("--tau", "expected a number or 'inf', got '" + text + "'");
  return value;
}

bool wants_markdown(const std::string& path) {
  return path.size() >= 3 && path.compare(path.size() - 3, 3, ".md") == 0;
}

void print_error_chain(const std::exception& e, int depth) {
  std::cerr << (depth == 0 ? "error: " : "  caused by: ") << e.what() << "\n";
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& nested) {
    print_error_chain(nested, depth + 1);
  } catch (...) {
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BDDC experiments on structured box meshes"};

  std::string spec_path;
  std::vector<std::string> mode_names;
  std::vector<std::string> tau_texts;
  double tolerance = 0;
  std::string out_path;
  std::string export_dir;
  bool keep_edge_constraints = false;
  unsigned seed = 0;

  app.add_option("--spec", spec_path, "problem description file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--mode", mode_names,
                 "constraint modes to run: c, c+e, c+e+f, c+e+f-3eigv, adaptive "
                 "(repeatable or comma-separated; default c+e+f)")
      ->delimiter(',');
  app.add_option("--tau", tau_texts,
                 "adaptive eigenvalue thresholds, numbers or 'inf' "
                 "(repeatable or comma-separated)")
      ->delimiter(',');
  app.add_option("--tol", tolerance,
                 "relative residual tolerance, overrides the problem file")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path,
                 "write the table here instead of stdout; '.md' selects Markdown");
  app.add_option("--export-matrices", export_dir,
                 "directory for Matrix Market dumps of the coarse operator and "
                 "constraint rows")
      ->check(CLI::ExistingDirectory);
  app.add_flag("--keep-edge-constraints", keep_edge_constraints,
               "keep edge components of adaptive constraints instead of dropping them");
  app.add_option("--seed", seed, "seed for the randomized constraint compatibility audit");

  CLI11_PARSE(app, argc, argv);

  try {
    bddc::ExperimentSpec spec;
    spec.problem = bddc::parse_problem_file(spec_path);
    if (!mode_names.empty()) {
      spec.modes.clear();
      for (const std::string& name : mode_names)
        spec.modes.push_back(bddc::parse_mode(name));
    }
    for (const std::string& text : tau_texts) spec.tau_list.push_back(parse_tau(text));
    if (tolerance > 0) spec.problem.solver.tolerance = tolerance;
    spec.keep_edge_constraints = keep_edge_constraints;
    spec.seed = seed;
    spec.export_directory = export_dir;

    const bddc::ExperimentResult result = bddc::run_experiment(spec);

    const auto& s = result.structure;
    std::cerr << "dofs " << s.dofs << " (" << s.free_dofs << " free, " << s.interface_dofs
              << " on the interface)\n"
              << "globs: " << s.corners << " corners (" << s.classification_corners
              << " before promotion), " << s.edges << " edges, " << s.faces << " faces\n"
              << "corner-continuous space dimension " << s.coarse_space_dim << "\n";

    if (out_path.empty()) {
      bddc::emit_table(std::cout, result.rows, bddc::TableFormat::Csv);
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "error: cannot open '" << out_path << "' for writing\n";
        return 1;
      }
      bddc::emit_table(out, result.rows,
                       wants_markdown(out_path) ? bddc::TableFormat::Markdown
                                                : bddc::TableFormat::Csv);
    }
    return result.all_converged ? 0 : 2;
  } catch (const std::exception& e) {
    print_error_chain(e, 0);
    return 1;
  }
}
