// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Plain-text problem description: mesh, physics, materials, BCs, loads.

#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "bddc/mesh.hpp"

namespace bddc {

enum class BoxFace { XMin, XMax, YMin, YMax, ZMin, ZMax };

BoxFace parse_box_face(const std::string& name);
std::string box_face_name(BoxFace f);

struct DirichletSpec {
  BoxFace face = BoxFace::XMin;
  std::array<bool, 3> constrained{true, true, true};  ///< per component
};

struct LoadSpec {
  BoxFace face = BoxFace::XMax;
  std::array<double, 3> traction{0.0, 0.0, 0.0};  ///< elasticity
  double flux = 0.0;                              ///< scalar
};

struct SolverParams {
  double tolerance = 1e-8;
  int max_iterations = 500;
};

/// Parsed problem description. Sections: [mesh], [physics], [material]
/// (repeatable), [region] (repeatable), [dirichlet] (repeatable), [load]
/// (repeatable), [solver].
struct ProblemSpec {
  std::array<int, 3> subdomains{1, 1, 1};
  int elements_per_edge = 1;
  Physics physics = Physics::Scalar;
  MaterialTable materials;
  std::vector<MaterialRegion> regions;
  std::vector<DirichletSpec> dirichlet;
  std::vector<LoadSpec> loads;
  std::array<double, 3> body_force{0.0, 0.0, 0.0};
  double source = 0.0;
  SolverParams solver;
};

/// Parse and validate. Throws BadProblemSpec with a line reference.
ProblemSpec parse_problem(std::istream& in);
ProblemSpec parse_problem_file(const std::string& path);

}  // namespace bddc
