// SPDX-License-Identifier: Apache-2.0

#include "bddc/problem.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bddc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& s, Index expected, int line) {
  std::istringstream in(s);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (expected >= 0 && static_cast<Index>(out.size()) != expected)
    throw BadProblemSpec("line " + std::to_string(line) + ": expected " +
                         std::to_string(expected) + " numbers in '" + s + "'");
  return out;
}

}  // namespace

BoxFace parse_box_face(const std::string& name) {
  if (name == "xmin") return BoxFace::XMin;
  if (name == "xmax") return BoxFace::XMax;
  if (name == "ymin") return BoxFace::YMin;
  if (name == "ymax") return BoxFace::YMax;
  if (name == "zmin") return BoxFace::ZMin;
  if (name == "zmax") return BoxFace::ZMax;
  throw BadProblemSpec("unknown face '" + name + "'");
}

std::string box_face_name(BoxFace f) {
  switch (f) {
    case BoxFace::XMin: return "xmin";
    case BoxFace::XMax: return "xmax";
    case BoxFace::YMin: return "ymin";
    case BoxFace::YMax: return "ymax";
    case BoxFace::ZMin: return "zmin";
    case BoxFace::ZMax: return "zmax";
  }
  return "?";
}

ProblemSpec parse_problem(std::istream& in) {
  ProblemSpec spec;
  spec.materials[0] = Material{};

  std::string section;
  std::string raw;
  int line = 0;
  int current_material = -1;

  auto section_entry = [&](const std::string& name) {
    section = name;
    if (name == "material") current_material = -1;
    if (name == "region") spec.regions.emplace_back();
    if (name == "dirichlet") spec.dirichlet.emplace_back();
    if (name == "load") spec.loads.emplace_back();
  };

  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') throw BadProblemSpec("line " + std::to_string(line) + ": bad section");
      section_entry(trim(s.substr(1, s.size() - 2)));
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw BadProblemSpec("line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));

    if (section == "mesh") {
      if (key == "subdomains") {
        auto v = parse_numbers(value, 3, line);
        spec.subdomains = {int(v[0]), int(v[1]), int(v[2])};
      } else if (key == "elements_per_edge") {
        spec.elements_per_edge = std::stoi(value);
      } else {
        throw BadProblemSpec("line " + std::to_string(line) + ": unknown mesh key " + key);
      }
    } else if (section == "physics") {
      if (key != "type")
        throw BadProblemSpec("line " + std::to_string(line) + ": unknown physics key " + key);
      if (value == "scalar") spec.physics = Physics::Scalar;
      else if (value == "elasticity") spec.physics = Physics::Elasticity;
      else throw BadProblemSpec("line " + std::to_string(line) + ": unknown physics " + value);
    } else if (section == "material") {
      if (key == "id") {
        current_material = std::stoi(value);
        spec.materials.try_emplace(current_material);
      } else {
        if (current_material < 0)
          throw BadProblemSpec("line " + std::to_string(line) + ": material id must come first");
        auto& mat = spec.materials[current_material];
        if (key == "conductivity") mat.conductivity = std::stod(value);
        else if (key == "youngs") mat.youngs = std::stod(value);
        else if (key == "poisson") mat.poisson = std::stod(value);
        else throw BadProblemSpec("line " + std::to_string(line) + ": unknown material key " + key);
      }
    } else if (section == "region") {
      auto& region = spec.regions.back();
      if (key == "material") region.material = std::stoi(value);
      else if (key == "elements") {
        auto v = parse_numbers(value, 6, line);
        region.lo = {int(v[0]), int(v[2]), int(v[4])};
        region.hi = {int(v[1]), int(v[3]), int(v[5])};
      } else {
        throw BadProblemSpec("line " + std::to_string(line) + ": unknown region key " + key);
      }
    } else if (section == "dirichlet") {
      auto& d = spec.dirichlet.back();
      if (key == "face") d.face = parse_box_face(value);
      else if (key == "components") {
        if (value == "all") d.constrained = {true, true, true};
        else {
          d.constrained = {false, false, false};
          for (char c : value) {
            if (c == 'x') d.constrained[0] = true;
            else if (c == 'y') d.constrained[1] = true;
            else if (c == 'z') d.constrained[2] = true;
            else if (c != ',' && c != ' ')
              throw BadProblemSpec("line " + std::to_string(line) + ": bad components");
          }
        }
      } else {
        throw BadProblemSpec("line " + std::to_string(line) + ": unknown dirichlet key " + key);
      }
    } else if (section == "load") {
      auto& l = spec.loads.back();
      if (key == "face") l.face = parse_box_face(value);
      else if (key == "traction") {
        auto v = parse_numbers(value, 3, line);
        l.traction = {v[0], v[1], v[2]};
      } else if (key == "flux") {
        l.flux = std::stod(value);
      } else if (key == "body") {
        auto v = parse_numbers(value, 3, line);
        spec.body_force = {v[0], v[1], v[2]};
        spec.loads.pop_back();
      } else if (key == "source") {
        spec.source = std::stod(value);
        spec.loads.pop_back();
      } else {
        throw BadProblemSpec("line " + std::to_string(line) + ": unknown load key " + key);
      }
    } else if (section == "solver") {
      if (key == "tolerance") spec.solver.tolerance = std::stod(value);
      else if (key == "max_iterations") spec.solver.max_iterations = std::stoi(value);
      else throw BadProblemSpec("line " + std::to_string(line) + ": unknown solver key " + key);
    } else {
      throw BadProblemSpec("line " + std::to_string(line) + ": unknown section " + section);
    }
  }

  // Validation.
  if (spec.elements_per_edge < 1) throw BadProblemSpec("elements_per_edge must be >= 1");
  for (int a = 0; a < 3; ++a)
    if (spec.subdomains[a] < 1) throw BadProblemSpec("subdomain counts must be >= 1");
  for (const auto& [id, mat] : spec.materials) {
    if (spec.physics == Physics::Scalar && mat.conductivity <= 0)
      throw BadProblemSpec("material " + std::to_string(id) + ": conductivity must be positive");
    if (spec.physics == Physics::Elasticity) {
      if (mat.youngs <= 0)
        throw BadProblemSpec("material " + std::to_string(id) + ": youngs must be positive");
      if (mat.poisson <= 0.0 || mat.poisson >= 0.5)
        throw BadProblemSpec("material " + std::to_string(id) + ": poisson must be in (0, 0.5)");
    }
  }
  const int total_elems = spec.subdomains[0] * spec.elements_per_edge;
  for (const auto& region : spec.regions) {
    if (spec.materials.find(region.material) == spec.materials.end())
      throw BadProblemSpec("region references unknown material " +
                           std::to_string(region.material));
    for (int a = 0; a < 3; ++a)
      if (region.lo[a] < 0 || region.hi[a] < region.lo[a])
        throw BadProblemSpec("region element ranges must be nonnegative and ordered");
  }
  (void)total_elems;
  return spec;
}

ProblemSpec parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadProblemSpec("cannot open problem file " + path);
  return parse_problem(in);
}

}  // namespace bddc
