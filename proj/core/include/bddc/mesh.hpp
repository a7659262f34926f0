// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Structured hexahedral meshes, box decompositions, materials.

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "bddc/types.hpp"

namespace bddc {

/// Isotropic material. Scalar problems use conductivity, elasticity uses
/// Young's modulus and Poisson ratio.
struct Material {
  double conductivity = 1.0;
  double youngs = 1.0;
  double poisson = 0.3;
};

using MaterialTable = std::map<int, Material>;

/// Axis-aligned box of elements (half-open index ranges) with a material
/// override. Used for stiff inclusions crossing substructure faces.
struct MaterialRegion {
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{0, 0, 0};
  int material = 0;
};

/// Structured mesh of 8-node hexahedra on a box of unit-size subdomains.
struct Mesh {
  Physics physics = Physics::Scalar;
  std::array<int, 3> nodes_per_axis{0, 0, 0};
  std::array<int, 3> elements_per_axis{0, 0, 0};
  double h = 1.0;  ///< element edge length (cubic elements)
  std::vector<std::array<double, 3>> coords;
  std::vector<std::array<int, 8>> elements;
  std::vector<int> element_material;

  int node_count() const { return static_cast<int>(coords.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
  Index total_dofs() const { return Index(node_count()) * components(physics); }

  int node_id(int i, int j, int k) const {
    return (k * nodes_per_axis[1] + j) * nodes_per_axis[0] + i;
  }
};

/// Element-to-subdomain map plus per-node sharing sets.
struct Decomposition {
  std::array<int, 3> subdomains_per_axis{1, 1, 1};
  int subdomain_count = 1;
  std::vector<int> element_subdomain;
  std::vector<std::vector<int>> node_subdomains;  ///< sorted per node
};

/// Build an (nx x ny x nz)-subdomain cube mesh with elements_per_edge
/// elements along each subdomain edge. Subdomains are unit cubes.
Mesh build_cube_mesh(std::array<int, 3> subdomains, int elements_per_edge, Physics physics,
                     const std::vector<MaterialRegion>& regions = {});

/// Box decomposition matching build_cube_mesh.
Decomposition decompose_cube(const Mesh& mesh, std::array<int, 3> subdomains);

/// Legacy-ASCII VTK dump of the mesh with subdomain and material cell data.
void write_vtk(const std::string& path, const Mesh& mesh, const Decomposition& deco);

}  // namespace bddc
