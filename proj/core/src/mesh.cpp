// SPDX-License-Identifier: Apache-2.0

#include "bddc/mesh.hpp"

#include <algorithm>
#include <fstream>

namespace bddc {

Mesh build_cube_mesh(std::array<int, 3> subdomains, int elements_per_edge, Physics physics,
                     const std::vector<MaterialRegion>& regions) {
  if (elements_per_edge < 1) throw BadProblemSpec("elements per subdomain edge must be >= 1");
  for (int a = 0; a < 3; ++a)
    if (subdomains[a] < 1) throw BadProblemSpec("subdomain counts must be >= 1");

  Mesh mesh;
  mesh.physics = physics;
  mesh.h = 1.0 / elements_per_edge;
  for (int a = 0; a < 3; ++a) {
    mesh.elements_per_axis[a] = subdomains[a] * elements_per_edge;
    mesh.nodes_per_axis[a] = mesh.elements_per_axis[a] + 1;
  }

  const auto& np = mesh.nodes_per_axis;
  mesh.coords.reserve(std::size_t(np[0]) * np[1] * np[2]);
  for (int k = 0; k < np[2]; ++k)
    for (int j = 0; j < np[1]; ++j)
      for (int i = 0; i < np[0]; ++i)
        mesh.coords.push_back({i * mesh.h, j * mesh.h, k * mesh.h});

  const auto& ne = mesh.elements_per_axis;
  mesh.elements.reserve(std::size_t(ne[0]) * ne[1] * ne[2]);
  mesh.element_material.reserve(mesh.elements.capacity());
  for (int k = 0; k < ne[2]; ++k)
    for (int j = 0; j < ne[1]; ++j)
      for (int i = 0; i < ne[0]; ++i) {
        mesh.elements.push_back({mesh.node_id(i, j, k), mesh.node_id(i + 1, j, k),
                                 mesh.node_id(i + 1, j + 1, k), mesh.node_id(i, j + 1, k),
                                 mesh.node_id(i, j, k + 1), mesh.node_id(i + 1, j, k + 1),
                                 mesh.node_id(i + 1, j + 1, k + 1), mesh.node_id(i, j + 1, k + 1)});
        int mat = 0;
        for (const auto& region : regions) {
          if (i >= region.lo[0] && i < region.hi[0] && j >= region.lo[1] && j < region.hi[1] &&
              k >= region.lo[2] && k < region.hi[2])
            mat = region.material;
        }
        mesh.element_material.push_back(mat);
      }
  return mesh;
}

Decomposition decompose_cube(const Mesh& mesh, std::array<int, 3> subdomains) {
  Decomposition deco;
  deco.subdomains_per_axis = subdomains;
  deco.subdomain_count = subdomains[0] * subdomains[1] * subdomains[2];
  const auto& ne = mesh.elements_per_axis;
  for (int a = 0; a < 3; ++a)
    if (ne[a] % subdomains[a] != 0)
      throw BadProblemSpec("element grid does not tile the requested subdomains");
  const std::array<int, 3> per{ne[0] / subdomains[0], ne[1] / subdomains[1],
                               ne[2] / subdomains[2]};

  deco.element_subdomain.resize(mesh.element_count());
  int e = 0;
  for (int k = 0; k < ne[2]; ++k)
    for (int j = 0; j < ne[1]; ++j)
      for (int i = 0; i < ne[0]; ++i, ++e) {
        const int si = i / per[0], sj = j / per[1], sk = k / per[2];
        deco.element_subdomain[e] = (sk * subdomains[1] + sj) * subdomains[0] + si;
      }

  deco.node_subdomains.assign(mesh.node_count(), {});
  for (e = 0; e < mesh.element_count(); ++e) {
    const int s = deco.element_subdomain[e];
    for (int n : mesh.elements[e]) {
      auto& list = deco.node_subdomains[n];
      if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
    }
  }
  for (auto& list : deco.node_subdomains) std::sort(list.begin(), list.end());
  return deco;
}

void write_vtk(const std::string& path, const Mesh& mesh, const Decomposition& deco) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << "# vtk DataFile Version 3.0\nstructured substructured mesh\nASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.node_count() << " double\n";
  for (const auto& p : mesh.coords) out << p[0] << " " << p[1] << " " << p[2] << "\n";
  out << "CELLS " << mesh.element_count() << " " << mesh.element_count() * 9 << "\n";
  for (const auto& e : mesh.elements) {
    out << 8;
    for (int n : e) out << " " << n;
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.element_count() << "\n";
  for (int e = 0; e < mesh.element_count(); ++e) out << 12 << "\n";
  out << "CELL_DATA " << mesh.element_count() << "\n";
  out << "SCALARS subdomain int 1\nLOOKUP_TABLE default\n";
  for (int s : deco.element_subdomain) out << s << "\n";
  out << "SCALARS material int 1\nLOOKUP_TABLE default\n";
  for (int m : mesh.element_material) out << m << "\n";
}

}  // namespace bddc
