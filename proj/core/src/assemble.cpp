// SPDX-License-Identifier: Apache-2.0

#include "bddc/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace bddc {

namespace {

struct GaussPoint {
  double xi, eta, zeta, w;
};

std::array<GaussPoint, 8> gauss_2x2x2() {
  const double g = 1.0 / std::sqrt(3.0);
  std::array<GaussPoint, 8> pts;
  int q = 0;
  for (int a : {-1, 1})
    for (int b : {-1, 1})
      for (int c : {-1, 1}) pts[q++] = {a * g, b * g, c * g, 1.0};
  return pts;
}

// Reference corner signs, VTK hexahedron ordering.
constexpr int kXi[8] = {-1, 1, 1, -1, -1, 1, 1, -1};
constexpr int kEta[8] = {-1, -1, 1, 1, -1, -1, 1, 1};
constexpr int kZeta[8] = {-1, -1, -1, -1, 1, 1, 1, 1};

Eigen::Matrix<double, 8, 3> shape_gradients_ref(double xi, double eta, double zeta) {
  Eigen::Matrix<double, 8, 3> d;
  for (int i = 0; i < 8; ++i) {
    d(i, 0) = 0.125 * kXi[i] * (1 + eta * kEta[i]) * (1 + zeta * kZeta[i]);
    d(i, 1) = 0.125 * (1 + xi * kXi[i]) * kEta[i] * (1 + zeta * kZeta[i]);
    d(i, 2) = 0.125 * (1 + xi * kXi[i]) * (1 + eta * kEta[i]) * kZeta[i];
  }
  return d;
}

double shape_value(int i, double xi, double eta, double zeta) {
  return 0.125 * (1 + xi * kXi[i]) * (1 + eta * kEta[i]) * (1 + zeta * kZeta[i]);
}

Eigen::Matrix<double, 6, 6> isotropic_stiffness_tensor(const Material& m) {
  const double lambda = m.youngs * m.poisson / ((1 + m.poisson) * (1 - 2 * m.poisson));
  const double mu = m.youngs / (2 * (1 + m.poisson));
  Eigen::Matrix<double, 6, 6> c = Eigen::Matrix<double, 6, 6>::Zero();
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) c(a, b) = lambda;
    c(a, a) = lambda + 2 * mu;
    c(3 + a, 3 + a) = mu;
  }
  return c;
}

}  // namespace

Eigen::MatrixXd element_stiffness(const std::array<std::array<double, 3>, 8>& corners,
                                  const Material& material, Physics physics) {
  const int ncomp = components(physics);
  const int ndofs = 8 * ncomp;
  Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(ndofs, ndofs);
  const auto c_tensor = isotropic_stiffness_tensor(material);

  for (const auto& gp : gauss_2x2x2()) {
    const auto dref = shape_gradients_ref(gp.xi, gp.eta, gp.zeta);
    Eigen::Matrix3d jac = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 8; ++i)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) jac(a, b) += corners[i][a] * dref(i, b);
    const double det = jac.determinant();
    if (det <= 0) throw DegenerateElement("element with nonpositive Jacobian determinant");
    const Eigen::Matrix3d jinv_t = jac.inverse().transpose();

    Eigen::Matrix<double, 8, 3> grad = dref * jinv_t.transpose();  // physical gradients

    if (physics == Physics::Scalar) {
      ke += material.conductivity * gp.w * det * (grad * grad.transpose());
    } else {
      Eigen::Matrix<double, 6, 24> b = Eigen::Matrix<double, 6, 24>::Zero();
      for (int i = 0; i < 8; ++i) {
        const double dx = grad(i, 0), dy = grad(i, 1), dz = grad(i, 2);
        b(0, 3 * i + 0) = dx;
        b(1, 3 * i + 1) = dy;
        b(2, 3 * i + 2) = dz;
        b(3, 3 * i + 0) = dy;
        b(3, 3 * i + 1) = dx;
        b(4, 3 * i + 1) = dz;
        b(4, 3 * i + 2) = dy;
        b(5, 3 * i + 0) = dz;
        b(5, 3 * i + 2) = dx;
      }
      ke += gp.w * det * (b.transpose() * c_tensor * b);
    }
  }
  return ke;
}

DofMap apply_dirichlet(const Mesh& mesh, const std::vector<DirichletSpec>& dirichlet,
                       const BoundaryValue& value) {
  const int ncomp = components(mesh.physics);
  DofMap dmap;
  dmap.dofs_per_node = ncomp;
  dmap.dof.assign(Index(mesh.node_count()) * ncomp, 0);
  dmap.value.assign(Index(mesh.node_count()) * ncomp, 0.0);

  const auto& np = mesh.nodes_per_axis;
  auto on_face = [&](int i, int j, int k, BoxFace f) {
    switch (f) {
      case BoxFace::XMin: return i == 0;
      case BoxFace::XMax: return i == np[0] - 1;
      case BoxFace::YMin: return j == 0;
      case BoxFace::YMax: return j == np[1] - 1;
      case BoxFace::ZMin: return k == 0;
      case BoxFace::ZMax: return k == np[2] - 1;
    }
    return false;
  };

  for (int k = 0; k < np[2]; ++k)
    for (int j = 0; j < np[1]; ++j)
      for (int i = 0; i < np[0]; ++i) {
        const int node = mesh.node_id(i, j, k);
        for (const auto& d : dirichlet) {
          if (!on_face(i, j, k, d.face)) continue;
          for (int c = 0; c < ncomp; ++c) {
            if (!d.constrained[c]) continue;
            dmap.dof[Index(node) * ncomp + c] = -1;
            dmap.value[Index(node) * ncomp + c] =
                value ? value(mesh.coords[node], c) : 0.0;
          }
        }
      }

  dmap.free_count = 0;
  for (auto& d : dmap.dof)
    if (d == 0) d = dmap.free_count++;
  return dmap;
}

namespace {

/// Per-material element matrix cache. Valid because the structured generator
/// produces congruent elements.
class ElementMatrixCache {
 public:
  ElementMatrixCache(const Mesh& mesh, const MaterialTable& materials)
      : mesh_(mesh), materials_(materials) {}

  const Eigen::MatrixXd& get(int element) {
    const int mat_id = mesh_.element_material[element];
    auto it = cache_.find(mat_id);
    if (it != cache_.end()) return it->second;
    const auto mat_it = materials_.find(mat_id);
    if (mat_it == materials_.end())
      throw BadProblemSpec("element references unknown material " + std::to_string(mat_id));
    std::array<std::array<double, 3>, 8> corners;
    for (int i = 0; i < 8; ++i) corners[i] = mesh_.coords[mesh_.elements[element][i]];
    return cache_.emplace(mat_id, element_stiffness(corners, mat_it->second, mesh_.physics))
        .first->second;
  }

 private:
  const Mesh& mesh_;
  const MaterialTable& materials_;
  std::map<int, Eigen::MatrixXd> cache_;
};

// Local node ids of each hexahedron face, keyed by box face direction.
const std::array<int, 4>& face_local_nodes(BoxFace f) {
  static const std::array<std::array<int, 4>, 6> faces = {{
      {0, 3, 7, 4},  // XMin
      {1, 2, 6, 5},  // XMax
      {0, 1, 5, 4},  // YMin
      {3, 2, 6, 7},  // YMax
      {0, 1, 2, 3},  // ZMin
      {4, 5, 6, 7},  // ZMax
  }};
  return faces[static_cast<int>(f)];
}

bool element_on_box_face(const Mesh& mesh, int e, BoxFace f) {
  const auto& ne = mesh.elements_per_axis;
  const int i = e % ne[0];
  const int j = (e / ne[0]) % ne[1];
  const int k = e / (ne[0] * ne[1]);
  switch (f) {
    case BoxFace::XMin: return i == 0;
    case BoxFace::XMax: return i == ne[0] - 1;
    case BoxFace::YMin: return j == 0;
    case BoxFace::YMax: return j == ne[1] - 1;
    case BoxFace::ZMin: return k == 0;
    case BoxFace::ZMax: return k == ne[2] - 1;
  }
  return false;
}

}  // namespace

std::vector<SubdomainSystem> assemble_subdomains(const Mesh& mesh, const Decomposition& deco,
                                                 const MaterialTable& materials,
                                                 const DofMap& dmap, const ProblemSpec& spec) {
  const int ncomp = components(mesh.physics);
  ElementMatrixCache cache(mesh, materials);

  std::vector<std::vector<int>> elements_of(deco.subdomain_count);
  for (int e = 0; e < mesh.element_count(); ++e)
    elements_of[deco.element_subdomain[e]].push_back(e);

  std::vector<SubdomainSystem> systems(deco.subdomain_count);
  for (int s = 0; s < deco.subdomain_count; ++s) {
    auto& sys = systems[s];
    sys.subdomain = s;

    for (int e : elements_of[s])
      for (int n : mesh.elements[e]) sys.nodes.push_back(n);
    std::sort(sys.nodes.begin(), sys.nodes.end());
    sys.nodes.erase(std::unique(sys.nodes.begin(), sys.nodes.end()), sys.nodes.end());

    std::map<Index, Index> nodecomp_to_local;
    for (int n : sys.nodes)
      for (int c = 0; c < ncomp; ++c) {
        const Index nc = Index(n) * ncomp + c;
        if (dmap.dof[nc] < 0) continue;
        nodecomp_to_local[nc] = sys.dim();
        sys.global_dof.push_back(dmap.dof[nc]);
        sys.node_comp.push_back(nc);
      }

    std::vector<Eigen::Triplet<double>> trip;
    sys.load = Eigen::VectorXd::Zero(sys.dim());

    for (int e : elements_of[s]) {
      const Eigen::MatrixXd& ke = cache.get(e);
      const auto& conn = mesh.elements[e];
      std::array<Index, 24> local{};
      std::array<double, 24> prescribed{};
      for (int i = 0; i < 8; ++i)
        for (int c = 0; c < ncomp; ++c) {
          const Index nc = Index(conn[i]) * ncomp + c;
          const auto it = nodecomp_to_local.find(nc);
          local[i * ncomp + c] = (it == nodecomp_to_local.end()) ? -1 : it->second;
          prescribed[i * ncomp + c] = dmap.dof[nc] < 0 ? dmap.value[nc] : 0.0;
        }
      const int edofs = 8 * ncomp;
      for (int a = 0; a < edofs; ++a) {
        if (local[a] < 0) continue;
        for (int b = 0; b < edofs; ++b) {
          if (local[b] >= 0) {
            if (local[b] >= local[a])
              trip.emplace_back(int(local[a]), int(local[b]), ke(a, b));
          } else if (prescribed[b] != 0.0) {
            sys.load(local[a]) -= ke(a, b) * prescribed[b];
          }
        }
      }

      // Body force / volumetric source, exact for constant data on boxes.
      const double cell = mesh.h * mesh.h * mesh.h / 8.0;
      for (int i = 0; i < 8; ++i)
        for (int c = 0; c < ncomp; ++c) {
          const Index l = local[i * ncomp + c];
          if (l < 0) continue;
          const double density =
              mesh.physics == Physics::Scalar ? spec.source : spec.body_force[c];
          sys.load(l) += density * cell;
        }

      // Surface loads on the box boundary.
      for (const auto& loadspec : spec.loads) {
        if (!element_on_box_face(mesh, e, loadspec.face)) continue;
        const double quarter_area = mesh.h * mesh.h / 4.0;
        for (int fn : face_local_nodes(loadspec.face))
          for (int c = 0; c < ncomp; ++c) {
            const Index l = local[fn * ncomp + c];
            if (l < 0) continue;
            const double t =
                mesh.physics == Physics::Scalar ? loadspec.flux : loadspec.traction[c];
            sys.load(l) += t * quarter_area;
          }
      }
    }

    Eigen::SparseMatrix<double> upper(sys.dim(), sys.dim());
    upper.setFromTriplets(trip.begin(), trip.end());
    sys.stiffness = upper.selfadjointView<Eigen::Upper>();
    sys.stiffness.makeCompressed();
  }
  return systems;
}

SparseSymMatrix assemble_global_direct(const Mesh& mesh, const MaterialTable& materials,
                                       const DofMap& dmap) {
  const int ncomp = components(mesh.physics);
  ElementMatrixCache cache(mesh, materials);
  SparseSymMatrix a(dmap.free_count);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Eigen::MatrixXd& ke = cache.get(e);
    const auto& conn = mesh.elements[e];
    const int edofs = 8 * ncomp;
    for (int aa = 0; aa < edofs; ++aa) {
      const Index ga = dmap.dof[Index(conn[aa / ncomp]) * ncomp + aa % ncomp];
      if (ga < 0) continue;
      for (int bb = 0; bb < edofs; ++bb) {
        const Index gb = dmap.dof[Index(conn[bb / ncomp]) * ncomp + bb % ncomp];
        if (gb >= ga) a.add(ga, gb, ke(aa, bb));
      }
    }
  }
  a.finalize();
  return a;
}

SparseSymMatrix assemble_global_from_subdomains(const std::vector<SubdomainSystem>& systems,
                                                Index free_count) {
  SparseSymMatrix a(free_count);
  for (const auto& sys : systems) {
    for (int k = 0; k < sys.stiffness.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, k); it; ++it)
        if (sys.global_dof[it.row()] <= sys.global_dof[it.col()])
          a.add(sys.global_dof[it.row()], sys.global_dof[it.col()], it.value());
  }
  a.finalize();
  return a;
}

Eigen::VectorXd global_rhs(const std::vector<SubdomainSystem>& systems, Index free_count) {
  const Index n = free_count;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (const auto& sys : systems)
    for (Index l = 0; l < sys.dim(); ++l) f(sys.global_dof[l]) += sys.load(l);
  return f;
}

}  // namespace bddc
