// SPDX-License-Identifier: Apache-2.0
// Hand-rolled reference implementations used to cross-check the library.
// Deliberately independent of the library's own linear algebra: Gaussian
// elimination with partial pivoting, row-echelon rank and nullspace, cyclic
// Jacobi eigenvalues, Cholesky reduction for generalized pencils, a textbook
// conjugate gradient, dense Schur complements, and dense KKT solves.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Index = Eigen::Index;

/// Solve a x = b by Gaussian elimination with partial pivoting. Works for
/// any invertible matrix, including indefinite KKT systems.
inline Eigen::MatrixXd gaussian_solve(Eigen::MatrixXd a, Eigen::MatrixXd b) {
  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    Index pivot = k;
    for (Index i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    if (a(pivot, k) == 0.0) throw std::runtime_error("gaussian_solve: singular matrix");
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      b.row(k).swap(b.row(pivot));
    }
    for (Index i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      a.row(i).tail(n - k) -= f * a.row(k).tail(n - k);
      b.row(i) -= f * b.row(k);
    }
  }
  Eigen::MatrixXd x = b;
  for (Index k = n - 1; k >= 0; --k) {
    for (Index i = k + 1; i < n; ++i) x.row(k) -= a(k, i) * x.row(i);
    x.row(k) /= a(k, k);
  }
  return x;
}

/// Row-echelon reduction; returns the rank against a relative tolerance.
inline Index row_rank(Eigen::MatrixXd a, double rel_tol = 1e-10) {
  const Index m = a.rows(), n = a.cols();
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0;
  Index rank = 0;
  for (Index col = 0; col < n && rank < m; ++col) {
    Index pivot = rank;
    for (Index i = rank + 1; i < m; ++i)
      if (std::abs(a(i, col)) > std::abs(a(pivot, col))) pivot = i;
    if (std::abs(a(pivot, col)) <= rel_tol * scale) continue;
    a.row(rank).swap(a.row(pivot));
    for (Index i = rank + 1; i < m; ++i) {
      const double f = a(i, col) / a(rank, col);
      a.row(i) -= f * a.row(rank);
    }
    ++rank;
  }
  return rank;
}

/// Columns spanning the nullspace of a, from the row-echelon form.
inline Eigen::MatrixXd nullspace(Eigen::MatrixXd a, double rel_tol = 1e-10) {
  const Index m = a.rows(), n = a.cols();
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Index> pivot_col;
  Index rank = 0;
  for (Index col = 0; col < n && rank < m; ++col) {
    Index pivot = rank;
    for (Index i = rank + 1; i < m; ++i)
      if (std::abs(a(i, col)) > std::abs(a(pivot, col))) pivot = i;
    if (std::abs(a(pivot, col)) <= rel_tol * scale) continue;
    a.row(rank).swap(a.row(pivot));
    for (Index i = 0; i < m; ++i) {
      if (i == rank) continue;
      const double f = a(i, col) / a(rank, col);
      a.row(i) -= f * a.row(rank);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<char> is_pivot(n, 0);
  for (Index c : pivot_col) is_pivot[c] = 1;
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n - rank);
  Index out = 0;
  for (Index free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    basis(free_col, out) = 1.0;
    for (Index r = 0; r < rank; ++r)
      basis(pivot_col[r], out) = -a(r, free_col) / a(r, pivot_col[r]);
    ++out;
  }
  return basis;
}

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi rotation method,
/// sorted ascending.
inline Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, int max_sweeps = 60) {
  const Index n = a.rows();
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= 1e-14 * scale) break;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t =
            (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  Eigen::VectorXd ev = a.diagonal();
  std::sort(ev.data(), ev.data() + n);
  return ev;
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
inline Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a) {
  const Index n = a.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = a(j, j);
    for (Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0) throw std::runtime_error("cholesky_lower: matrix not positive definite");
    l(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

/// Forward/back substitution against a lower-triangular factor.
inline Eigen::MatrixXd forward_subst(const Eigen::MatrixXd& l, Eigen::MatrixXd b) {
  const Index n = l.rows();
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < k; ++i) b.row(k) -= l(k, i) * b.row(i);
    b.row(k) /= l(k, k);
  }
  return b;
}

/// Eigenvalues (ascending) of a v = lambda b v for symmetric a and SPD b,
/// via Cholesky reduction to a standard problem solved by Jacobi rotations.
inline Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& a,
                                               const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd l = cholesky_lower(b);
  Eigen::MatrixXd c = forward_subst(l, a);                           // L^{-1} A
  c = forward_subst(l, Eigen::MatrixXd(c.transpose())).transpose();  // L^{-1} A L^{-T}
  c = 0.5 * (c + c.transpose().eval());
  return jacobi_eigenvalues(c);
}

struct CgTrace {
  Eigen::VectorXd x;
  std::vector<double> alphas, betas;
  Index iterations = 0;
};

/// Textbook conjugate gradient with the classic residual recursion.
inline CgTrace reference_cg(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& av,
                            const Eigen::VectorXd& b, double tol, Index max_iterations) {
  CgTrace trace;
  trace.x = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  const double reference = b.norm();
  for (Index it = 0; it < max_iterations; ++it) {
    if (std::sqrt(rr) <= tol * reference) break;
    const Eigen::VectorXd q = av(p);
    const double alpha = rr / p.dot(q);
    trace.x += alpha * p;
    r -= alpha * q;
    const double rr_next = r.squaredNorm();
    const double beta = rr_next / rr;
    p = r + beta * p;
    trace.alphas.push_back(alpha);
    trace.betas.push_back(beta);
    rr = rr_next;
    ++trace.iterations;
  }
  return trace;
}

/// Dense Schur complement onto the kept index set.
inline Eigen::MatrixXd dense_schur(const Eigen::MatrixXd& a, const std::vector<Index>& keep,
                                   const std::vector<Index>& drop) {
  const Index nk = static_cast<Index>(keep.size());
  const Index nd = static_cast<Index>(drop.size());
  Eigen::MatrixXd akk(nk, nk), akd(nk, nd), add(nd, nd);
  for (Index i = 0; i < nk; ++i)
    for (Index j = 0; j < nk; ++j) akk(i, j) = a(keep[i], keep[j]);
  for (Index i = 0; i < nk; ++i)
    for (Index j = 0; j < nd; ++j) akd(i, j) = a(keep[i], drop[j]);
  for (Index i = 0; i < nd; ++i)
    for (Index j = 0; j < nd; ++j) add(i, j) = a(drop[i], drop[j]);
  if (nd == 0) return akk;
  return akk - akd * gaussian_solve(add, Eigen::MatrixXd(akd.transpose()));
}

/// Primal part of the KKT system [[a, d^T], [d, 0]] [w; mu] = [r; 0].
inline Eigen::VectorXd kkt_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d,
                                 const Eigen::VectorXd& r) {
  const Index n = a.rows();
  const Index m = d.rows();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + m, n + m);
  kkt.topLeftCorner(n, n) = a;
  kkt.topRightCorner(n, m) = d.transpose();
  kkt.bottomLeftCorner(m, n) = d;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  rhs.head(n) = r;
  const Eigen::VectorXd sol = gaussian_solve(kkt, rhs);
  return sol.head(n);
}

/// Orthogonal projector onto null(d) for a full-row-rank d.
inline Eigen::MatrixXd nullspace_projector(const Eigen::MatrixXd& d) {
  const Index n = d.cols();
  const Eigen::MatrixXd gram = d * d.transpose();
  return Eigen::MatrixXd::Identity(n, n) - d.transpose() * gaussian_solve(gram, d);
}

/// The six rigid-body displacement modes evaluated at the given nodes,
/// one mode per column, dof order node-major with components fastest.
inline Eigen::MatrixXd rigid_body_modes(const std::vector<std::array<double, 3>>& coords) {
  const Index n = static_cast<Index>(coords.size());
  Eigen::MatrixXd modes = Eigen::MatrixXd::Zero(3 * n, 6);
  for (Index i = 0; i < n; ++i) {
    const double x = coords[i][0], y = coords[i][1], z = coords[i][2];
    modes(3 * i + 0, 0) = 1.0;
    modes(3 * i + 1, 1) = 1.0;
    modes(3 * i + 2, 2) = 1.0;
    modes(3 * i + 1, 3) = -z;  // rotation about x
    modes(3 * i + 2, 3) = y;
    modes(3 * i + 0, 4) = z;  // rotation about y
    modes(3 * i + 2, 4) = -x;
    modes(3 * i + 0, 5) = -y;  // rotation about z
    modes(3 * i + 1, 5) = x;
  }
  return modes;
}

}  // namespace oracle
