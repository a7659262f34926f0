// SPDX-License-Identifier: Apache-2.0

#include "bddc/dense_eig.hpp"

#include <algorithm>
#include <cmath>

namespace bddc {

Eigen::MatrixXd PivotedQr::reconstruct() const {
  Eigen::MatrixXd qr = q * r;
  Eigen::MatrixXd a(qr.rows(), qr.cols());
  for (Index k = 0; k < static_cast<Index>(perm.size()); ++k) a.col(perm[k]) = qr.col(k);
  return a;
}

PivotedQr pivoted_qr(const Eigen::MatrixXd& a, double rel_drop_tol) {
  const Index m = a.rows();
  const Index n = a.cols();
  PivotedQr out;
  out.q = Eigen::MatrixXd::Identity(m, m);
  out.r = a;
  out.perm.resize(n);
  for (Index j = 0; j < n; ++j) out.perm[j] = j;

  const Index steps = std::min(m, n);
  for (Index k = 0; k < steps; ++k) {
    // Pivot: column with the largest remaining norm, first index on ties.
    Index best = k;
    double best_norm = out.r.col(k).tail(m - k).norm();
    for (Index j = k + 1; j < n; ++j) {
      const double nj = out.r.col(j).tail(m - k).norm();
      if (nj > best_norm) {  // strict: ties keep the earliest column
        best = j;
        best_norm = nj;
      }
    }
    if (best != k) {
      out.r.col(k).swap(out.r.col(best));
      std::swap(out.perm[k], out.perm[best]);
    }
    if (best_norm == 0.0) break;

    // Householder reflection zeroing below the diagonal of column k.
    Eigen::VectorXd x = out.r.col(k).tail(m - k);
    Eigen::VectorXd v = x;
    const double alpha = (x(0) >= 0 ? -1.0 : 1.0) * x.norm();
    v(0) -= alpha;
    const double vsq = v.squaredNorm();
    if (vsq > 0) {
      Eigen::MatrixXd block = out.r.bottomRightCorner(m - k, n - k);
      block -= (2.0 / vsq) * v * (v.transpose() * block);
      out.r.bottomRightCorner(m - k, n - k) = block;
      Eigen::MatrixXd qblock = out.q.rightCols(m - k);
      qblock -= (qblock * v) * ((2.0 / vsq) * v).transpose();
      out.q.rightCols(m - k) = qblock;
    }
    out.r(k, k) = alpha;
    for (Index i = k + 1; i < m; ++i) out.r(i, k) = 0.0;

    // Normalize the diagonal to be nonnegative.
    if (out.r(k, k) < 0) {
      out.r.row(k).tail(n - k) = -out.r.row(k).tail(n - k);
      out.q.col(k) = -out.q.col(k);
    }
  }

  const double d0 = std::abs(out.r(0, 0));
  out.rank = 0;
  for (Index k = 0; k < steps; ++k) {
    if (std::abs(out.r(k, k)) > rel_drop_tol * d0 && d0 > 0) ++out.rank;
    else break;
  }
  return out;
}

EigenReport generalized_eig_sym(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs,
                                Index k, const GeneralizedEigOptions& opts) {
  const Index n = rhs.rows();
  EigenReport report;
  report.requested = k;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rhs_eig(rhs);
  const Eigen::VectorXd d = rhs_eig.eigenvalues();  // ascending
  const double dmax = d.size() ? std::max(d(n - 1), 0.0) : 0.0;
  const double null_cut = opts.null_rel_tol * (dmax > 0 ? dmax : 1.0);

  Index nullity = 0;
  while (nullity < n && d(nullity) <= null_cut) ++nullity;
  report.rhs_nullity = nullity;

  // null(rhs) must be inside null(lhs), otherwise the pencil has no finite
  // restriction to the factorspace.
  const double lhs_scale = std::max(lhs.norm(), 1e-300);
  for (Index j = 0; j < nullity; ++j) {
    const Eigen::VectorXd z = rhs_eig.eigenvectors().col(j);
    if ((lhs * z).norm() > opts.inclusion_rel_tol * lhs_scale)
      throw NullspaceInclusionViolated("generalized_eig_sym: null(rhs) not in null(lhs)");
  }

  const Index r = n - nullity;
  if (r == 0 || k == 0) {
    report.eigenvalues.resize(0);
    report.eigenvectors.resize(n, 0);
    return report;
  }

  Eigen::MatrixXd vr = rhs_eig.eigenvectors().rightCols(r);
  Eigen::VectorXd dr_isqrt(r);
  for (Index j = 0; j < r; ++j) dr_isqrt(j) = 1.0 / std::sqrt(d(nullity + j));

  // Reduced standard problem B = D^{-1/2} V^T lhs V D^{-1/2}.
  Eigen::MatrixXd b = dr_isqrt.asDiagonal() * (vr.transpose() * lhs * vr) * dr_isqrt.asDiagonal();
  b = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bsolve(b);

  const Index take = std::min(k, r);
  report.eigenvalues.resize(take);
  report.eigenvectors.resize(n, take);
  for (Index j = 0; j < take; ++j) {
    const Index src = r - 1 - j;  // descending
    report.eigenvalues(j) = std::max(bsolve.eigenvalues()(src), 0.0);
    report.eigenvectors.col(j) = vr * (dr_isqrt.asDiagonal() * bsolve.eigenvectors().col(src));
  }
  return report;
}

}  // namespace bddc
