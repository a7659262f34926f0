// SPDX-License-Identifier: Apache-2.0

#include "bddc/sparse.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cassert>

namespace bddc {

void SparseSymMatrix::add(Index row, Index col, double value) {
  assert(!finalized_);
  assert(row >= 0 && row < n_ && col >= 0 && col < n_);
  if (row > col) std::swap(row, col);
  upper_.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
}

void SparseSymMatrix::finalize() {
  assert(!finalized_);
  Eigen::SparseMatrix<double> upper(n_, n_);
  upper.setFromTriplets(upper_.begin(), upper_.end());  // duplicates summed
  upper_.clear();
  upper_.shrink_to_fit();
  full_ = upper.selfadjointView<Eigen::Upper>();
  full_.makeCompressed();
  finalized_ = true;
}

Index SparseSymMatrix::nonzeros() const {
  assert(finalized_);
  return full_.nonZeros();
}

const Eigen::SparseMatrix<double>& SparseSymMatrix::matrix() const {
  assert(finalized_);
  return full_;
}

double SparseSymMatrix::max_diagonal() const {
  assert(finalized_);
  double d = 0.0;
  for (Index i = 0; i < n_; ++i) d = std::max(d, full_.coeff(i, i));
  return d;
}

SparseSymMatrix SparseSymMatrix::from_sparse(const Eigen::SparseMatrix<double>& full) {
  SparseSymMatrix m(full.rows());
  m.full_ = full;
  m.full_.makeCompressed();
  m.finalized_ = true;
  return m;
}

struct Factorization::Impl {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool definite = true;
  Index n = 0;
};

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& rhs) const {
  return impl_->definite ? Eigen::VectorXd(impl_->llt.solve(rhs))
                         : Eigen::VectorXd(impl_->ldlt.solve(rhs));
}

Eigen::MatrixXd Factorization::solve(const Eigen::MatrixXd& rhs) const {
  return impl_->definite ? Eigen::MatrixXd(impl_->llt.solve(rhs))
                         : Eigen::MatrixXd(impl_->ldlt.solve(rhs));
}

Index Factorization::dimension() const { return impl_->n; }

Factorization factorize(const Eigen::SparseMatrix<double>& full, FactorKind kind) {
  auto impl = std::make_shared<Factorization::Impl>();
  impl->n = full.rows();
  if (kind == FactorKind::Definite) {
    impl->definite = true;
    impl->llt.compute(full);
    if (impl->llt.info() != Eigen::Success)
      throw NotPositiveDefinite("factorize: matrix is not positive definite");
  } else {
    impl->definite = false;
    double dmax = 0.0;
    for (Index i = 0; i < full.rows(); ++i) dmax = std::max(dmax, std::abs(full.coeff(i, i)));
    impl->ldlt.setShift(1e-12 * (dmax > 0 ? dmax : 1.0));
    impl->ldlt.compute(full);
    if (impl->ldlt.info() != Eigen::Success)
      throw NotPositiveDefinite("factorize: shifted factorization failed");
  }
  return Factorization(std::move(impl));
}

Factorization factorize(const SparseSymMatrix& a, FactorKind kind) {
  return factorize(a.matrix(), kind);
}

Eigen::SparseMatrix<double> pruned(const Eigen::SparseMatrix<double>& m, double rel_tol) {
  double amax = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      amax = std::max(amax, std::abs(it.value()));
  Eigen::SparseMatrix<double> out = m;
  const double cut = rel_tol * (amax > 0 ? amax : 1.0);
  out.prune([cut](Index, Index, double v) { return std::abs(v) > cut; });
  out.makeCompressed();
  return out;
}

}  // namespace bddc
