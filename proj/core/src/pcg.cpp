// SPDX-License-Identifier: Apache-2.0

#include "bddc/pcg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bddc {

double lanczos_condition_estimate(const std::vector<double>& alphas,
                                  const std::vector<double>& betas) {
  const Index n = static_cast<Index>(alphas.size());
  if (n == 0) return 1.0;
  Eigen::VectorXd diag(n), sub(std::max<Index>(n - 1, 0));
  diag(0) = 1.0 / alphas[0];
  for (Index j = 1; j < n; ++j) {
    diag(j) = 1.0 / alphas[j] + betas[j - 1] / alphas[j - 1];
    sub(j - 1) = std::sqrt(betas[j - 1]) / alphas[j - 1];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

PcgResult pcg(const LinearOperator& op, const LinearOperator& preconditioner,
              const Eigen::VectorXd& b, const PcgOptions& options) {
  PcgResult result;
  result.x = Eigen::VectorXd::Zero(b.size());

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = preconditioner(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);

  const double true_ref = b.norm();
  const double prec_ref = std::sqrt(std::max(rz, 0.0));
  const double reference = options.preconditioned_residual ? prec_ref : true_ref;
  if (reference == 0.0) return result;  // zero right hand side

  auto current = [&] {
    return (options.preconditioned_residual ? std::sqrt(std::max(rz, 0.0)) : r.norm()) /
           reference;
  };

  result.relative_residual = current();
  for (Index it = 0; it < options.max_iterations; ++it) {
    if (result.relative_residual <= options.tolerance) {
      result.condition_estimate = lanczos_condition_estimate(result.alphas, result.betas);
      return result;
    }
    const Eigen::VectorXd q = op(p);
    const double alpha = rz / p.dot(q);
    result.x += alpha * p;
    r -= alpha * q;
    z = preconditioner(r);
    const double rz_next = r.dot(z);
    const double beta = rz_next / rz;
    p = z + beta * p;
    result.alphas.push_back(alpha);
    result.betas.push_back(beta);
    rz = rz_next;
    ++result.iterations;
    result.relative_residual = current();
    if (options.log)
      (*options.log) << "iteration " << result.iterations << " relative residual "
                     << result.relative_residual << "\n";
  }
  if (result.relative_residual <= options.tolerance) {
    result.condition_estimate = lanczos_condition_estimate(result.alphas, result.betas);
    return result;
  }
  result.condition_estimate = lanczos_condition_estimate(result.alphas, result.betas);
  throw MaxIterationsExceeded(std::move(result));
}

}  // namespace bddc
