// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Preconditioned conjugate gradients with a Lanczos condition
/// estimate from the iteration coefficients.

#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "bddc/types.hpp"

namespace bddc {

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct PcgOptions {
  double tolerance = 1e-8;
  Index max_iterations = 500;
  /// Stop on the preconditioned-residual norm instead of the true residual.
  bool preconditioned_residual = false;
  std::ostream* log = nullptr;  ///< per-iteration relative residuals
};

struct PcgResult {
  Eigen::VectorXd x;
  Index iterations = 0;
  double relative_residual = 0;
  std::vector<double> alphas, betas;
  double condition_estimate = 1.0;
};

/// Eigenvalue-ratio estimate from the PCG coefficients (Lanczos tridiagonal).
double lanczos_condition_estimate(const std::vector<double>& alphas,
                                  const std::vector<double>& betas);

struct MaxIterationsExceeded : Error {
  explicit MaxIterationsExceeded(PcgResult partial_result)
      : Error("conjugate gradients did not reach the tolerance"),
        partial(std::move(partial_result)) {}
  PcgResult partial;
};

/// Conjugate gradients from a zero initial guess. Throws
/// MaxIterationsExceeded (carrying the partial result) on stagnation.
PcgResult pcg(const LinearOperator& op, const LinearOperator& preconditioner,
              const Eigen::VectorXd& b, const PcgOptions& options = {});

}  // namespace bddc
