// SPDX-License-Identifier: Apache-2.0
/// @file
/// @brief Matrix Market coordinate export for debugging dumps.

#pragma once

#include <string>

#include <Eigen/Sparse>

#include "bddc/sparse.hpp"

namespace bddc {

/// Write a symmetric matrix in coordinate format (lower triangle, 1-based).
void write_matrix_market_symmetric(const std::string& path, const SparseSymMatrix& a);

/// Write a general (possibly rectangular) sparse matrix in coordinate format.
void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& a);

/// Read a coordinate-format file back (general or symmetric). For tests.
Eigen::SparseMatrix<double> read_matrix_market(const std::string& path);

}  // namespace bddc
