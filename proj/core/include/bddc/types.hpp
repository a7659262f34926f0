// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bddc {

using Index = std::ptrdiff_t;

enum class Physics { Scalar, Elasticity };

/// Degrees of freedom carried by one mesh node.
inline int components(Physics p) { return p == Physics::Scalar ? 1 : 3; }

// ---------------------------------------------------------------------------
// Error taxonomy. Everything derives from Error so callers can catch broadly.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix expected to be positive definite was not.
struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& what) : Error(what) {}
};

/// The assembled global system stayed singular after boundary conditions.
struct InsufficientBoundaryConditions : NotPositiveDefinite {
  explicit InsufficientBoundaryConditions(const std::string& what)
      : NotPositiveDefinite(what) {}
};

/// Element geometry with nonpositive Jacobian determinant.
struct DegenerateElement : Error {
  explicit DegenerateElement(const std::string& what) : Error(what) {}
};

/// Corner selection could not satisfy the per-pair rigid-mode rule.
struct CornerSelectionFailed : Error {
  explicit CornerSelectionFailed(const std::string& what) : Error(what) {}
};

/// null(rhs) of a symmetric pencil is not contained in null(lhs).
struct NullspaceInclusionViolated : Error {
  explicit NullspaceInclusionViolated(const std::string& what) : Error(what) {}
};

/// Gram matrix of constraint rows is singular (duplicate rows).
struct SingularGram : Error {
  explicit SingularGram(const std::string& what) : Error(what) {}
};

/// Pair construction requested for subdomains that do not share a face.
struct NotAdjacent : Error {
  explicit NotAdjacent(const std::string& what) : Error(what) {}
};

struct BadProblemSpec : Error {
  explicit BadProblemSpec(const std::string& what) : Error(what) {}
};

}  // namespace bddc
