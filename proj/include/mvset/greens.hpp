#pragma once

#include "mvset/operator.hpp"
#include "mvset/solver.hpp"

namespace mvset {

/// Discrete Green's function with L G = -delta_{x0}: positive, zero on the
/// boundary, largest at the source.
struct GreenField {
  ScalarField field;
  Index source = -1;
  /// Sum over all nodes of (A G)_i; equals the unit point mass.
  double mass = 0.0;
  SolveReport report;
};

/// Solves A G = e_{x0}.
GreenField compute_green(const DiscreteOperator& op, Index source, double tol = kDefaultLinearTol);

}  // namespace mvset
