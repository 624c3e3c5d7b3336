#pragma once

#include <string>
#include <vector>

#include "mvset/obstacle.hpp"

namespace mvset {

enum class Construction { direct_solve, green_integral };

std::string to_string(Construction c);

/// Modified Schwarz potential of a candidate set D around x0:
///   L W = chi_D / |D| - delta_{x0},  W = 0 on the outer boundary.
/// The discrete measure of D is sum_i V_i weights_i, so obstacle-produced sets
/// (which carry fractional weights on their contact layer) are handled exactly.
struct SchwarzPotential {
  ScalarField W;
  Index source = -1;
  Mask set_mask;
  /// sum_i V_i weights_i.
  double measure = 0.0;
  Construction construction = Construction::direct_solve;
  SolveReport report;
};

/// Linear solve A W = e_{x0} - V weights / measure. W may go negative when D
/// is not a mean value set. Throws when x0 is outside the mask or the mask
/// comes within two cells of the boundary.
SchwarzPotential build_potential_direct(const DiscreteOperator& op, const MeanValueSet& set,
                                        double tol = kDefaultLinearTol);

/// Same potential from the Green's function: with A Y = V weights (one solve,
/// using the symmetry of A in place of one Green's function per node),
///   W = G(., x0) - Y / measure.
SchwarzPotential build_potential_integral(const DiscreteOperator& op, const GreenField& green,
                                          const MeanValueSet& set, double tol = kDefaultLinearTol);

struct VanishingReport {
  /// Over nodes at Chebyshev distance >= 2 from the mask.
  Index outside_nodes = 0;
  double max_abs = 0.0;
  /// Largest one-sided difference quotient |W_j - W_k| / h from such a node
  /// to any face neighbour.
  double max_gradient = 0.0;
  /// Minimum of W over the whole grid.
  double min_value = 0.0;
  double tolerance = 0.0;
  bool vanishes = false;
  bool nonnegative = false;
};

/// Tolerance defaults to C h^2 + 10 tol with C = 1.
VanishingReport check_vanishing(const SchwarzPotential& potential, double tol = kDefaultLinearTol,
                                double c = 1.0);

struct UniquenessReport {
  /// r with r^n equal to the candidate's measure.
  double r_matched = 0.0;
  /// |D| (W - W0), W from the candidate, W0 the obstacle height function w
  /// at r_matched.
  ScalarField upsilon;
  double max_upsilon = 0.0;
  double min_upsilon = 0.0;
  double max_abs_upsilon = 0.0;
  /// Cell volume of the symmetric difference between candidate and D_r masks.
  double symmetric_difference_volume = 0.0;
  /// max |upsilon| <= verdict_tolerance.
  bool consistent = false;
  double verdict_tolerance = 0.0;
};

struct UniquenessOptions {
  double linear_tol = kDefaultLinearTol;
  LcpOptions lcp{};
  double verdict_tolerance = 1e-6;
};

/// Volume-matched comparison of a candidate with the obstacle-produced set.
/// Requires a connected candidate containing x0 (the set's source).
UniquenessReport uniqueness_experiment(const DiscreteOperator& op, const GreenField& green,
                                       const MeanValueSet& candidate, const UniquenessOptions& options = {});

struct NamedCandidate {
  std::string name;
  MeanValueSet set;
};

/// Sets of (roughly) the reference's volume that are not mean value sets:
///   equal-volume-box   cube of equal cell volume centred at x0
///   off-centre-ball    ball of equal volume centred 0.1 away along axis 0
///   dilated-3          reference stretched 3 cells towards +axis 0
///   shifted-3          reference translated 3 cells along +axis 0
///   slit               reference minus a one-cell slit along +axis 1,
///                      running from half the inradius to the edge
/// All candidates carry 0/1 weights.
std::vector<NamedCandidate> perturbed_candidates(const MeanValueSet& reference);

}  // namespace mvset
