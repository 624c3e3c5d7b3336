#pragma once

#include <vector>

#include "mvset/contour.hpp"
#include "mvset/greens.hpp"
#include "mvset/operator.hpp"
#include "mvset/solver.hpp"

namespace mvset {

/// Height-function form of the Green's-function obstacle problem at pressure
/// parameter r: w = G - u >= 0 with L w = r^{-n} chi_{w>0} - delta_{x0}.
struct ObstacleSolution {
  double r = 0.0;
  Index source = -1;
  ScalarField w;
  /// u = G - w.
  ScalarField u;
  /// {w > threshold}.
  Mask noncontact_mask;
  double threshold = 0.0;
  /// Discrete mean-value density r^n (e_{x0} - A w)_i / V_i: 1 on {w > 0},
  /// in (0, 1) on the contact nodes bordering it, 0 elsewhere. Its measure
  /// sum_i V_i occupancy_i equals r^n exactly.
  ScalarField occupancy;
  /// Some noncontact node lies within 2 cells of the boundary.
  bool touches_boundary = false;
  SolveReport report;
};

/// Extraction threshold 0.01 h^2 max w, the maximum taken outside the 3^n
/// block of nodes around the source.
double extraction_threshold(const ScalarField& w, Index source);

/// Solves the LCP  w >= 0, A w - q >= 0, w.(A w - q) = 0  with
/// q = e_{x0} - r^{-n} V.
ObstacleSolution solve_obstacle(const DiscreteOperator& op, const GreenField& green, double r,
                                const LcpOptions& options = {});

struct MeanValueSet {
  GridSpec grid;
  Index source = -1;
  Mask mask;
  /// Per-node density of the discrete measure carried by the set: the
  /// obstacle occupancy for extracted sets, the 0/1 indicator for plain masks.
  std::vector<double> weights;
  /// Cell-counted volume of the mask.
  double volume = 0.0;
  /// sum_i V_i weights_i.
  double measure = 0.0;
  /// Radii of the largest centred ball inside / smallest centred ball around
  /// the mask, from node distances -/+ h/2.
  double inradius = 0.0;
  double outradius = 0.0;
  std::vector<Polyline> contour;
  bool connected = true;
  bool touches_boundary = false;
};

MeanValueSet extract_set(const ObstacleSolution& solution);

/// Set with 0/1 weights from an arbitrary mask (external candidates).
MeanValueSet set_from_mask(const GridSpec& grid, Mask mask, Index source);

/// Discrete areal-maximal domain: fills punctures and slits narrower than two
/// cells (closing with the face-neighbour cross). Added cells get weight 1.
MeanValueSet areal_maximal(const MeanValueSet& set);

struct NestingCheck {
  double r = 0.0;
  double s = 0.0;
  /// Nodes in D_r but not in D_s.
  Index violations = 0;
  /// Of those, nodes more than one cell away from both free boundaries.
  Index violations_beyond_band = 0;
};

NestingCheck compare_nesting(const MeanValueSet& inner, const MeanValueSet& outer, double r, double s);

struct MeanValueFamily {
  std::vector<double> radii;
  std::vector<ObstacleSolution> solutions;
  std::vector<MeanValueSet> sets;
  /// Consecutive pairs.
  std::vector<NestingCheck> nesting;
  bool nested = true;
  /// Largest radius whose set keeps 2 cells away from the boundary (0 if none).
  double r0_estimate = 0.0;
};

MeanValueFamily compute_family(const DiscreteOperator& op, const GreenField& green,
                               const std::vector<double>& radii, const LcpOptions& options = {});

}  // namespace mvset
