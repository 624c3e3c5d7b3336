#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mvset/obstacle.hpp"

namespace mvset {

enum class SampleKind { harmonic, subsolution, supersolution };

std::string to_string(SampleKind kind);

/// Boundary datum (or closed-form function) evaluated at node coordinates.
struct BoundaryDatum {
  std::string label;
  std::function<double(const Point&)> value;
};

struct HarmonicSample {
  ScalarField field;
  SampleKind kind = SampleKind::harmonic;
  std::string boundary_label;
};

/// Deterministic library of smooth boundary data: the constant 1, the
/// coordinates, harmonic quadratics and cubics, sin/cosh pairs, then seeded
/// random trigonometric sums until `count` data are produced.
std::vector<BoundaryDatum> datum_library(const GridSpec& grid, std::size_t count, std::uint64_t seed = 2024);

/// Discrete L-harmonic extension: solves A v = 0 in the interior with v equal
/// to the datum on the boundary.
HarmonicSample sample_harmonic(const DiscreteOperator& op, const BoundaryDatum& datum,
                               double tol = kDefaultLinearTol);

/// Nodal samples of a closed-form function, classified by the sign of A v
/// (A v <= 0 componentwise is a subsolution, since A approximates -L).
/// Throws when A v has no sign.
HarmonicSample sample_function(const DiscreteOperator& op, const BoundaryDatum& function,
                               double harmonic_tol = 1e-9);

struct MeanValueRow {
  std::string label;
  double value_at_x0 = 0.0;
  double average = 0.0;
  double discrepancy = 0.0;
};

struct MonotonicityRow {
  std::string label;
  SampleKind kind = SampleKind::harmonic;
  double r = 0.0;
  double s = 0.0;
  double value_at_x0 = 0.0;
  double average_r = 0.0;
  double average_s = 0.0;
  /// Signed margins, oriented so that >= 0 means the inequality holds
  /// (subsolutions: avg_r - v(x0), avg_s - avg_r; supersolutions negated).
  /// Harmonic rows store the raw differences and are judged by magnitude.
  double margin_inner = 0.0;
  double margin_outer = 0.0;
};

struct VerificationReport {
  std::vector<MeanValueRow> rows;
  std::vector<MonotonicityRow> pairs;
  /// Largest |discrepancy| for mean-value rows; for monotonicity, the largest
  /// violation (negative margin magnitude, or |difference| for harmonic rows).
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Cell-volume average of a field over a mask.
double mask_average(const GridSpec& grid, const Mask& mask, const ScalarField& field);

/// Default tolerance 2 h max|grad_h v| over the mask; the boundary layer of a
/// cell-counted mask shifts averages by at most about h |grad v|.
double default_mean_value_tolerance(const MeanValueSet& set, const std::vector<HarmonicSample>& samples);

/// Compares v(x0) with the plain cell-volume average of v over the mask.
/// A negative tolerance selects default_mean_value_tolerance().
VerificationReport check_mean_value(const MeanValueSet& set, const std::vector<HarmonicSample>& samples,
                                    Index x0, double tolerance = -1.0);

/// v(x0) <= avg_{D_r} v <= avg_{D_s} v for subsolutions and every r < s,
/// reversed for supersolutions, equality (within tolerance) for harmonic v.
VerificationReport check_monotonicity(const MeanValueFamily& family, const std::vector<HarmonicSample>& samples,
                                      Index x0, double tolerance = -1.0);

/// Residual of the exact discrete mean value identity
///   v(x0) = r^{-n} sum_i occupancy_i V_i v_i.
/// Since A is symmetric and w vanishes next to the boundary, the residual
/// equals |w^T (A v)|: zero for discrete-harmonic v up to solver tolerance,
/// and the size of w^T rho when v carries an interior residual rho.
double dual_identity_check(const DiscreteOperator& op, const ObstacleSolution& solution,
                           const HarmonicSample& sample);

}  // namespace mvset
