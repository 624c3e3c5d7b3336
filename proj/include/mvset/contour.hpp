#pragma once

#include <array>
#include <vector>

#include "mvset/grid.hpp"

namespace mvset {

struct Polyline {
  std::vector<std::array<double, 2>> points;
  /// Closed polylines repeat their first vertex at the end.
  bool closed = false;
};

/// Marching squares on a 2D field at `level`. Values beyond the grid are
/// treated as below the level, so every returned polyline is closed.
/// Saddle cells are resolved by the mean of the four corners.
std::vector<Polyline> marching_squares(const ScalarField& field, double level);

/// Contour of a mask, i.e. marching squares on its 0/1 indicator at 1/2.
std::vector<Polyline> mask_contour(const GridSpec& grid, const Mask& mask);

/// Largest distance from a contour vertex or a sampled point of the circle to
/// the other curve (symmetric Hausdorff distance, circle sampled at `samples`).
double hausdorff_to_circle(const std::vector<Polyline>& contour, const std::array<double, 2>& centre,
                           double radius, int samples = 2048);

}  // namespace mvset
