#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvset {

using Index = std::int64_t;
using Point = std::array<double, 3>;
using MultiIndex = std::array<Index, 3>;

/// Error raised for every violated precondition or failed computation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box grid with isotropic spacing.
///
/// Nodes are numbered row-major over (axis 0, axis 1, axis 2): the last axis
/// varies fastest, so in 2D node (i, j) has flat index i * n1 + j. Unused
/// axes (dim < 3) have count 1 and origin 0.
class GridSpec {
 public:
  GridSpec() = default;

  /// Low-level constructor used by file readers. Accepts dim in [1, 3] and any
  /// count >= 2; build_grid() applies the stricter modelling preconditions.
  static GridSpec from_spacing(int dim, std::span<const double> origin, double h,
                               std::span<const Index> counts);

  int dim() const { return dim_; }
  double h() const { return h_; }
  Index count(int axis) const { return counts_[axis]; }
  const MultiIndex& counts() const { return counts_; }
  const Point& origin() const { return origin_; }
  double extent(int axis) const { return h_ * static_cast<double>(counts_[axis] - 1); }
  Index node_count() const { return counts_[0] * counts_[1] * counts_[2]; }

  MultiIndex multi_index(Index node) const;
  Index flat_index(const MultiIndex& idx) const;
  Point coords(Index node) const;

  bool on_boundary(Index node) const;
  bool contains(const Point& p) const;

  /// h^dim, halved once per axis on which the node touches the boundary.
  double cell_volume(Index node) const;
  double box_volume() const;

  /// Chebyshev (index) distance from a node to the nearest boundary node.
  Index boundary_distance(Index node) const;

  /// Face neighbours (2 * dim of them, fewer at the boundary).
  void face_neighbors(Index node, std::vector<Index>& out) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int dim_ = 0;
  MultiIndex counts_{1, 1, 1};
  Point origin_{0.0, 0.0, 0.0};
  double h_ = 0.0;
};

/// Builds the modelling grid. `extent` and `nodes_per_axis` may hold either one
/// value (applied to every axis) or one value per axis.
GridSpec build_grid(int dim, std::span<const double> origin, std::span<const double> extent,
                    std::span<const Index> nodes_per_axis);
GridSpec build_grid(int dim, std::span<const double> origin, std::span<const double> extent,
                    Index nodes_per_axis);

/// Nearest node; ties go to the lower index on each axis.
Index locate_node(const GridSpec& grid, const Point& point);

/// One real per node.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridSpec grid, double fill = 0.0);
  ScalarField(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  Index size() const { return static_cast<Index>(values_.size()); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](Index i) const { return values_[static_cast<std::size_t>(i)]; }
  double& operator[](Index i) { return values_[static_cast<std::size_t>(i)]; }

  bool all_finite() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Boolean node set stored as one byte per node.
using Mask = std::vector<std::uint8_t>;

std::vector<double> cell_volumes(const GridSpec& grid);

/// Sum of cell volumes over the nodes where mask is set.
double mask_volume(const GridSpec& grid, const Mask& mask);

/// Mask dilated by `cells` in the Chebyshev (box) metric.
Mask dilate(const GridSpec& grid, const Mask& mask, int cells);

}  // namespace mvset
