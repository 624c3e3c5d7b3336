#include "mvset/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mvset {

namespace {

constexpr Index kMinNodesPerAxis = 17;
constexpr double kIsotropyTol = 1e-12;

void check_dim(int dim, int lo) {
  if (dim < lo || dim > 3) {
    throw Error("grid dimension must be in [" + std::to_string(lo) + ", 3], got " +
                std::to_string(dim));
  }
}

double per_axis(std::span<const double> v, int axis, const char* what) {
  if (v.size() == 1) return v[0];
  if (static_cast<int>(v.size()) <= axis) throw Error(std::string("missing ") + what + " component");
  return v[static_cast<std::size_t>(axis)];
}

Index per_axis(std::span<const Index> v, int axis) {
  if (v.size() == 1) return v[0];
  if (static_cast<int>(v.size()) <= axis) throw Error("missing node count component");
  return v[static_cast<std::size_t>(axis)];
}

}  // namespace

GridSpec GridSpec::from_spacing(int dim, std::span<const double> origin, double h,
                                std::span<const Index> counts) {
  check_dim(dim, 1);
  if (!(h > 0.0) || !std::isfinite(h)) throw Error("grid spacing must be positive");
  GridSpec g;
  g.dim_ = dim;
  g.h_ = h;
  for (int a = 0; a < dim; ++a) {
    const Index n = per_axis(counts, a);
    if (n < 2) throw Error("each axis needs at least 2 nodes");
    g.counts_[a] = n;
    g.origin_[a] = origin.empty() ? 0.0 : per_axis(origin, a, "origin");
  }
  return g;
}

GridSpec build_grid(int dim, std::span<const double> origin, std::span<const double> extent,
                    std::span<const Index> nodes_per_axis) {
  check_dim(dim, 2);
  if (static_cast<int>(origin.size()) != dim) throw Error("origin must have one entry per axis");
  std::array<double, 3> spacing{};
  std::array<Index, 3> counts{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    const double e = per_axis(extent, a, "extent");
    const Index n = per_axis(nodes_per_axis, a);
    if (!(e > 0.0) || !std::isfinite(e)) throw Error("grid extent must be positive on every axis");
    if (n < kMinNodesPerAxis) {
      throw Error("grid too coarse: " + std::to_string(n) + " nodes on axis " + std::to_string(a) +
                  " (need >= " + std::to_string(kMinNodesPerAxis) + ")");
    }
    counts[a] = n;
    spacing[a] = e / static_cast<double>(n - 1);
  }
  for (int a = 1; a < dim; ++a) {
    if (std::abs(spacing[a] - spacing[0]) > kIsotropyTol * spacing[0]) {
      throw Error("anisotropic grid request: spacing differs between axis 0 and axis " +
                  std::to_string(a));
    }
  }
  return GridSpec::from_spacing(dim, origin, spacing[0], std::span<const Index>(counts.data(), dim));
}

GridSpec build_grid(int dim, std::span<const double> origin, std::span<const double> extent,
                    Index nodes_per_axis) {
  return build_grid(dim, origin, extent, std::span<const Index>(&nodes_per_axis, 1));
}

MultiIndex GridSpec::multi_index(Index node) const {
  MultiIndex idx{0, 0, 0};
  idx[2] = node % counts_[2];
  node /= counts_[2];
  idx[1] = node % counts_[1];
  idx[0] = node / counts_[1];
  return idx;
}

Index GridSpec::flat_index(const MultiIndex& idx) const {
  return (idx[0] * counts_[1] + idx[1]) * counts_[2] + idx[2];
}

Point GridSpec::coords(Index node) const {
  const MultiIndex idx = multi_index(node);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = origin_[a] + h_ * static_cast<double>(idx[a]);
  return p;
}

bool GridSpec::on_boundary(Index node) const {
  const MultiIndex idx = multi_index(node);
  for (int a = 0; a < dim_; ++a) {
    if (idx[a] == 0 || idx[a] == counts_[a] - 1) return true;
  }
  return false;
}

bool GridSpec::contains(const Point& p) const {
  for (int a = 0; a < dim_; ++a) {
    if (!(p[a] >= origin_[a] && p[a] <= origin_[a] + extent(a))) return false;
  }
  return true;
}

double GridSpec::cell_volume(Index node) const {
  const MultiIndex idx = multi_index(node);
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) {
    v *= h_;
    if (idx[a] == 0 || idx[a] == counts_[a] - 1) v *= 0.5;
  }
  return v;
}

double GridSpec::box_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= extent(a);
  return v;
}

Index GridSpec::boundary_distance(Index node) const {
  const MultiIndex idx = multi_index(node);
  Index d = counts_[0];
  for (int a = 0; a < dim_; ++a) d = std::min({d, idx[a], counts_[a] - 1 - idx[a]});
  return d;
}

void GridSpec::face_neighbors(Index node, std::vector<Index>& out) const {
  out.clear();
  const MultiIndex idx = multi_index(node);
  Index stride = 1;
  for (int a = 2; a >= 0; --a) {
    if (a < dim_) {
      if (idx[a] > 0) out.push_back(node - stride);
      if (idx[a] + 1 < counts_[a]) out.push_back(node + stride);
    }
    stride *= counts_[a];
  }
}

Index locate_node(const GridSpec& grid, const Point& point) {
  if (!grid.contains(point)) throw Error("point lies outside the grid box");
  MultiIndex idx{0, 0, 0};
  for (int a = 0; a < grid.dim(); ++a) {
    const double t = (point[a] - grid.origin()[a]) / grid.h();
    // ceil(t - 0.5) rounds to nearest with exact halves going down.
    Index i = static_cast<Index>(std::ceil(t - 0.5));
    idx[a] = std::clamp<Index>(i, 0, grid.count(a) - 1);
  }
  return grid.flat_index(idx);
}

ScalarField::ScalarField(GridSpec grid, double fill)
    : grid_(std::move(grid)), values_(static_cast<std::size_t>(grid_.node_count()), fill) {}

ScalarField::ScalarField(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<Index>(values_.size()) != grid_.node_count()) {
    throw Error("field has " + std::to_string(values_.size()) + " values but grid has " +
                std::to_string(grid_.node_count()) + " nodes");
  }
  if (!all_finite()) throw Error("field contains non-finite values");
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> cell_volumes(const GridSpec& grid) {
  std::vector<double> v(static_cast<std::size_t>(grid.node_count()));
  for (Index i = 0; i < grid.node_count(); ++i) v[static_cast<std::size_t>(i)] = grid.cell_volume(i);
  return v;
}

double mask_volume(const GridSpec& grid, const Mask& mask) {
  double v = 0.0;
  for (Index i = 0; i < grid.node_count(); ++i) {
    if (mask[static_cast<std::size_t>(i)]) v += grid.cell_volume(i);
  }
  return v;
}

Mask dilate(const GridSpec& grid, const Mask& mask, int cells) {
  Mask cur = mask;
  // Box dilation is separable: dilate along each axis in turn.
  for (int a = 0; a < grid.dim(); ++a) {
    Index stride = 1;
    for (int b = a + 1; b < 3; ++b) stride *= grid.count(b);
    Mask next = cur;
    for (Index node = 0; node < grid.node_count(); ++node) {
      if (!cur[static_cast<std::size_t>(node)]) continue;
      const Index i = grid.multi_index(node)[a];
      const Index lo = std::max<Index>(0, i - cells);
      const Index hi = std::min<Index>(grid.count(a) - 1, i + cells);
      for (Index k = lo; k <= hi; ++k) next[static_cast<std::size_t>(node + (k - i) * stride)] = 1;
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace mvset
