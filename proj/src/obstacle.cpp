#include "mvset/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mvset/parallel.hpp"

namespace mvset {

namespace {

constexpr double kThresholdFactor = 0.01;
constexpr Index kBoundaryClearance = 2;

double distance(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

bool near_boundary(const GridSpec& g, const Mask& mask) {
  for (Index k = 0; k < g.node_count(); ++k)
    if (mask[static_cast<std::size_t>(k)] && g.boundary_distance(k) <= kBoundaryClearance) return true;
  return false;
}

bool flood_connected(const GridSpec& g, const Mask& mask, Index source) {
  if (source < 0 || !mask[static_cast<std::size_t>(source)]) return false;
  std::vector<char> seen(mask.size(), 0);
  std::deque<Index> queue{source};
  seen[static_cast<std::size_t>(source)] = 1;
  std::vector<Index> nb;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const Index k = queue.front();
    queue.pop_front();
    g.face_neighbors(k, nb);
    for (Index j : nb) {
      const auto js = static_cast<std::size_t>(j);
      if (mask[js] && !seen[js]) {
        seen[js] = 1;
        ++reached;
        queue.push_back(j);
      }
    }
  }
  return reached == static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

// Mask nodes whose membership differs from a face neighbour's, on both sides.
Mask free_boundary(const GridSpec& g, const Mask& mask) {
  Mask fb(mask.size(), 0);
  std::vector<Index> nb;
  for (Index k = 0; k < g.node_count(); ++k) {
    g.face_neighbors(k, nb);
    for (Index j : nb) {
      if (mask[static_cast<std::size_t>(j)] != mask[static_cast<std::size_t>(k)]) {
        fb[static_cast<std::size_t>(k)] = 1;
        break;
      }
    }
  }
  return fb;
}

void fill_geometry(MeanValueSet& set) {
  const GridSpec& g = set.grid;
  const int n = g.dim();
  const Point x0 = g.coords(set.source);
  double nearest_out = INFINITY, farthest_in = 0.0;
  set.volume = 0.0;
  set.measure = 0.0;
  for (Index k = 0; k < g.node_count(); ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const double d = distance(g.coords(k), x0, n);
    const double v = g.cell_volume(k);
    set.measure += v * set.weights[ks];
    if (set.mask[ks]) {
      set.volume += v;
      farthest_in = std::max(farthest_in, d);
    } else {
      nearest_out = std::min(nearest_out, d);
    }
  }
  set.inradius = std::max(0.0, nearest_out - 0.5 * g.h());
  set.outradius = farthest_in + 0.5 * g.h();
  set.connected = flood_connected(g, set.mask, set.source);
  set.touches_boundary = near_boundary(g, set.mask);
}

}  // namespace

double extraction_threshold(const ScalarField& w, Index source) {
  const GridSpec& g = w.grid();
  const MultiIndex s = g.multi_index(source);
  double peak = 0.0;
  for (Index k = 0; k < g.node_count(); ++k) {
    const MultiIndex idx = g.multi_index(k);
    bool in_block = true;
    for (int a = 0; a < g.dim(); ++a) in_block = in_block && std::abs(idx[a] - s[a]) <= 1;
    if (!in_block) peak = std::max(peak, w[k]);
  }
  return kThresholdFactor * g.h() * g.h() * peak;
}

ObstacleSolution solve_obstacle(const DiscreteOperator& op, const GreenField& green, double r,
                                const LcpOptions& options) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error("obstacle parameter r must be positive");
  if (!(green.field.grid() == op.grid())) throw Error("Green's function grid does not match operator");
  const Index slot = op.slot(green.source);
  if (slot < 0) throw Error("obstacle source lies on the boundary");
  const GridSpec& g = op.grid();
  const double scale = std::pow(r, -g.dim());

  Vector q = -scale * op.interior_volumes();
  q[slot] += 1.0;
  LinearSolution sol = solve_lcp(op.matrix(), q, options);
  if (!sol.report.converged) {
    throw Error("obstacle LCP did not converge at r = " + std::to_string(r) + " (residual " +
                std::to_string(sol.report.final_residual) + ", gap " +
                std::to_string(sol.report.complementarity_gap) + ")");
  }

  ObstacleSolution out;
  out.r = r;
  out.source = green.source;
  out.w = op.extend_by_zero(sol.x);
  out.u = ScalarField(g, 0.0);
  for (Index k = 0; k < g.node_count(); ++k) out.u[k] = green.field[k] - out.w[k];

  Vector charge = -(op.matrix() * sol.x);
  charge[slot] += 1.0;
  Vector theta = charge.cwiseQuotient(op.interior_volumes()) / scale;
  out.occupancy = op.extend_by_zero(theta);

  out.threshold = extraction_threshold(out.w, out.source);
  out.noncontact_mask.assign(static_cast<std::size_t>(g.node_count()), 0);
  for (Index k = 0; k < g.node_count(); ++k) out.noncontact_mask[static_cast<std::size_t>(k)] = out.w[k] > out.threshold;
  out.touches_boundary = near_boundary(g, out.noncontact_mask);
  out.report = std::move(sol.report);
  return out;
}

MeanValueSet extract_set(const ObstacleSolution& solution) {
  const GridSpec& g = solution.w.grid();
  MeanValueSet set;
  set.grid = g;
  set.source = solution.source;
  const double eps = extraction_threshold(solution.w, solution.source);
  set.mask.assign(static_cast<std::size_t>(g.node_count()), 0);
  for (Index k = 0; k < g.node_count(); ++k) set.mask[static_cast<std::size_t>(k)] = solution.w[k] > eps;
  if (std::none_of(set.mask.begin(), set.mask.end(), [](std::uint8_t b) { return b != 0; })) {
    throw Error("extracted mean value set is empty");
  }
  if (solution.occupancy.size() == g.node_count()) {
    set.weights.assign(solution.occupancy.values().begin(), solution.occupancy.values().end());
  } else {
    set.weights.assign(set.mask.begin(), set.mask.end());
  }
  fill_geometry(set);
  if (g.dim() == 2) set.contour = marching_squares(solution.w, eps);
  return set;
}

MeanValueSet set_from_mask(const GridSpec& grid, Mask mask, Index source) {
  if (static_cast<Index>(mask.size()) != grid.node_count()) throw Error("mask size does not match grid");
  if (source < 0 || source >= grid.node_count()) throw Error("source is not a grid node");
  if (std::none_of(mask.begin(), mask.end(), [](std::uint8_t b) { return b != 0; })) {
    throw Error("candidate mask is empty");
  }
  MeanValueSet set;
  set.grid = grid;
  set.source = source;
  for (auto& b : mask) b = b ? 1 : 0;
  set.mask = std::move(mask);
  set.weights.assign(set.mask.begin(), set.mask.end());
  fill_geometry(set);
  if (grid.dim() == 2) set.contour = mask_contour(grid, set.mask);
  return set;
}

MeanValueSet areal_maximal(const MeanValueSet& set) {
  const GridSpec& g = set.grid;
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<Index> nb;
  Mask dilated = set.mask;
  for (Index k = 0; k < g.node_count(); ++k) {
    if (set.mask[static_cast<std::size_t>(k)]) continue;
    g.face_neighbors(k, nb);
    for (Index j : nb)
      if (set.mask[static_cast<std::size_t>(j)]) dilated[static_cast<std::size_t>(k)] = 1;
  }
  MeanValueSet out = set;
  bool changed = false;
  for (std::size_t ks = 0; ks < n; ++ks) {
    if (set.mask[ks] || !dilated[ks]) continue;
    const auto k = static_cast<Index>(ks);
    g.face_neighbors(k, nb);
    bool interior = static_cast<int>(nb.size()) == 2 * g.dim();
    for (Index j : nb) interior = interior && dilated[static_cast<std::size_t>(j)];
    if (interior) {
      out.mask[ks] = 1;
      out.weights[ks] = 1.0;
      changed = true;
    }
  }
  if (!changed) return set;
  fill_geometry(out);
  if (g.dim() == 2) out.contour = mask_contour(g, out.mask);
  return out;
}

NestingCheck compare_nesting(const MeanValueSet& inner, const MeanValueSet& outer, double r, double s) {
  if (!(inner.grid == outer.grid)) throw Error("nesting check needs sets on the same grid");
  const GridSpec& g = inner.grid;
  Mask fb = free_boundary(g, inner.mask);
  const Mask fb_outer = free_boundary(g, outer.mask);
  for (std::size_t k = 0; k < fb.size(); ++k) fb[k] = fb[k] | fb_outer[k];
  const Mask band = dilate(g, fb, 1);
  NestingCheck c{r, s, 0, 0};
  for (std::size_t k = 0; k < fb.size(); ++k) {
    if (inner.mask[k] && !outer.mask[k]) {
      ++c.violations;
      if (!band[k]) ++c.violations_beyond_band;
    }
  }
  return c;
}

MeanValueFamily compute_family(const DiscreteOperator& op, const GreenField& green,
                               const std::vector<double>& radii, const LcpOptions& options) {
  if (radii.empty()) throw Error("family needs at least one radius");
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (!(radii[k] > radii[k - 1])) throw Error("family radii must be strictly increasing");
  }
  MeanValueFamily fam;
  fam.radii = radii;
  fam.solutions.resize(radii.size());
  fam.sets.resize(radii.size());
  parallel_for(radii.size(), [&](std::size_t k) {
    fam.solutions[k] = solve_obstacle(op, green, radii[k], options);
    fam.sets[k] = extract_set(fam.solutions[k]);
  });
  for (std::size_t k = 1; k < radii.size(); ++k) {
    fam.nesting.push_back(compare_nesting(fam.sets[k - 1], fam.sets[k], radii[k - 1], radii[k]));
    fam.nested = fam.nested && fam.nesting.back().violations_beyond_band == 0;
  }
  for (std::size_t k = 0; k < radii.size(); ++k)
    if (!fam.solutions[k].touches_boundary) fam.r0_estimate = radii[k];
  return fam;
}

}  // namespace mvset
