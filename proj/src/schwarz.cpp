#include "mvset/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mvset {

namespace {

constexpr Index kClearance = 2;

void check_candidate(const DiscreteOperator& op, const MeanValueSet& set) {
  const GridSpec& g = op.grid();
  if (!(set.grid == g)) throw Error("candidate set lives on a different grid");
  if (set.source < 0 || !set.mask[static_cast<std::size_t>(set.source)])
    throw Error("candidate set does not contain x0");
  for (Index k = 0; k < g.node_count(); ++k) {
    const auto ks = static_cast<std::size_t>(k);
    if ((set.mask[ks] || set.weights[ks] != 0.0) && g.boundary_distance(k) < kClearance)
      throw Error("candidate set comes within two cells of the boundary");
  }
  if (!(set.measure > 0.0)) throw Error("candidate set has zero measure");
}

Vector weighted_volumes(const DiscreteOperator& op, const MeanValueSet& set) {
  Vector b(op.interior_count());
  const auto& nodes = op.interior_nodes();
  for (Index s = 0; s < op.interior_count(); ++s)
    b[s] = op.interior_volumes()[s] * set.weights[static_cast<std::size_t>(nodes[static_cast<std::size_t>(s)])];
  return b;
}

}  // namespace

std::string to_string(Construction c) {
  return c == Construction::direct_solve ? "direct-solve" : "green-integral";
}

SchwarzPotential build_potential_direct(const DiscreteOperator& op, const MeanValueSet& set, double tol) {
  check_candidate(op, set);
  Vector rhs = -weighted_volumes(op, set) / set.measure;
  rhs[op.slot(set.source)] += 1.0;
  LinearSolution sol = solve_spd(op.matrix(), rhs, tol);
  if (!sol.report.converged) throw Error("Schwarz potential solve did not converge");
  return {op.extend_by_zero(sol.x), set.source, set.mask, set.measure, Construction::direct_solve,
          std::move(sol.report)};
}

SchwarzPotential build_potential_integral(const DiscreteOperator& op, const GreenField& green,
                                          const MeanValueSet& set, double tol) {
  check_candidate(op, set);
  if (green.source != set.source) throw Error("Green's function source differs from the candidate's x0");
  LinearSolution y = solve_spd(op.matrix(), weighted_volumes(op, set), tol);
  if (!y.report.converged) throw Error("Green integral solve did not converge");
  ScalarField w(op.grid(), 0.0);
  for (Index k = 0; k < op.grid().node_count(); ++k) {
    const Index s = op.slot(k);
    if (s >= 0) w[k] = green.field[k] - y.x[s] / set.measure;
  }
  return {std::move(w), set.source, set.mask, set.measure, Construction::green_integral, std::move(y.report)};
}

VanishingReport check_vanishing(const SchwarzPotential& potential, double tol, double c) {
  const GridSpec& g = potential.W.grid();
  const Mask near = dilate(g, potential.set_mask, 1);
  VanishingReport rep;
  rep.min_value = INFINITY;
  std::vector<Index> nb;
  for (Index k = 0; k < g.node_count(); ++k) {
    const double wk = potential.W[k];
    rep.min_value = std::min(rep.min_value, wk);
    if (near[static_cast<std::size_t>(k)]) continue;
    ++rep.outside_nodes;
    rep.max_abs = std::max(rep.max_abs, std::abs(wk));
    g.face_neighbors(k, nb);
    for (Index j : nb) rep.max_gradient = std::max(rep.max_gradient, std::abs(potential.W[j] - wk) / g.h());
  }
  rep.tolerance = c * g.h() * g.h() + 10.0 * tol;
  rep.vanishes = rep.max_abs <= rep.tolerance && rep.max_gradient <= rep.tolerance;
  rep.nonnegative = rep.min_value >= -rep.tolerance;
  return rep;
}

UniquenessReport uniqueness_experiment(const DiscreteOperator& op, const GreenField& green,
                                       const MeanValueSet& candidate, const UniquenessOptions& options) {
  if (!candidate.connected) throw Error("uniqueness experiment needs a connected candidate");
  const GridSpec& g = op.grid();
  const SchwarzPotential pot = build_potential_direct(op, candidate, options.linear_tol);

  UniquenessReport rep;
  rep.r_matched = std::pow(candidate.measure, 1.0 / g.dim());
  // The height function solves A w = e - r^{-n} V occupancy, the same system
  // as a Schwarz potential of measure r^n, so it serves as W0 directly.
  const ObstacleSolution ref = solve_obstacle(op, green, rep.r_matched, options.lcp);

  rep.upsilon = ScalarField(g, 0.0);
  rep.max_upsilon = -INFINITY;
  rep.min_upsilon = INFINITY;
  for (Index k = 0; k < g.node_count(); ++k) {
    const double u = candidate.measure * (pot.W[k] - ref.w[k]);
    rep.upsilon[k] = u;
    rep.max_upsilon = std::max(rep.max_upsilon, u);
    rep.min_upsilon = std::min(rep.min_upsilon, u);
    if (candidate.mask[static_cast<std::size_t>(k)] != ref.noncontact_mask[static_cast<std::size_t>(k)])
      rep.symmetric_difference_volume += g.cell_volume(k);
  }
  rep.max_abs_upsilon = std::max(std::abs(rep.max_upsilon), std::abs(rep.min_upsilon));
  rep.verdict_tolerance = options.verdict_tolerance;
  rep.consistent = rep.max_abs_upsilon <= options.verdict_tolerance;
  return rep;
}

std::vector<NamedCandidate> perturbed_candidates(const MeanValueSet& reference) {
  const GridSpec& g = reference.grid;
  const int n = g.dim();
  const double h = g.h();
  const Point x0 = g.coords(reference.source);
  const MultiIndex s0 = g.multi_index(reference.source);
  const auto count = static_cast<std::size_t>(g.node_count());
  std::vector<NamedCandidate> out;
  auto add = [&](std::string name, Mask m) { out.push_back({std::move(name), set_from_mask(g, std::move(m), reference.source)}); };

  // Cube of side a = measure^{1/n}, realised as the (2m+1)^n node block.
  const double side = std::pow(reference.measure, 1.0 / n);
  const auto half = static_cast<Index>(std::lround(0.5 * (side / h - 1.0)));
  Mask box(count, 0);
  for (Index k = 0; k < g.node_count(); ++k) {
    const MultiIndex idx = g.multi_index(k);
    bool inside = true;
    for (int a = 0; a < n; ++a) inside = inside && std::abs(idx[a] - s0[a]) <= half;
    box[static_cast<std::size_t>(k)] = inside;
  }
  add("equal-volume-box", std::move(box));

  const double unit_ball = std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
  const double radius = std::pow(reference.measure / unit_ball, 1.0 / n);
  Mask ball(count, 0);
  for (Index k = 0; k < g.node_count(); ++k) {
    const Point p = g.coords(k);
    double d2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double c = x0[a] + (a == 0 ? 0.1 : 0.0);
      d2 += (p[a] - c) * (p[a] - c);
    }
    ball[static_cast<std::size_t>(k)] = d2 < radius * radius;
  }
  add("off-centre-ball", std::move(ball));

  auto shifted = [&](Index cells) {
    Mask m(count, 0);
    for (Index k = 0; k < g.node_count(); ++k) {
      if (!reference.mask[static_cast<std::size_t>(k)]) continue;
      MultiIndex idx = g.multi_index(k);
      idx[0] += cells;
      if (idx[0] < g.count(0)) m[static_cast<std::size_t>(g.flat_index(idx))] = 1;
    }
    return m;
  };
  Mask dilated = reference.mask;
  for (Index c = 1; c <= 3; ++c) {
    const Mask m = shifted(c);
    for (std::size_t k = 0; k < count; ++k) dilated[k] |= m[k];
  }
  add("dilated-3", std::move(dilated));
  add("shifted-3", shifted(3));

  if (n >= 2) {
    Mask slit = reference.mask;
    const auto start = static_cast<Index>(std::ceil(0.5 * reference.inradius / h));
    for (Index k = 0; k < g.node_count(); ++k) {
      const MultiIndex idx = g.multi_index(k);
      bool on_ray = idx[1] - s0[1] >= std::max<Index>(start, 1);
      for (int a = 0; a < n; ++a)
        if (a != 1) on_ray = on_ray && idx[a] == s0[a];
      if (on_ray) slit[static_cast<std::size_t>(k)] = 0;
    }
    add("slit", std::move(slit));
  }
  return out;
}

}  // namespace mvset
