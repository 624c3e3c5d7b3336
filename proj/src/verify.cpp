#include "mvset/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mvset/parallel.hpp"

namespace mvset {

namespace {

// Centre and half-size of the box, used to keep the library's data O(1).
struct Frame {
  Point centre{0.0, 0.0, 0.0};
  double half = 1.0;
};

Frame frame_of(const GridSpec& g) {
  Frame f;
  f.half = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    f.centre[a] = g.origin()[a] + 0.5 * g.extent(a);
    f.half = std::max(f.half, 0.5 * g.extent(a));
  }
  return f;
}

double max_gradient_on(const GridSpec& g, const Mask& mask, const ScalarField& v) {
  double best = 0.0;
  for (Index k = 0; k < g.node_count(); ++k) {
    if (!mask[static_cast<std::size_t>(k)]) continue;
    MultiIndex idx = g.multi_index(k);
    for (int a = 0; a < g.dim(); ++a) {
      if (idx[a] + 1 >= g.count(a)) continue;
      MultiIndex up = idx;
      ++up[a];
      best = std::max(best, std::abs(v[g.flat_index(up)] - v[k]) / g.h());
    }
  }
  return best;
}

void require_same_grid(const GridSpec& g, const std::vector<HarmonicSample>& samples) {
  for (const auto& s : samples)
    if (!(s.field.grid() == g)) throw Error("sample '" + s.boundary_label + "' lives on a different grid");
}

}  // namespace

std::string to_string(SampleKind kind) {
  switch (kind) {
    case SampleKind::harmonic: return "harmonic";
    case SampleKind::subsolution: return "subsolution";
    case SampleKind::supersolution: return "supersolution";
  }
  return "unknown";
}

std::vector<BoundaryDatum> datum_library(const GridSpec& grid, std::size_t count, std::uint64_t seed) {
  const int n = grid.dim();
  const Frame f = frame_of(grid);
  auto local = [f](const Point& p, int a) { return (p[a] - f.centre[a]) / f.half; };

  std::vector<BoundaryDatum> lib;
  lib.push_back({"one", [](const Point&) { return 1.0; }});
  for (int a = 0; a < n; ++a) lib.push_back({"x" + std::to_string(a + 1), [a](const Point& p) { return p[a]; }});
  if (n >= 2) {
    lib.push_back({"x1*x2", [local](const Point& p) { return local(p, 0) * local(p, 1); }});
    lib.push_back({"x1^2-x2^2", [local](const Point& p) {
                     const double x = local(p, 0), y = local(p, 1);
                     return x * x - y * y;
                   }});
    lib.push_back({"re(z^3)", [local](const Point& p) {
                     const double x = local(p, 0), y = local(p, 1);
                     return x * x * x - 3.0 * x * y * y;
                   }});
    lib.push_back({"sin*cosh", [local](const Point& p) {
                     return std::sin(0.5 * std::numbers::pi * local(p, 0)) *
                            std::cosh(0.5 * std::numbers::pi * local(p, 1));
                   }});
  }

  // exp(k a.x) cos(k b.x + phase) with a, b orthonormal is harmonic in any
  // dimension; in 1D it degenerates to exp(k x).
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::size_t serial = 0;
  while (lib.size() < count) {
    Point a{0, 0, 0}, b{0, 0, 0};
    for (int k = 0; k < n; ++k) a[k] = gauss(rng);
    double na = 0.0;
    for (int k = 0; k < n; ++k) na += a[k] * a[k];
    na = std::sqrt(na);
    for (int k = 0; k < n; ++k) a[k] /= na;
    if (n >= 2) {
      for (int k = 0; k < n; ++k) b[k] = gauss(rng);
      double dot = 0.0;
      for (int k = 0; k < n; ++k) dot += a[k] * b[k];
      double nb = 0.0;
      for (int k = 0; k < n; ++k) {
        b[k] -= dot * a[k];
        nb += b[k] * b[k];
      }
      nb = std::sqrt(nb);
      for (int k = 0; k < n; ++k) b[k] /= nb;
    }
    const double wave = 0.5 + 2.0 * unif(rng);
    const double phase = 2.0 * std::numbers::pi * unif(rng);
    const double amp = 0.5 + unif(rng);
    const bool trig = n >= 2;
    lib.push_back({"random-" + std::to_string(serial++), [=](const Point& p) {
                     double ax = 0.0, bx = 0.0;
                     for (int k = 0; k < n; ++k) {
                       ax += a[k] * local(p, k);
                       bx += b[k] * local(p, k);
                     }
                     return amp * std::exp(wave * ax) * (trig ? std::cos(wave * bx + phase) : 1.0);
                   }});
  }
  lib.resize(std::min(lib.size(), std::max<std::size_t>(count, 1)));
  return lib;
}

HarmonicSample sample_harmonic(const DiscreteOperator& op, const BoundaryDatum& datum, double tol) {
  const GridSpec& g = op.grid();
  Vector boundary = Vector::Zero(g.node_count());
  for (Index k = 0; k < g.node_count(); ++k)
    if (g.on_boundary(k)) boundary[k] = datum.value(g.coords(k));
  const Vector rhs = -(op.boundary_coupling() * boundary);
  LinearSolution sol = solve_spd(op.matrix(), rhs, tol);
  if (!sol.report.converged) throw Error("harmonic extension of '" + datum.label + "' did not converge");
  ScalarField v(g, 0.0);
  for (Index k = 0; k < g.node_count(); ++k) {
    const Index s = op.slot(k);
    v[k] = s < 0 ? boundary[k] : sol.x[s];
  }
  return {std::move(v), SampleKind::harmonic, datum.label};
}

HarmonicSample sample_function(const DiscreteOperator& op, const BoundaryDatum& function, double harmonic_tol) {
  const GridSpec& g = op.grid();
  ScalarField v(g, 0.0);
  double vmax = 0.0;
  for (Index k = 0; k < g.node_count(); ++k) {
    v[k] = function.value(g.coords(k));
    vmax = std::max(vmax, std::abs(v[k]));
  }
  if (!v.all_finite()) throw Error("function '" + function.label + "' is not finite on the grid");
  const ScalarField av = apply(op, v);
  double dmax = 0.0;
  const SparseMatrix& a = op.matrix();
  for (int i = 0; i < a.rows(); ++i) dmax = std::max(dmax, a.coeff(i, i));
  const double floor = harmonic_tol * std::max(vmax, 1e-300) * dmax;
  double lo = 0.0, hi = 0.0;
  for (Index k = 0; k < g.node_count(); ++k) {
    lo = std::min(lo, av[k]);
    hi = std::max(hi, av[k]);
  }
  SampleKind kind;
  if (hi <= floor && lo >= -floor) kind = SampleKind::harmonic;
  else if (hi <= floor) kind = SampleKind::subsolution;
  else if (lo >= -floor) kind = SampleKind::supersolution;
  else throw Error("function '" + function.label + "' is neither a sub- nor a supersolution on this grid");
  return {std::move(v), kind, function.label};
}

double mask_average(const GridSpec& grid, const Mask& mask, const ScalarField& field) {
  if (static_cast<Index>(mask.size()) != grid.node_count()) throw Error("mask size does not match grid");
  double num = 0.0, den = 0.0;
  for (Index k = 0; k < grid.node_count(); ++k) {
    if (!mask[static_cast<std::size_t>(k)]) continue;
    const double v = grid.cell_volume(k);
    num += v * field[k];
    den += v;
  }
  if (den <= 0.0) throw Error("average over an empty mask");
  return num / den;
}

double default_mean_value_tolerance(const MeanValueSet& set, const std::vector<HarmonicSample>& samples) {
  double grad = 0.0;
  for (const auto& s : samples) grad = std::max(grad, max_gradient_on(set.grid, set.mask, s.field));
  return 2.0 * set.grid.h() * grad;
}

VerificationReport check_mean_value(const MeanValueSet& set, const std::vector<HarmonicSample>& samples,
                                    Index x0, double tolerance) {
  if (std::none_of(set.mask.begin(), set.mask.end(), [](std::uint8_t b) { return b != 0; }))
    throw Error("mean value check on an empty mask");
  if (x0 < 0 || x0 >= set.grid.node_count()) throw Error("x0 is not a grid node");
  require_same_grid(set.grid, samples);

  VerificationReport rep;
  rep.rows.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    MeanValueRow& row = rep.rows[i];
    row.label = samples[i].boundary_label;
    row.value_at_x0 = samples[i].field[x0];
    row.average = mask_average(set.grid, set.mask, samples[i].field);
    row.discrepancy = std::abs(row.average - row.value_at_x0);
  });
  for (const auto& row : rep.rows) rep.max_discrepancy = std::max(rep.max_discrepancy, row.discrepancy);
  rep.tolerance = tolerance < 0.0 ? default_mean_value_tolerance(set, samples) : tolerance;
  rep.passed = rep.max_discrepancy <= rep.tolerance;
  return rep;
}

VerificationReport check_monotonicity(const MeanValueFamily& family, const std::vector<HarmonicSample>& samples,
                                      Index x0, double tolerance) {
  if (family.sets.size() < 2) throw Error("monotonicity needs a family with at least two radii");
  const GridSpec& g = family.sets.front().grid;
  if (x0 < 0 || x0 >= g.node_count()) throw Error("x0 is not a grid node");
  require_same_grid(g, samples);

  const std::size_t m = family.sets.size();
  // averages[i][k]: sample i over set k.
  std::vector<std::vector<double>> averages(samples.size(), std::vector<double>(m));
  parallel_for(samples.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < m; ++k) averages[i][k] = mask_average(g, family.sets[k].mask, samples[i].field);
  });

  VerificationReport rep;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double sign = samples[i].kind == SampleKind::supersolution ? -1.0 : 1.0;
    const double v0 = samples[i].field[x0];
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        MonotonicityRow row;
        row.label = samples[i].boundary_label;
        row.kind = samples[i].kind;
        row.r = family.radii[a];
        row.s = family.radii[b];
        row.value_at_x0 = v0;
        row.average_r = averages[i][a];
        row.average_s = averages[i][b];
        row.margin_inner = sign * (row.average_r - v0);
        row.margin_outer = sign * (row.average_s - row.average_r);
        const double violation = row.kind == SampleKind::harmonic
                                     ? std::max(std::abs(row.margin_inner), std::abs(row.margin_outer))
                                     : std::max({0.0, -row.margin_inner, -row.margin_outer});
        rep.max_discrepancy = std::max(rep.max_discrepancy, violation);
        rep.pairs.push_back(row);
      }
    }
  }
  rep.tolerance = tolerance < 0.0 ? default_mean_value_tolerance(family.sets.back(), samples) : tolerance;
  rep.passed = rep.max_discrepancy <= rep.tolerance;
  return rep;
}

double dual_identity_check(const DiscreteOperator& op, const ObstacleSolution& solution,
                           const HarmonicSample& sample) {
  const GridSpec& g = op.grid();
  if (!(sample.field.grid() == g) || !(solution.w.grid() == g)) throw Error("dual identity: grid mismatch");
  if (solution.touches_boundary) throw Error("dual identity needs a set at least two cells from the boundary");
  if (solution.occupancy.size() != g.node_count()) throw Error("obstacle solution carries no occupancy");
  double sum = 0.0;
  for (Index k = 0; k < g.node_count(); ++k) sum += solution.occupancy[k] * g.cell_volume(k) * sample.field[k];
  return std::abs(sample.field[solution.source] - sum / std::pow(solution.r, g.dim()));
}

}  // namespace mvset
