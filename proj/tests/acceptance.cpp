// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Usage: mvset_acceptance [criterion ...]   (no arguments runs all of them)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mvset/classical.hpp"
#include "mvset/config.hpp"
#include "mvset/obstacle.hpp"
#include "mvset/schwarz.hpp"
#include "mvset/verify.hpp"

#ifndef MVSET_CLI_PATH
#define MVSET_CLI_PATH "mvset"
#endif

using namespace mvset;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Unit-square problem with the source at the centre.
struct Setup {
  GridSpec grid;
  DiscreteOperator op;
  Index x0 = -1;
  GreenField green;
};

Setup make_setup(Index nodes, const std::string& family, double scale = 1.0) {
  const std::vector<double> origin{0.0, 0.0}, extent{1.0, 1.0};
  GridSpec g = build_grid(2, origin, extent, nodes);
  CoefficientField c = make_coefficients(g, CoefficientFamily::parse(family));
  if (scale != 1.0) c = c.scaled(scale);
  Setup s{g, assemble(c), locate_node(g, {0.5, 0.5, 0.0}), {}};
  s.green = compute_green(s.op, s.x0);
  return s;
}

const std::vector<double> kRadii{0.1, 0.15, 0.2, 0.25, 0.3};

Outcome criterion1() {
  const Setup s = make_setup(257, "identity");
  const double r = 0.3;
  const MeanValueSet set = extract_set(solve_obstacle(s.op, s.green, r));
  const double radius = r / std::sqrt(std::numbers::pi);
  const double haus = hausdorff_to_circle(set.contour, {0.5, 0.5}, radius);
  const double ratio = set.volume / (r * r);
  return {haus <= 2.0 * s.grid.h() && ratio >= 0.97 && ratio <= 1.03,
          fmt("hausdorff = %.3f h (<= 2 h), |D_r|/r^2 = %.5f (in [0.97, 1.03])", haus / s.grid.h(), ratio)};
}

Outcome criterion2() {
  double worst = 0.0;
  int checked = 0;
  for (Index nodes : {65, 129, 257}) {
    for (const std::string fam : {"identity", "checkerboard(1,10,0.13)"}) {
      const Setup s = make_setup(nodes, fam);
      std::vector<HarmonicSample> samples;
      for (const auto& d : datum_library(s.grid, 10)) samples.push_back(sample_harmonic(s.op, d, 1e-10));
      for (double r : kRadii) {
        const ObstacleSolution sol = solve_obstacle(s.op, s.green, r);
        if (sol.touches_boundary) continue;
        for (const auto& v : samples) worst = std::max(worst, dual_identity_check(s.op, sol, v));
        ++checked;
      }
    }
  }
  return {worst <= 1e-7 && checked > 0,
          fmt("max residual %.3e over %d solutions x 10 samples on 65^2, 129^2, 257^2 (<= 1e-7)", worst, checked)};
}

double continuum_discrepancy(Index nodes) {
  const Setup s = make_setup(nodes, "checkerboard(1,10,0.13)");
  const MeanValueSet set = extract_set(solve_obstacle(s.op, s.green, 0.3));
  std::vector<HarmonicSample> samples;
  for (const auto& d : datum_library(s.grid, 10)) samples.push_back(sample_harmonic(s.op, d, 1e-10));
  return check_mean_value(set, samples, s.x0).max_discrepancy;
}

Outcome criterion3() {
  const double d65 = continuum_discrepancy(65);
  const double d129 = continuum_discrepancy(129);
  const double d257 = continuum_discrepancy(257);
  const double q1 = d129 / d65, q2 = d257 / d129;
  return {q1 <= 0.7 && q2 <= 0.7,
          fmt("max discrepancy 65^2 %.3e, 129^2 %.3e, 257^2 %.3e; ratios %.3f, %.3f (<= 0.7)", d65, d129, d257, q1,
              q2)};
}

Outcome criterion4() {
  std::string detail;
  bool pass = true;
  for (const std::string fam : {"checkerboard(1,10,0.13)", "smooth-rotation(1,4)"}) {
    const Setup s = make_setup(129, fam);
    const MeanValueFamily f = compute_family(s.op, s.green, kRadii);
    Index in_band = 0, beyond = 0;
    for (const auto& c : f.nesting) {
      in_band += c.violations - c.violations_beyond_band;
      beyond += c.violations_beyond_band;
    }
    pass = pass && beyond == 0 && f.nested;
    detail += fmt("%s: %ld in-band, %ld beyond band; ", fam.c_str(), static_cast<long>(in_band),
                  static_cast<long>(beyond));
  }
  return {pass, detail + "(0 beyond band required)"};
}

Outcome criterion5() {
  const Setup s = make_setup(129, "identity");
  const MeanValueFamily f = compute_family(s.op, s.green, kRadii);
  const Point c = s.grid.coords(s.x0);
  const BoundaryDatum sq{"|x-x0|^2", [c](const Point& p) {
                           return (p[0] - c[0]) * (p[0] - c[0]) + (p[1] - c[1]) * (p[1] - c[1]);
                         }};
  const HarmonicSample v = sample_function(s.op, sq);
  bool increasing = v.kind == SampleKind::subsolution;
  double worst_rel = 0.0, worst_nominal = 0.0, prev = v.field[s.x0];
  for (std::size_t i = 0; i < f.sets.size(); ++i) {
    const double avg = mask_average(s.grid, f.sets[i].mask, v.field);
    increasing = increasing && avg > prev;
    prev = avg;
    // Closed-form disk average R^2 n/(n+2) with R the radius of the disk of
    // the set's own volume; the nominal radius r/sqrt(pi) is reported too.
    const double r_set = std::sqrt(f.sets[i].volume / std::numbers::pi);
    const double r_nom = kRadii[i] / std::sqrt(std::numbers::pi);
    worst_rel = std::max(worst_rel, std::abs(avg / (0.5 * r_set * r_set) - 1.0));
    worst_nominal = std::max(worst_nominal, std::abs(avg / (0.5 * r_nom * r_nom) - 1.0));
  }
  return {increasing && worst_rel <= 0.05,
          fmt("strictly increasing: %s; max relative error vs disk average %.4f (<= 0.05); against the nominal "
              "radius r/sqrt(pi): %.4f",
              increasing ? "yes" : "no", worst_rel, worst_nominal)};
}

Outcome criterion6() {
  const Setup s = make_setup(257, "anisotropic(4)");
  const std::vector<double> radii{0.1, 0.125, 0.15, 0.175, 0.2, 0.225, 0.25, 0.275, 0.3};
  const MeanValueFamily f = compute_family(s.op, s.green, radii);
  std::vector<double> ratios;
  for (const auto& set : f.sets) ratios.push_back(set.outradius / set.inradius);
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  double spread = 0.0;
  for (double q : ratios) spread = std::max(spread, std::abs(q / median - 1.0));
  return {spread <= 0.2, fmt("out/in ratios from %.3f to %.3f, median %.3f, max deviation %.1f%% (<= 20%%)",
                             sorted.front(), sorted.back(), median, 100.0 * spread)};
}

Outcome criterion7() {
  const double r = 0.3;
  double err[2];
  int i = 0;
  for (Index nodes : {129, 257}) {
    const Setup s = make_setup(nodes, "identity");
    const MeanValueSet set = extract_set(solve_obstacle(s.op, s.green, r));
    err[i++] = std::abs(set.volume / (r * r) - 1.0);
  }
  const double q = err[1] / err[0];
  return {err[0] <= 0.04 && q <= 0.5,
          fmt("r = 0.3: error %.4f at h = 1/128 (<= 0.04), %.4f at h = 1/256, ratio %.3f (<= 0.5)", err[0], err[1], q)};
}

struct Vanish {
  double max_abs = 0.0, max_grad = 0.0, min_w = 0.0;
};

Vanish schwarz_run(Index nodes, const std::string& family) {
  const Setup s = make_setup(nodes, family);
  Vanish out;
  for (double r : kRadii) {
    const ObstacleSolution sol = solve_obstacle(s.op, s.green, r);
    if (sol.touches_boundary) continue;
    const VanishingReport v = check_vanishing(build_potential_direct(s.op, extract_set(sol)));
    out.max_abs = std::max(out.max_abs, v.max_abs);
    out.max_grad = std::max(out.max_grad, v.max_gradient);
    out.min_w = std::min(out.min_w, v.min_value);
  }
  return out;
}

Outcome criterion8() {
  // Both measures sit at the linear-solver floor; "decreasing" is read as not
  // growing beyond that floor (10 tol for values, 10 tol / h for gradients).
  const double tol = kDefaultLinearTol;
  bool pass = true;
  std::string detail;
  for (const std::string fam : {"identity", "checkerboard(1,10,0.13)"}) {
    const Vanish a = schwarz_run(129, fam);
    const Vanish b = schwarz_run(257, fam);
    const bool ok = a.max_abs <= 1e-4 && a.max_grad <= 1e-4 && b.max_abs <= std::max(a.max_abs, 10.0 * tol) &&
                    b.max_grad <= std::max(a.max_grad, 10.0 * tol * 256.0) && std::min(a.min_w, b.min_w) >= -1e-6;
    pass = pass && ok;
    detail += fmt("%s: |W| %.2e -> %.2e, |grad W| %.2e -> %.2e, min W %.2e; ", fam.c_str(), a.max_abs, b.max_abs,
                  a.max_grad, b.max_grad, std::min(a.min_w, b.min_w));
  }
  return {pass, detail};
}

Outcome criterion9() {
  double worst = 0.0;
  for (const std::string fam : {"identity", "checkerboard(1,10,0.13)"}) {
    const Setup s = make_setup(129, fam);
    for (double r : kRadii) {
      const MeanValueSet set = extract_set(solve_obstacle(s.op, s.green, r));
      const SchwarzPotential a = build_potential_direct(s.op, set);
      const SchwarzPotential b = build_potential_integral(s.op, s.green, set);
      for (Index k = 0; k < a.W.size(); ++k) worst = std::max(worst, std::abs(a.W[k] - b.W[k]));
    }
  }
  return {worst <= 1e-8, fmt("max |W_direct - W_integral| = %.3e (<= 1e-8)", worst)};
}

Outcome criterion10() {
  const Setup s = make_setup(129, "identity");
  const MeanValueSet truth = extract_set(solve_obstacle(s.op, s.green, 0.3));
  const UniquenessReport u0 = uniqueness_experiment(s.op, s.green, truth);
  bool pass = u0.max_abs_upsilon <= 1e-7;
  std::string detail = fmt("true set max|U| %.2e (<= 1e-7); max U:", u0.max_abs_upsilon);
  int n = 0;
  for (const auto& c : perturbed_candidates(truth)) {
    const UniquenessReport u = uniqueness_experiment(s.op, s.green, c.set);
    pass = pass && u.max_upsilon >= 1e-3;
    detail += fmt(" %s %.2e%s", c.name.c_str(), u.max_upsilon, u.max_upsilon >= 1e-3 ? "" : " (short)");
    ++n;
  }
  return {pass && n == 5, detail + " (>= 1e-3 each)"};
}

Outcome criterion11() {
  double tangency = 0.0;
  for (int n : {2, 3})
    for (double s : {0.1, 1.0, 10.0}) {
      const TangencyResiduals t = tangency_residuals(build_psi(n, s));
      tangency = std::max({tangency, t.value, t.derivative});
    }
  double spread = 0.0;
  for (int n : {2, 3}) {
    const double ref = constant_identity(n, 1.0);
    for (double r : {0.1, 1.0, 10.0}) spread = std::max(spread, std::abs(constant_identity(n, r) / ref - 1.0));
  }
  const double pairing = weak_pairing([](const Point& x) { return x[0] * x[0] + x[1] * x[1]; },
                                      build_phi(2, 0.5, 1.0), QuadratureGrid{2, 1.0, 401});
  const double rel = std::abs(pairing / (0.75 * std::numbers::pi) - 1.0);
  return {tangency <= 1e-12 && spread <= 1e-12 && rel <= 0.01,
          fmt("tangency %.1e, C|B_r| spread %.1e, pairing %.6f vs 3pi/4 (rel %.1e)", tangency, spread, pairing, rel)};
}

Outcome criterion12() {
  Index flips = 0, compared = 0;
  for (const std::string fam : {"identity", "checkerboard(1,10,0.13)", "smooth-rotation(1,4)"}) {
    const Setup a = make_setup(65, fam);
    const Setup b = make_setup(65, fam, 3.0);
    for (double r : kRadii) {
      const MeanValueSet sa = extract_set(solve_obstacle(a.op, a.green, r));
      const MeanValueSet sb = extract_set(solve_obstacle(b.op, b.green, r));
      for (std::size_t k = 0; k < sa.mask.size(); ++k) flips += sa.mask[k] != sb.mask[k];
      ++compared;
    }
  }
  return {flips == 0, fmt("%ld differing nodes over %ld mask pairs", static_cast<long>(flips),
                          static_cast<long>(compared))};
}

std::map<std::string, std::string> read_tree(const std::filesystem::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    files[std::filesystem::relative(e.path(), root).string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return files;
}

Outcome criterion13() {
  const auto base = std::filesystem::temp_directory_path() / "mvset_acceptance_determinism";
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  const auto cfg = base / "run.cfg";
  std::ofstream(cfg) << "[grid]\nnodes = 65\n[operator]\ncoefficients = checkerboard(1,10,0.13)\n"
                        "[problem]\nx0 = 0.5, 0.5\nradii = 0.1, 0.2, 0.3\n[output]\nfield_format = both\n";
  // Same config, same output directory: snapshot after each run.
  int status[2];
  std::map<std::string, std::string> trees[2];
  for (int i = 0; i < 2; ++i) {
    std::filesystem::remove_all(base / "out");
    const std::string cmd = std::string("\"") + MVSET_CLI_PATH + "\" all -q -c \"" + cfg.string() + "\" -o \"" +
                            (base / "out").string() + "\" > /dev/null";
    status[i] = std::system(cmd.c_str());
    trees[i] = read_tree(base / "out");
  }
  const auto& a = trees[0];
  const auto& b = trees[1];
  std::size_t raw = 0;
  for (const auto& [name, _] : a) raw += name.size() > 4 && name.ends_with(".raw");
  const bool same = !a.empty() && a == b;
  return {same && raw > 0 && status[0] == status[1],
          fmt("%zu files (%zu raw fields) compared, byte-identical: %s", a.size(), raw, same ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3,  criterion4,  criterion5,  criterion6, criterion7,
      criterion8, criterion9, criterion10, criterion11, criterion12, criterion13};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);

  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::printf("criterion %d: unknown\n", id);
      ++failures;
      continue;
    }
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(id - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
