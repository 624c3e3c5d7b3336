#include "mvset/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>

#include <json.hpp>

#include "mvset/classical.hpp"
#include "mvset/io.hpp"
#include "mvset/obstacle.hpp"
#include "mvset/schwarz.hpp"
#include "mvset/verify.hpp"

namespace mvset {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string radius_tag(std::size_t index) { return "r" + std::to_string(index); }

ordered_json to_json(const SolveReport& r) {
  return {{"iterations", r.iterations},         {"final_residual", r.final_residual},
          {"converged", r.converged},           {"complementarity_gap", r.complementarity_gap},
          {"sweeps", r.sweeps},                 {"polish_rounds", r.polish_rounds},
          {"m_matrix", r.m_matrix}};
}

ordered_json to_json(const Check& c) {
  return {{"subcommand", c.subcommand}, {"name", c.name},         {"value", c.value},
          {"relation", c.relation},     {"threshold", c.threshold}, {"passed", c.passed}};
}

class Pipeline {
 public:
  explicit Pipeline(const RunConfig& config) : cfg_(config), dir_(config.directory) {
    fs::create_directories(dir_);
    lcp_.tol = cfg_.lcp_tol;
    lcp_.max_iter = cfg_.max_iter;
    lcp_.omega = cfg_.omega;
  }

  RunResult& result() { return result_; }

  void run(const std::string& name) {
    static const std::vector<std::pair<std::string, void (Pipeline::*)()>> table = {
        {"green", &Pipeline::green},       {"obstacle", &Pipeline::obstacle},
        {"family", &Pipeline::family},     {"verify-mvt", &Pipeline::verify_mvt},
        {"schwarz", &Pipeline::schwarz},   {"uniqueness", &Pipeline::uniqueness},
        {"classical", &Pipeline::classical}};
    for (const auto& [n, fn] : table) {
      if (n != name) continue;
      current_ = n;
      report_ = ordered_json::object();
      try {
        (this->*fn)();
      } catch (const std::exception& e) {
        result_.errors.push_back(n + ": " + e.what());
        report_["error"] = e.what();
      }
      report_["checks"] = ordered_json::array();
      for (const auto& c : result_.checks)
        if (c.subcommand == n) report_["checks"].push_back(to_json(c));
      write_text(n + ".json", report_.dump(2) + "\n");
      return;
    }
    throw Error("unknown subcommand '" + name + "'");
  }

  void finish() {
    write_text("config.canonical", canonical_config(cfg_));
    ordered_json failures = ordered_json::object();
    failures["passed"] = result_.passed();
    failures["failed_checks"] = ordered_json::array();
    for (const auto& c : result_.checks)
      if (!c.passed) failures["failed_checks"].push_back(to_json(c));
    failures["errors"] = result_.errors;
    write_text("failures.json", failures.dump(2) + "\n");
  }

 private:
  // Shared state, built on first use.
  const DiscreteOperator& op() {
    if (!op_) {
      grid_ = config_grid(cfg_);
      const CoefficientField coeffs = make_coefficients(grid_, CoefficientFamily::parse(cfg_.coefficients));
      op_ = assemble(coeffs, cfg_.face_average);
      Point p{0.0, 0.0, 0.0};
      for (int a = 0; a < cfg_.dim; ++a) p[a] = cfg_.x0[static_cast<std::size_t>(a)];
      source_ = locate_node(grid_, p);
    }
    return *op_;
  }

  const GreenField& green_field() {
    if (!green_) {
      const DiscreteOperator& a = op();
      green_ = compute_green(a, source_, cfg_.linear_tol);
    }
    return *green_;
  }

  const MeanValueFamily& the_family() {
    if (!family_) {
      const GreenField& g = green_field();
      family_ = compute_family(op(), g, cfg_.radii, lcp_);
    }
    return *family_;
  }

  // Largest radius whose set keeps clear of the boundary.
  std::optional<std::size_t> reference_index() {
    const auto& fam = the_family();
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < fam.radii.size(); ++i)
      if (!fam.solutions[i].touches_boundary) best = i;
    return best;
  }

  void check(const std::string& name, double value, const std::string& relation, double threshold) {
    const bool ok = relation == "<=" ? value <= threshold : value >= threshold;
    result_.checks.push_back({current_, name, value, threshold, relation, ok && std::isfinite(value)});
  }

  void write_text(const std::string& rel, const std::string& text) {
    const fs::path p = dir_ / rel;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
    note(rel);
  }

  void note(const std::string& rel) {
    if (std::find(result_.artifacts.begin(), result_.artifacts.end(), rel) == result_.artifacts.end())
      result_.artifacts.push_back(rel);
  }

  void field(const ScalarField& f, const std::string& stem) {
    for (FieldFormat fmt : config_field_formats(cfg_)) {
      const std::string rel = "fields/" + stem + "." + to_string(fmt);
      write_field(f, dir_ / rel, fmt);
      note(rel);
    }
  }

  void green() {
    const GreenField& g = green_field();
    const GridSpec& grid = op().grid();
    field(g.field, "green");
    double min_interior = INFINITY, peak = -INFINITY;
    Index argmax = -1;
    for (Index k = 0; k < grid.node_count(); ++k) {
      if (grid.on_boundary(k)) continue;
      min_interior = std::min(min_interior, g.field[k]);
      if (g.field[k] > peak) {
        peak = g.field[k];
        argmax = k;
      }
    }
    report_["source"] = source_;
    report_["mass"] = g.mass;
    report_["min_interior"] = min_interior;
    report_["max_at_source"] = argmax == source_;
    report_["solve"] = to_json(g.report);
    const double n_interior = static_cast<double>(op().interior_count());
    check("solver_residual", g.report.final_residual, "<=", cfg_.linear_tol);
    check("unit_mass_error", std::abs(g.mass - 1.0), "<=", 10.0 * cfg_.linear_tol * std::sqrt(n_interior));
    check("min_interior_value", min_interior, ">=", 0.0);
    check("source_is_maximum", argmax == source_ ? 1.0 : 0.0, ">=", 1.0);
  }

  void obstacle() {
    const auto& fam = the_family();
    const int n = op().grid().dim();
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < fam.radii.size(); ++i) {
      const ObstacleSolution& s = fam.solutions[i];
      const MeanValueSet& set = fam.sets[i];
      const double rn = std::pow(s.r, n);
      field(s.w, "w_" + radius_tag(i));
      field(s.u, "u_" + radius_tag(i));
      field(s.occupancy, "occupancy_" + radius_tag(i));
      rows.push_back({{"r", s.r},
                      {"volume", set.volume},
                      {"volume_ratio", set.volume / rn},
                      {"measure_ratio", set.measure / rn},
                      {"threshold", s.threshold},
                      {"touches_boundary", s.touches_boundary},
                      {"solve", to_json(s.report)}});
      const std::string tag = "[" + radius_tag(i) + "]";
      check("lcp_residual" + tag, s.report.final_residual, "<=", cfg_.lcp_tol);
      check("lcp_gap" + tag, s.report.complementarity_gap, "<=", cfg_.lcp_tol);
      check("measure_balance" + tag, std::abs(set.measure / rn - 1.0), "<=", 1e-9);
    }
    report_["radii"] = rows;
    // The cell-counted volume carries an O(h/r) boundary-layer error, so the
    // volume law is gated at the largest radius that stays inside the box.
    if (const auto ref = reference_index()) {
      const double rn = std::pow(fam.radii[*ref], n);
      report_["volume_law_radius"] = fam.radii[*ref];
      check("volume_law", std::abs(fam.sets[*ref].volume / rn - 1.0), "<=", cfg_.volume_tol);
    } else {
      check("set_inside_box", 0.0, ">=", 1.0);
    }
  }

  void family() {
    const auto& fam = the_family();
    ordered_json sets = ordered_json::array();
    for (std::size_t i = 0; i < fam.radii.size(); ++i) {
      const MeanValueSet& s = fam.sets[i];
      write_mask(s.grid, s.mask, dir_ / ("masks/mask_" + radius_tag(i) + ".csv"));
      note("masks/mask_" + radius_tag(i) + ".csv");
      if (s.grid.dim() == 2) {
        write_contour(s.contour, dir_ / ("contours/contour_" + radius_tag(i) + ".csv"));
        note("contours/contour_" + radius_tag(i) + ".csv");
      }
      sets.push_back({{"r", fam.radii[i]},
                      {"volume", s.volume},
                      {"measure", s.measure},
                      {"inradius", s.inradius},
                      {"outradius", s.outradius},
                      {"connected", s.connected},
                      {"touches_boundary", s.touches_boundary}});
      check("connected[" + radius_tag(i) + "]", s.connected ? 1.0 : 0.0, ">=", 1.0);
    }
    ordered_json nest = ordered_json::array();
    Index beyond = 0;
    for (const auto& c : fam.nesting) {
      nest.push_back({{"r", c.r}, {"s", c.s}, {"violations", c.violations},
                      {"violations_beyond_band", c.violations_beyond_band}});
      beyond += c.violations_beyond_band;
    }
    report_["sets"] = sets;
    report_["nesting"] = nest;
    report_["r0_estimate"] = fam.r0_estimate;
    check("nesting_violations_beyond_band", static_cast<double>(beyond), "<=", 0.0);
  }

  std::vector<HarmonicSample> harmonic_samples() {
    std::vector<HarmonicSample> out;
    for (const auto& d : datum_library(op().grid(), static_cast<std::size_t>(cfg_.samples), cfg_.seed))
      out.push_back(sample_harmonic(op(), d, cfg_.linear_tol));
    return out;
  }

  void verify_mvt() {
    const auto& fam = the_family();
    const std::vector<HarmonicSample> samples = harmonic_samples();
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < fam.radii.size(); ++i) {
      const std::string tag = "[" + radius_tag(i) + "]";
      const VerificationReport rep = check_mean_value(fam.sets[i], samples, source_, cfg_.mean_value_tol);
      ordered_json per_sample = ordered_json::array();
      for (const auto& row : rep.rows)
        per_sample.push_back({{"sample", row.label}, {"value_at_x0", row.value_at_x0},
                              {"average", row.average}, {"discrepancy", row.discrepancy}});
      ordered_json entry = {{"r", fam.radii[i]}, {"rows", per_sample},
                            {"max_discrepancy", rep.max_discrepancy}, {"tolerance", rep.tolerance}};
      check("mean_value" + tag, rep.max_discrepancy, "<=", rep.tolerance);
      if (!fam.solutions[i].touches_boundary) {
        double dual = 0.0;
        for (const auto& s : samples) dual = std::max(dual, dual_identity_check(op(), fam.solutions[i], s));
        entry["dual_identity_residual"] = dual;
        check("dual_identity" + tag, dual, "<=", cfg_.dual_tol);
      }
      rows.push_back(entry);
    }
    report_["mean_value"] = rows;

    if (fam.radii.size() >= 2) {
      // A v = -V is a strict discrete subsolution for any coefficients.
      ScalarField minus_volume(op().grid(), 0.0);
      for (Index k = 0; k < minus_volume.size(); ++k) minus_volume[k] = -op().grid().cell_volume(k);
      const FieldSolution sub = solve_spd(op(), minus_volume, cfg_.linear_tol);
      ScalarField super = sub.field;
      for (double& v : super.values()) v = -v;
      std::vector<HarmonicSample> mono = samples;
      mono.push_back({sub.field, SampleKind::subsolution, "solve(A v = -V)"});
      mono.push_back({super, SampleKind::supersolution, "solve(A v = V)"});
      const VerificationReport rep = check_monotonicity(fam, mono, source_, cfg_.mean_value_tol);
      ordered_json pairs = ordered_json::array();
      for (const auto& p : rep.pairs) {
        if (p.kind == SampleKind::harmonic) continue;
        pairs.push_back({{"sample", p.label}, {"kind", to_string(p.kind)}, {"r", p.r}, {"s", p.s},
                         {"value_at_x0", p.value_at_x0}, {"average_r", p.average_r}, {"average_s", p.average_s},
                         {"margin_inner", p.margin_inner}, {"margin_outer", p.margin_outer}});
      }
      report_["monotonicity"] = {{"pairs", pairs}, {"max_violation", rep.max_discrepancy}, {"tolerance", rep.tolerance}};
      check("monotonicity", rep.max_discrepancy, "<=", rep.tolerance);
    }
  }

  void schwarz() {
    const auto& fam = the_family();
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < fam.radii.size(); ++i) {
      if (fam.solutions[i].touches_boundary) continue;
      const std::string tag = "[" + radius_tag(i) + "]";
      const SchwarzPotential direct = build_potential_direct(op(), fam.sets[i], cfg_.linear_tol);
      const SchwarzPotential integral = build_potential_integral(op(), green_field(), fam.sets[i], cfg_.linear_tol);
      double agree = 0.0;
      for (Index k = 0; k < direct.W.size(); ++k) agree = std::max(agree, std::abs(direct.W[k] - integral.W[k]));
      const VanishingReport v = check_vanishing(direct, cfg_.linear_tol, cfg_.vanishing_c);
      field(direct.W, "schwarz_" + radius_tag(i));
      rows.push_back({{"r", fam.radii[i]}, {"construction_gap", agree}, {"outside_nodes", v.outside_nodes},
                      {"max_abs_outside", v.max_abs}, {"max_gradient_outside", v.max_gradient},
                      {"min_value", v.min_value}, {"tolerance", v.tolerance}});
      check("construction_agreement" + tag, agree, "<=", cfg_.agreement_tol);
      check("vanishing" + tag, v.max_abs, "<=", v.tolerance);
      check("gradient_vanishing" + tag, v.max_gradient, "<=", v.tolerance);
      check("nonnegative" + tag, v.min_value, ">=", -v.tolerance);
    }
    report_["potentials"] = rows;
  }

  ordered_json uniqueness_row(const std::string& name, const MeanValueSet& cand, const UniquenessReport& u) {
    return {{"candidate", name},
            {"measure", cand.measure},
            {"r_matched", u.r_matched},
            {"max_upsilon", u.max_upsilon},
            {"min_upsilon", u.min_upsilon},
            {"max_abs_upsilon", u.max_abs_upsilon},
            {"symmetric_difference_volume", u.symmetric_difference_volume},
            {"consistent", u.consistent}};
  }

  void uniqueness() {
    UniquenessOptions opt;
    opt.linear_tol = cfg_.linear_tol;
    opt.lcp = lcp_;
    opt.verdict_tolerance = cfg_.verdict_tol;
    ordered_json rows = ordered_json::array();

    if (!cfg_.candidate.empty()) {
      GridSpec g;
      Mask m = read_mask(cfg_.candidate, &g);
      if (!(g == op().grid())) throw Error("candidate mask grid differs from the configured grid");
      const MeanValueSet cand = set_from_mask(g, std::move(m), source_);
      const UniquenessReport u = uniqueness_experiment(op(), green_field(), cand, opt);
      field(u.upsilon, "upsilon_external");
      rows.push_back(uniqueness_row("external", cand, u));
      report_["candidates"] = rows;
      return;
    }

    const auto ref = reference_index();
    if (!ref) throw Error("no family member stays inside the box");
    const MeanValueSet& truth = the_family().sets[*ref];
    report_["reference_radius"] = the_family().radii[*ref];
    const UniquenessReport u0 = uniqueness_experiment(op(), green_field(), truth, opt);
    field(u0.upsilon, "upsilon_true");
    rows.push_back(uniqueness_row("true", truth, u0));
    check("true_set_upsilon", u0.max_abs_upsilon, "<=", cfg_.verdict_tol);

    for (const auto& cand : perturbed_candidates(truth)) {
      const UniquenessReport u = uniqueness_experiment(op(), green_field(), cand.set, opt);
      field(u.upsilon, "upsilon_" + cand.name);
      rows.push_back(uniqueness_row(cand.name, cand.set, u));
      check("discrimination[" + cand.name + "]", u.max_upsilon, ">=", cfg_.discrimination);
    }
    report_["candidates"] = rows;
  }

  void classical() {
    ordered_json tangency = ordered_json::array();
    double worst_tangency = 0.0;
    for (int n : {2, 3}) {
      for (double s : {0.1, 1.0, 10.0}) {
        const TangencyResiduals t = tangency_residuals(build_psi(n, s));
        tangency.push_back({{"n", n}, {"s", s}, {"value", t.value}, {"derivative", t.derivative}});
        worst_tangency = std::max({worst_tangency, t.value, t.derivative});
      }
    }
    report_["tangency"] = tangency;
    check("tangency_residual", worst_tangency, "<=", 1e-12);

    ordered_json identity = ordered_json::array();
    for (int n : {2, 3}) {
      const double ref = constant_identity(n, 1.0);
      double spread = 0.0;
      for (double r : {0.1, 1.0, 10.0}) {
        const double c = constant_identity(n, r);
        identity.push_back({{"n", n}, {"r", r}, {"C_times_volume", c}});
        spread = std::max(spread, std::abs(c / ref - 1.0));
      }
      check("constant_identity[n=" + std::to_string(n) + "]", spread, "<=", 1e-12);
    }
    report_["constant_identity"] = identity;

    const PhiFunction phi = build_phi(2, 0.5, 1.0);
    const QuadratureGrid quad{2, 1.0, 401};
    const double pairing = weak_pairing([](const Point& x) { return x[0] * x[0] + x[1] * x[1]; }, phi, quad);
    const double expected = 0.75 * std::numbers::pi;
    report_["pairing"] = {{"value", pairing}, {"expected", expected}};
    check("weak_pairing_relative_error", std::abs(pairing / expected - 1.0), "<=", 0.01);
  }

  RunConfig cfg_;
  fs::path dir_;
  LcpOptions lcp_;
  RunResult result_;
  std::string current_;
  ordered_json report_;

  GridSpec grid_;
  std::optional<DiscreteOperator> op_;
  Index source_ = -1;
  std::optional<GreenField> green_;
  std::optional<MeanValueFamily> family_;
};

}  // namespace

bool RunResult::passed() const {
  return errors.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"green",   "obstacle",   "family",    "verify-mvt",
                                                 "schwarz", "uniqueness", "classical", "all"};
  return names;
}

RunResult run_subcommand(const std::string& name, const RunConfig& config) {
  const auto& names = subcommand_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw Error("unknown subcommand '" + name + "'");
  Pipeline p(config);
  if (name == "all") {
    for (const auto& n : names)
      if (n != "all") p.run(n);
  } else {
    p.run(name);
  }
  p.finish();
  return p.result();
}

}  // namespace mvset
