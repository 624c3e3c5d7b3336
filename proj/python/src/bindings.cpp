// Python bindings: fields cross the boundary as numpy arrays shaped like the
// grid (row-major, last axis fastest), masks as bool arrays.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mvset/classical.hpp"
#include "mvset/config.hpp"
#include "mvset/io.hpp"
#include "mvset/obstacle.hpp"
#include "mvset/pipeline.hpp"
#include "mvset/schwarz.hpp"
#include "mvset/verify.hpp"

namespace py = pybind11;
using namespace mvset;

namespace {

std::vector<py::ssize_t> shape_of(const GridSpec& g) {
  std::vector<py::ssize_t> s;
  for (int a = 0; a < g.dim(); ++a) s.push_back(static_cast<py::ssize_t>(g.count(a)));
  return s;
}

py::array_t<double> to_numpy(const ScalarField& f) {
  py::array_t<double> out(shape_of(f.grid()));
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

py::array_t<bool> mask_to_numpy(const GridSpec& g, const Mask& m) {
  py::array_t<bool> out(shape_of(g));
  bool* p = out.mutable_data();
  for (std::size_t k = 0; k < m.size(); ++k) p[k] = m[k] != 0;
  return out;
}

ScalarField from_numpy(const GridSpec& g, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.size() != g.node_count()) throw Error("array has " + std::to_string(a.size()) + " entries, grid has " +
                                              std::to_string(g.node_count()) + " nodes");
  return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

Mask mask_from_numpy(const GridSpec& g, const py::array_t<bool, py::array::c_style | py::array::forcecast>& a) {
  if (a.size() != g.node_count()) throw Error("mask size does not match grid");
  return Mask(a.data(), a.data() + a.size());
}

std::vector<HarmonicSample> samples_from(const GridSpec& g, const std::vector<py::array_t<double>>& fields) {
  std::vector<HarmonicSample> out;
  for (std::size_t k = 0; k < fields.size(); ++k)
    out.push_back({from_numpy(g, fields[k]), SampleKind::harmonic, "sample-" + std::to_string(k)});
  return out;
}

std::vector<py::array_t<double>> contour_arrays(const std::vector<Polyline>& contour) {
  std::vector<py::array_t<double>> out;
  for (const auto& line : contour) {
    py::array_t<double> a({static_cast<py::ssize_t>(line.points.size()), py::ssize_t{2}});
    double* p = a.mutable_data();
    for (const auto& v : line.points) *p++ = v[0], *p++ = v[1];
    out.push_back(std::move(a));
  }
  return out;
}

LcpOptions lcp_options(double tol, double omega, int max_iter) {
  LcpOptions o;
  o.tol = tol;
  o.omega = omega;
  o.max_iter = max_iter;
  return o;
}

Point to_point(const std::vector<double>& v) {
  Point p{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < v.size() && k < 3; ++k) p[k] = v[k];
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mean value sets of divergence-form elliptic operators";
  py::register_exception<Error>(m, "MvsetError", PyExc_ValueError);

  py::class_<GridSpec>(m, "GridSpec")
      .def_property_readonly("dim", &GridSpec::dim)
      .def_property_readonly("h", &GridSpec::h)
      .def_property_readonly("shape", [](const GridSpec& g) { return shape_of(g); })
      .def_property_readonly("origin", [](const GridSpec& g) {
        return std::vector<double>(g.origin().begin(), g.origin().begin() + g.dim());
      })
      .def_property_readonly("node_count", &GridSpec::node_count)
      .def("coords", [](const GridSpec& g, Index node) {
        const Point p = g.coords(node);
        return std::vector<double>(p.begin(), p.begin() + g.dim());
      })
      .def("multi_index", [](const GridSpec& g, Index node) {
        const MultiIndex i = g.multi_index(node);
        return std::vector<Index>(i.begin(), i.begin() + g.dim());
      })
      .def("cell_volumes", [](const GridSpec& g) { return to_numpy(ScalarField(g, cell_volumes(g))); })
      .def("__eq__", [](const GridSpec& a, const GridSpec& b) { return a == b; })
      .def("__repr__", [](const GridSpec& g) {
        return "GridSpec(dim=" + std::to_string(g.dim()) + ", nodes=" + std::to_string(g.node_count()) +
               ", h=" + format_double(g.h()) + ")";
      });

  m.def("build_grid",
        [](int dim, std::vector<double> origin, std::vector<double> extent, std::vector<Index> nodes) {
          return build_grid(dim, origin, extent, nodes);
        },
        py::arg("dim"), py::arg("origin"), py::arg("extent"), py::arg("nodes"));
  m.def("locate_node", [](const GridSpec& g, std::vector<double> p) { return locate_node(g, to_point(p)); });

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("final_residual", &SolveReport::final_residual)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("complementarity_gap", &SolveReport::complementarity_gap)
      .def_readonly("sweeps", &SolveReport::sweeps)
      .def_readonly("polish_rounds", &SolveReport::polish_rounds)
      .def_readonly("m_matrix", &SolveReport::m_matrix);

  py::class_<DiscreteOperator>(m, "DiscreteOperator")
      .def_property_readonly("grid", &DiscreteOperator::grid)
      .def_property_readonly("interior_count", &DiscreteOperator::interior_count)
      .def_property_readonly("matrix", [](const DiscreteOperator& op) {
        return Eigen::SparseMatrix<double, Eigen::RowMajor>(op.matrix());
      })
      .def("apply", [](const DiscreteOperator& op, py::array_t<double> f) {
        return to_numpy(apply(op, from_numpy(op.grid(), f)));
      });

  m.def("assemble",
        [](const GridSpec& g, const std::string& coefficients, const std::string& face_average, double scale) {
          if (face_average != "arithmetic" && face_average != "harmonic")
            throw Error("face_average must be 'arithmetic' or 'harmonic'");
          CoefficientField c = make_coefficients(g, CoefficientFamily::parse(coefficients));
          if (scale != 1.0) c = c.scaled(scale);
          return assemble(c, face_average == "harmonic" ? FaceAverage::harmonic : FaceAverage::arithmetic);
        },
        py::arg("grid"), py::arg("coefficients") = "identity", py::arg("face_average") = "arithmetic",
        py::arg("scale") = 1.0);

  py::class_<GreenField>(m, "GreenField")
      .def_property_readonly("field", [](const GreenField& g) { return to_numpy(g.field); })
      .def_readonly("source", &GreenField::source)
      .def_readonly("mass", &GreenField::mass)
      .def_readonly("report", &GreenField::report);
  m.def("compute_green", &compute_green, py::arg("op"), py::arg("source"), py::arg("tol") = kDefaultLinearTol);

  py::class_<ObstacleSolution>(m, "ObstacleSolution")
      .def_readonly("r", &ObstacleSolution::r)
      .def_readonly("source", &ObstacleSolution::source)
      .def_property_readonly("w", [](const ObstacleSolution& s) { return to_numpy(s.w); })
      .def_property_readonly("u", [](const ObstacleSolution& s) { return to_numpy(s.u); })
      .def_property_readonly("occupancy", [](const ObstacleSolution& s) { return to_numpy(s.occupancy); })
      .def_property_readonly("noncontact_mask",
                             [](const ObstacleSolution& s) { return mask_to_numpy(s.w.grid(), s.noncontact_mask); })
      .def_readonly("threshold", &ObstacleSolution::threshold)
      .def_readonly("touches_boundary", &ObstacleSolution::touches_boundary)
      .def_readonly("report", &ObstacleSolution::report);
  m.def("solve_obstacle",
        [](const DiscreteOperator& op, const GreenField& green, double r, double tol, double omega, int max_iter) {
          return solve_obstacle(op, green, r, lcp_options(tol, omega, max_iter));
        },
        py::arg("op"), py::arg("green"), py::arg("r"), py::arg("tol") = kDefaultLcpTol, py::arg("omega") = 1.8,
        py::arg("max_iter") = 50000);

  py::class_<MeanValueSet>(m, "MeanValueSet")
      .def_readonly("source", &MeanValueSet::source)
      .def_readonly("grid", &MeanValueSet::grid)
      .def_property_readonly("mask", [](const MeanValueSet& s) { return mask_to_numpy(s.grid, s.mask); })
      .def_property_readonly("weights",
                             [](const MeanValueSet& s) { return to_numpy(ScalarField(s.grid, s.weights)); })
      .def_readonly("volume", &MeanValueSet::volume)
      .def_readonly("measure", &MeanValueSet::measure)
      .def_readonly("inradius", &MeanValueSet::inradius)
      .def_readonly("outradius", &MeanValueSet::outradius)
      .def_property_readonly("contour", [](const MeanValueSet& s) { return contour_arrays(s.contour); })
      .def_readonly("connected", &MeanValueSet::connected)
      .def_readonly("touches_boundary", &MeanValueSet::touches_boundary);
  m.def("extract_set", &extract_set);
  m.def("set_from_mask", [](const GridSpec& g, py::array_t<bool> mask, Index source) {
    return set_from_mask(g, mask_from_numpy(g, mask), source);
  });
  m.def("areal_maximal", &areal_maximal);

  py::class_<NestingCheck>(m, "NestingCheck")
      .def_readonly("r", &NestingCheck::r)
      .def_readonly("s", &NestingCheck::s)
      .def_readonly("violations", &NestingCheck::violations)
      .def_readonly("violations_beyond_band", &NestingCheck::violations_beyond_band);
  py::class_<MeanValueFamily>(m, "MeanValueFamily")
      .def_readonly("radii", &MeanValueFamily::radii)
      .def_readonly("solutions", &MeanValueFamily::solutions)
      .def_readonly("sets", &MeanValueFamily::sets)
      .def_readonly("nesting", &MeanValueFamily::nesting)
      .def_readonly("nested", &MeanValueFamily::nested)
      .def_readonly("r0_estimate", &MeanValueFamily::r0_estimate);
  m.def("compute_family",
        [](const DiscreteOperator& op, const GreenField& green, const std::vector<double>& radii, double tol) {
          return compute_family(op, green, radii, lcp_options(tol, 1.8, 50000));
        },
        py::arg("op"), py::arg("green"), py::arg("radii"), py::arg("tol") = kDefaultLcpTol);

  m.def("mask_contour", [](const GridSpec& g, py::array_t<bool> mask) {
    return contour_arrays(mask_contour(g, mask_from_numpy(g, mask)));
  });

  m.def("harmonic_samples",
        [](const DiscreteOperator& op, std::size_t count, std::uint64_t seed, double tol) {
          std::vector<std::pair<std::string, py::array_t<double>>> out;
          for (const auto& d : datum_library(op.grid(), count, seed))
            out.emplace_back(d.label, to_numpy(sample_harmonic(op, d, tol).field));
          return out;
        },
        py::arg("op"), py::arg("count") = 10, py::arg("seed") = 2024, py::arg("tol") = kDefaultLinearTol,
        "Discrete L-harmonic extensions of the built-in boundary data, as (label, field) pairs.");

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("max_discrepancy", &VerificationReport::max_discrepancy)
      .def_readonly("tolerance", &VerificationReport::tolerance)
      .def_readonly("passed", &VerificationReport::passed)
      .def_property_readonly("discrepancies", [](const VerificationReport& r) {
        std::vector<double> d;
        for (const auto& row : r.rows) d.push_back(row.discrepancy);
        return d;
      });
  m.def("check_mean_value",
        [](const MeanValueSet& set, const std::vector<py::array_t<double>>& samples, double tolerance) {
          return check_mean_value(set, samples_from(set.grid, samples), set.source, tolerance);
        },
        py::arg("set"), py::arg("samples"), py::arg("tolerance") = -1.0);
  m.def("dual_identity_check", [](const DiscreteOperator& op, const ObstacleSolution& sol, py::array_t<double> v) {
    return dual_identity_check(op, sol, {from_numpy(op.grid(), v), SampleKind::harmonic, "sample"});
  });

  py::class_<SchwarzPotential>(m, "SchwarzPotential")
      .def_property_readonly("W", [](const SchwarzPotential& p) { return to_numpy(p.W); })
      .def_readonly("measure", &SchwarzPotential::measure)
      .def_readonly("report", &SchwarzPotential::report);
  m.def("build_potential_direct", &build_potential_direct, py::arg("op"), py::arg("set"),
        py::arg("tol") = kDefaultLinearTol);
  m.def("build_potential_integral", &build_potential_integral, py::arg("op"), py::arg("green"), py::arg("set"),
        py::arg("tol") = kDefaultLinearTol);

  py::class_<VanishingReport>(m, "VanishingReport")
      .def_readonly("outside_nodes", &VanishingReport::outside_nodes)
      .def_readonly("max_abs", &VanishingReport::max_abs)
      .def_readonly("max_gradient", &VanishingReport::max_gradient)
      .def_readonly("min_value", &VanishingReport::min_value)
      .def_readonly("tolerance", &VanishingReport::tolerance)
      .def_readonly("vanishes", &VanishingReport::vanishes)
      .def_readonly("nonnegative", &VanishingReport::nonnegative);
  m.def("check_vanishing", &check_vanishing, py::arg("potential"), py::arg("tol") = kDefaultLinearTol,
        py::arg("c") = 1.0);

  py::class_<UniquenessReport>(m, "UniquenessReport")
      .def_readonly("r_matched", &UniquenessReport::r_matched)
      .def_property_readonly("upsilon", [](const UniquenessReport& r) { return to_numpy(r.upsilon); })
      .def_readonly("max_upsilon", &UniquenessReport::max_upsilon)
      .def_readonly("min_upsilon", &UniquenessReport::min_upsilon)
      .def_readonly("max_abs_upsilon", &UniquenessReport::max_abs_upsilon)
      .def_readonly("symmetric_difference_volume", &UniquenessReport::symmetric_difference_volume)
      .def_readonly("consistent", &UniquenessReport::consistent);
  m.def("uniqueness_experiment",
        [](const DiscreteOperator& op, const GreenField& green, const MeanValueSet& candidate, double verdict_tol) {
          UniquenessOptions o;
          o.verdict_tolerance = verdict_tol;
          return uniqueness_experiment(op, green, candidate, o);
        },
        py::arg("op"), py::arg("green"), py::arg("candidate"), py::arg("verdict_tol") = 1e-6);
  m.def("perturbed_candidates", [](const MeanValueSet& reference) {
    std::vector<std::pair<std::string, MeanValueSet>> out;
    for (auto& c : perturbed_candidates(reference)) out.emplace_back(c.name, std::move(c.set));
    return out;
  });

  py::class_<AuxiliaryFunction>(m, "AuxiliaryFunction")
      .def_readonly("n", &AuxiliaryFunction::n)
      .def_readonly("s", &AuxiliaryFunction::s)
      .def_readonly("alpha", &AuxiliaryFunction::alpha)
      .def_readonly("beta", &AuxiliaryFunction::beta)
      .def_property_readonly("constant", &AuxiliaryFunction::constant)
      .def("__call__", &AuxiliaryFunction::operator());
  py::class_<PhiFunction>(m, "PhiFunction")
      .def_readonly("inner", &PhiFunction::inner)
      .def_readonly("outer", &PhiFunction::outer)
      .def("__call__", &PhiFunction::operator())
      .def("laplacian", &PhiFunction::laplacian);
  m.def("fundamental", &fundamental);
  m.def("build_psi", &build_psi, py::arg("n"), py::arg("s"));
  m.def("build_phi", &build_phi, py::arg("n"), py::arg("r"), py::arg("s"));
  m.def("constant_identity", &constant_identity, py::arg("n"), py::arg("r"));
  m.def("weak_pairing",
        [](const std::function<double(std::vector<double>)>& u, const PhiFunction& phi, double half_width,
           Index cells) {
          const int n = phi.outer.n;
          return weak_pairing(
              [&](const Point& p) { return u(std::vector<double>(p.begin(), p.begin() + n)); }, phi,
              QuadratureGrid{n, half_width, cells});
        },
        py::arg("u"), py::arg("phi"), py::arg("half_width"), py::arg("cells") = 401,
        "Midpoint quadrature of u * Laplacian(Phi); u takes a coordinate list.");

  m.def("read_field", [](const std::filesystem::path& p) {
    const ScalarField f = read_field(p);
    return py::make_tuple(f.grid(), to_numpy(f));
  });
  m.def("write_field", [](const GridSpec& g, py::array_t<double> values, const std::filesystem::path& p,
                          const std::string& format) { write_field(from_numpy(g, values), p, parse_field_format(format)); },
        py::arg("grid"), py::arg("values"), py::arg("path"), py::arg("format") = "raw");

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("directory", &RunConfig::directory)
      .def_readwrite("radii", &RunConfig::radii)
      .def_readwrite("coefficients", &RunConfig::coefficients)
      .def("canonical", [](const RunConfig& c) { return canonical_config(c); });
  m.def("parse_config_text", &parse_config_text, py::arg("text"), py::arg("source") = "<config>");
  m.def("parse_config", [](const std::filesystem::path& p) { return parse_config(p); });
  m.def("subcommand_names", &subcommand_names);
  m.def("run_subcommand",
        [](const std::string& name, const RunConfig& cfg) {
          const RunResult r = run_subcommand(name, cfg);
          py::list checks;
          for (const auto& c : r.checks) {
            py::dict d;
            d["subcommand"] = c.subcommand;
            d["name"] = c.name;
            d["value"] = c.value;
            d["threshold"] = c.threshold;
            d["relation"] = c.relation;
            d["passed"] = c.passed;
            checks.append(d);
          }
          py::dict out;
          out["checks"] = checks;
          out["errors"] = r.errors;
          out["artifacts"] = r.artifacts;
          out["passed"] = r.passed();
          return out;
        },
        py::arg("name"), py::arg("config"),
        "Runs a pipeline stage and returns {'checks', 'errors', 'artifacts', 'passed'}.");
}
