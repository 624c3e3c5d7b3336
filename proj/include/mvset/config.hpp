#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mvset/grid.hpp"
#include "mvset/io.hpp"
#include "mvset/operator.hpp"

namespace mvset {

/// Everything a pipeline run needs. Canonical text form:
///
///   [grid]        dim, nodes, origin, extent
///   [operator]    coefficients, face_average
///   [problem]     x0, radii
///   [solver]      linear_tol, lcp_tol, omega, max_iter
///   [verify]      samples, seed, mean_value_tol, dual_tol
///   [schwarz]     agreement_tol, vanishing_c
///   [uniqueness]  candidate, verdict_tol, discrimination
///   [checks]      volume_tol
///   [output]      directory, field_format
///
/// grid.nodes, problem.x0 and problem.radii are required; every other key has
/// a default. Lists are comma separated.
struct RunConfig {
  int dim = 2;
  std::vector<Index> nodes;
  std::vector<double> origin;
  std::vector<double> extent;

  std::string coefficients = "identity";
  FaceAverage face_average = FaceAverage::arithmetic;

  std::vector<double> x0;
  std::vector<double> radii;

  double linear_tol = 1e-10;
  double lcp_tol = 1e-8;
  double omega = 1.8;
  int max_iter = 50000;

  int samples = 10;
  std::uint64_t seed = 2024;
  /// Negative: 2 h max|grad v| over the set.
  double mean_value_tol = -1.0;
  double dual_tol = 1e-7;

  double agreement_tol = 1e-8;
  double vanishing_c = 1.0;

  /// Mask file of an external candidate; empty runs the built-in library.
  std::string candidate;
  double verdict_tol = 1e-6;
  /// Smallest max upsilon that certifies a perturbed candidate as not a mean
  /// value set; 100 verdict tolerances by default.
  double discrimination = 1e-4;

  double volume_tol = 0.04;

  std::string directory = "mvset-out";
  /// "raw", "csv" or "both".
  std::string field_format = "raw";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Strict parser: malformed lines, unknown sections or keys, duplicate keys
/// and bad values are errors carrying line numbers.
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

/// Canonical form; parse_config_text(canonical_config(c)) == c.
std::string canonical_config(const RunConfig& config);

GridSpec config_grid(const RunConfig& config);
std::vector<FieldFormat> config_field_formats(const RunConfig& config);

}  // namespace mvset
