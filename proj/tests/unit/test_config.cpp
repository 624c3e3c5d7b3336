#include <doctest.h>

#include <string>

#include "mvset/config.hpp"

using namespace mvset;

namespace {

const char* kMinimal =
    "[grid]\n"
    "nodes = 65\n"
    "[problem]\n"
    "x0 = 0.5, 0.5\n"
    "radii = 0.2\n";

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text, "t.cfg");
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config is completed with defaults") {
  const auto c = parse_config_text(kMinimal);
  CHECK(c.dim == 2);
  CHECK(c.nodes == std::vector<Index>{65, 65});
  CHECK(c.origin == std::vector<double>{0.0, 0.0});
  CHECK(c.extent == std::vector<double>{1.0, 1.0});
  CHECK(c.coefficients == "identity");
  CHECK(c.linear_tol == 1e-10);
  CHECK(c.lcp_tol == 1e-8);
  CHECK(c.mean_value_tol < 0.0);
  CHECK(c.field_format == "raw");

  const std::string canon = canonical_config(c);
  CHECK(canon.rfind("[grid]\ndim = 2\nnodes = 65, 65\n", 0) == 0);
  CHECK(canon.find("mean_value_tol = auto\n") != std::string::npos);
  CHECK(parse_config_text(canon) == c);
}

TEST_CASE("canonical form round-trips every field") {
  auto c = parse_config_text(
      "# comment\n[grid]\ndim = 2\nnodes = 33, 65\norigin = -1, 0\nextent = 1, 2\n"
      "[operator]\ncoefficients = checkerboard(1,10,0.13)\nface_average = harmonic\n"
      "[problem]\nx0 = -0.5, 1\nradii = 0.1, 0.2, 0.3\n"
      "[solver]\nomega = 1.5\n; another comment\n"
      "[verify]\nmean_value_tol = 0.01\nseed = 7\n"
      "[output]\nfield_format = both\n");
  CHECK(c.radii == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(c.face_average == FaceAverage::harmonic);
  CHECK(parse_config_text(canonical_config(c)) == c);
  CHECK(config_field_formats(c).size() == 2);
  const auto g = config_grid(c);
  CHECK(g.count(0) == 33);
  CHECK(g.count(1) == 65);
}

TEST_CASE("strict parsing errors carry line numbers") {
  const std::string dup = std::string(kMinimal) + "radii = 0.3\n";
  const auto e1 = error_of(dup);
  CHECK(e1.find("5") != std::string::npos);
  CHECK(e1.find("6") != std::string::npos);

  CHECK(error_of(std::string(kMinimal) + "[problem2]\n").find("6") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "colour = red\n").find("colour") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "this is not a key value line\n").find("6") != std::string::npos);
  CHECK(error_of("nodes = 65\n").find("1") != std::string::npos);
  CHECK_FALSE(error_of("[grid]\nnodes = 65\n[problem]\nx0 = 0.5, 0.5\nradii = 0.3, 0.2\n").empty());
  CHECK_FALSE(error_of("[grid]\nnodes = 65\n[problem]\nx0 = 0.5, 0.5\n").empty());
  CHECK_FALSE(error_of("[grid]\nnodes = sixty\n[problem]\nx0 = 0.5, 0.5\nradii = 0.2\n").empty());
  CHECK_THROWS(parse_config("/nonexistent/run.cfg"));
}
