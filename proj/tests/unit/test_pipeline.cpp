#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mvset/config.hpp"
#include "mvset/pipeline.hpp"

using namespace mvset;
namespace fs = std::filesystem;

namespace {

RunConfig small_config(const fs::path& dir) {
  auto c = parse_config_text("[grid]\nnodes = 129\n[problem]\nx0 = 0.5, 0.5\nradii = 0.15, 0.3\n");
  c.directory = dir.string();
  c.field_format = "both";
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("every stage passes on a small Laplacian run") {
  const fs::path dir = fs::temp_directory_path() / "mvset-unit-pipeline";
  fs::remove_all(dir);
  const auto result = run_subcommand("all", small_config(dir));
  for (const auto& c : result.checks) {
    CAPTURE(c.subcommand);
    CAPTURE(c.name);
    CAPTURE(c.value);
    CHECK(c.passed);
  }
  CHECK(result.errors.empty());
  CHECK(result.exit_code() == 0);
  for (const char* f : {"green.json", "obstacle.json", "family.json", "verify-mvt.json", "schwarz.json",
                        "uniqueness.json", "classical.json", "config.canonical", "failures.json",
                        "masks/mask_r0.csv", "masks/mask_r1.csv", "contours/contour_r1.csv"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }
  CHECK(slurp(dir / "config.canonical") == canonical_config(small_config(dir)));
}

TEST_CASE("family subcommand writes one mask and contour per radius") {
  const fs::path dir = fs::temp_directory_path() / "mvset-unit-family";
  fs::remove_all(dir);
  const auto result = run_subcommand("family", small_config(dir));
  CHECK(result.passed());
  Index masks = 0, contours = 0;
  for (const auto& a : result.artifacts) {
    masks += a.rfind("masks/", 0) == 0;
    contours += a.rfind("contours/", 0) == 0;
  }
  CHECK(masks == 2);
  CHECK(contours == 2);
}

TEST_CASE("unknown subcommands are rejected") {
  CHECK_THROWS(run_subcommand("bogus", small_config(fs::temp_directory_path() / "mvset-unit-bogus")));
}
