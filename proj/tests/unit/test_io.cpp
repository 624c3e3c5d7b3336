#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "mvset/contour.hpp"
#include "mvset/io.hpp"

using namespace mvset;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mvset-unit-io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("raw round trip is bitwise") {
  const auto g = testing::unit_grid(2, 17);
  const auto f = testing::sample(g, [](const Point& x) { return std::sin(7 * x[0]) / (1 + x[1]) + 1e-300; });
  const auto path = scratch("f.raw");
  write_field(f, path, FieldFormat::raw);
  const auto bytes = slurp(path);
  CHECK(bytes.substr(0, 16) == "MVSETFLD0001____");
  CHECK(bytes.size() == 16 + 4 + 2 * 4 + 2 * 8 + 8 + 17 * 17 * 8);
  const auto back = read_field(path);
  CHECK(back.grid() == g);
  CHECK(std::memcmp(back.values().data(), f.values().data(), f.values().size_bytes()) == 0);
}

TEST_CASE("csv round trip and layout") {
  const std::vector<double> origin{0.25};
  const std::vector<Index> counts{3};
  const auto g = GridSpec::from_spacing(1, origin, 0.5, counts);
  ScalarField f(g, std::vector<double>{0.1, 1.0 / 3.0, -2.5});
  const auto path = scratch("f.csv");
  write_field(f, path, FieldFormat::csv);
  std::ifstream in(path);
  std::string line;
  int data = 0;
  std::getline(in, line);
  CHECK(line.front() == '#');
  while (std::getline(in, line))
    if (!line.empty()) ++data;
  CHECK(data == 3);
  const auto back = read_field(path);
  for (Index k = 0; k < 3; ++k) CHECK(back[k] == f[k]);
}

TEST_CASE("damaged raw files are rejected") {
  const auto g = testing::unit_grid(2, 17);
  const auto path = scratch("t.raw");
  write_field(ScalarField(g, 1.5), path, FieldFormat::raw);
  const auto bytes = slurp(path);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 5));
  }
  CHECK_THROWS_AS(read_field(path), Error);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "XXXXXXXXXXXXXXXX" << bytes.substr(16);
  }
  CHECK_THROWS_AS(read_field(path), Error);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes << "extra";
  }
  CHECK_THROWS_AS(read_field(path), Error);
  CHECK_THROWS_AS(read_field(scratch("does-not-exist.raw")), Error);
}

TEST_CASE("mask files round trip") {
  const auto g = testing::unit_grid(2, 17);
  Mask m(static_cast<std::size_t>(g.node_count()), 0);
  for (std::size_t k = 0; k < m.size(); k += 3) m[k] = 1;
  const auto path = scratch("m.csv");
  write_mask(g, m, path);
  GridSpec back_grid;
  CHECK(read_mask(path, &back_grid) == m);
  CHECK(back_grid == g);
}

TEST_CASE("contour files") {
  const auto g = testing::unit_grid(2, 33);
  Mask m(static_cast<std::size_t>(g.node_count()), 0);
  const auto path = scratch("c.csv");
  write_contour(mask_contour(g, m), path);
  CHECK(slurp(path) == "# x y\n");
  CHECK(read_contour(path).empty());

  for (Index i = 5; i < 9; ++i)
    for (Index j = 5; j < 9; ++j) {
      m[static_cast<std::size_t>(g.flat_index({i, j, 0}))] = 1;
      m[static_cast<std::size_t>(g.flat_index({i + 15, j + 15, 0}))] = 1;
    }
  const auto contour = mask_contour(g, m);
  write_contour(contour, path);
  const auto text = slurp(path);
  CHECK(text.find("\n\n") != std::string::npos);
  const auto back = read_contour(path);
  REQUIRE(back.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(back[k].points == contour[k].points);
    CHECK(back[k].closed);
  }
}

TEST_CASE("format names and shortest doubles") {
  CHECK(parse_field_format("csv") == FieldFormat::csv);
  CHECK(to_string(FieldFormat::raw) == "raw");
  CHECK_THROWS_AS(parse_field_format("hdf5"), Error);
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
