#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mvset/contour.hpp"

using namespace mvset;

TEST_CASE("disk contour closes and approximates the circle") {
  const auto g = testing::unit_grid(2, 65);
  Mask m(static_cast<std::size_t>(g.node_count()), 0);
  for (Index k = 0; k < g.node_count(); ++k) {
    const Point x = g.coords(k);
    m[static_cast<std::size_t>(k)] = std::hypot(x[0] - 0.5, x[1] - 0.5) <= 0.2;
  }
  const auto c = mask_contour(g, m);
  REQUIRE(c.size() == 1);
  CHECK(c[0].closed);
  const auto& pts = c[0].points;
  CHECK(std::abs(pts.front()[0] - pts.back()[0]) <= 1e-12);
  CHECK(std::abs(pts.front()[1] - pts.back()[1]) <= 1e-12);
  CHECK(hausdorff_to_circle(c, {0.5, 0.5}, 0.2) <= g.h());
}

TEST_CASE("two components give two polylines") {
  const auto g = testing::unit_grid(2, 33);
  Mask m(static_cast<std::size_t>(g.node_count()), 0);
  for (Index i = 5; i < 10; ++i)
    for (Index j = 5; j < 10; ++j) {
      m[static_cast<std::size_t>(g.flat_index({i, j, 0}))] = 1;
      m[static_cast<std::size_t>(g.flat_index({i + 15, j + 15, 0}))] = 1;
    }
  const auto c = mask_contour(g, m);
  CHECK(c.size() == 2);
  for (const auto& p : c) CHECK(p.closed);
}

TEST_CASE("empty mask has no contour") {
  const auto g = testing::unit_grid(2, 17);
  CHECK(mask_contour(g, Mask(static_cast<std::size_t>(g.node_count()), 0)).empty());
}

TEST_CASE("level set of a linear field is a straight segment") {
  const auto g = testing::unit_grid(2, 17);
  const auto f = testing::sample(g, [](const Point& x) { return 0.3 - x[0]; });
  const auto c = marching_squares(f, 0.0);
  REQUIRE(c.size() == 1);
  for (const auto& p : c[0].points) {
    // Interior crossings sit on x = 0.3; the closing edges run along the box.
    if (p[0] > 1e-12 && p[1] > 1e-12 && p[1] < 1 - 1e-12) CHECK(p[0] == doctest::Approx(0.3));
  }
}
