#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "mvset/classical.hpp"

using namespace mvset;

namespace {

constexpr double pi = std::numbers::pi;

// Five-point (seven-point in 3D) Laplacian of the radial function f at x.
double fd_laplacian(int n, const std::function<double(double)>& f, const Point& x, double h) {
  auto at = [&](Point p) {
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) r2 += p[k] * p[k];
    return f(std::sqrt(r2));
  };
  double sum = -2.0 * n * at(x);
  for (int k = 0; k < n; ++k) {
    Point p = x, m = x;
    p[k] += h;
    m[k] -= h;
    sum += at(p) + at(m);
  }
  return sum / (h * h);
}

// Tangency equations solved directly from their 2x2 linear system.
void tangency_oracle(int n, double s, double& alpha, double& beta) {
  beta = -fundamental_derivative(n, s) / (2 * s);
  alpha = fundamental(n, s) + beta * s * s;
}

}  // namespace

TEST_CASE("closed-form coefficients match the tangency system") {
  const auto p2 = build_psi(2, 1.0);
  CHECK(p2.alpha == doctest::Approx(0.5));
  CHECK(p2.beta == doctest::Approx(0.5));
  CHECK(p2.constant() == doctest::Approx(2.0));
  const auto p3 = build_psi(3, 1.0);
  CHECK(p3.alpha == doctest::Approx(1.5));
  CHECK(p3.beta == doctest::Approx(0.5));
  CHECK(p3.constant() == doctest::Approx(3.0));

  for (int n : {2, 3, 4}) {
    for (double s : {0.1, 0.7, 3.0}) {
      CAPTURE(n);
      CAPTURE(s);
      double a = 0, b = 0;
      tangency_oracle(n, s, a, b);
      const auto psi = build_psi(n, s);
      CHECK(psi.alpha == doctest::Approx(a).epsilon(1e-13));
      CHECK(psi.beta == doctest::Approx(b).epsilon(1e-13));
      const auto res = tangency_residuals(psi);
      CHECK(res.value <= 1e-12 * std::max(1.0, std::abs(fundamental(n, s))));
      CHECK(res.derivative <= 1e-12 * std::max(1.0, std::abs(fundamental_derivative(n, s))));
    }
  }
}

TEST_CASE("fundamental solution derivative agrees with a difference quotient") {
  for (int n : {2, 3}) {
    const double rho = 0.37, h = 1e-6;
    const double fd = (fundamental(n, rho + h) - fundamental(n, rho - h)) / (2 * h);
    CHECK(fundamental_derivative(n, rho) == doctest::Approx(fd).epsilon(1e-8));
  }
  CHECK(ball_volume(2, 1.0) == doctest::Approx(pi));
  CHECK(ball_volume(3, 2.0) == doctest::Approx(32 * pi / 3));
}

TEST_CASE("finite-difference Laplacian of psi inside B_s is -C(s)") {
  for (int n : {2, 3}) {
    const double s = 0.8, h = 1e-3;
    const auto psi = build_psi(n, s);
    const auto f = [&](double r) { return psi(r); };
    for (const Point x : {Point{0.1, 0.2, 0.0}, Point{-0.3, 0.0, 0.1}, Point{0.0, 0.5, -0.2}}) {
      CHECK(fd_laplacian(n, f, x, h) == doctest::Approx(-psi.constant()).epsilon(1e-6));
    }
    // Outside B_s, psi is the (harmonic) fundamental solution.
    CHECK(std::abs(fd_laplacian(n, f, {1.2, 0.4, 0.3}, h)) <= 1e-4);
  }
}

TEST_CASE("psi touches the fundamental solution from below") {
  for (int n : {2, 3}) {
    const double s = 0.6;
    const auto psi = build_psi(n, s);
    for (int k = 1; k <= 2000; ++k) {
      const double rho = 1.5 * s * k / 2000.0;
      CHECK(psi(rho) <= fundamental(n, rho) + 1e-12);
      if (rho < s - 1e-3) CHECK(psi(rho) < fundamental(n, rho));
      if (rho > s) CHECK(psi(rho) == fundamental(n, rho));
    }
    CHECK(psi(s) == doctest::Approx(fundamental(n, s)));
  }
}

TEST_CASE("Phi is nonnegative, supported in B_s and C^{1,1}") {
  const auto zero = build_phi(2, 1.0, 1.0);
  for (double rho : {0.0, 0.3, 1.0, 2.0}) CHECK(zero(rho) == 0.0);

  const auto phi = build_phi(2, 0.5, 1.0);
  CHECK(phi(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  double min_value = 1.0;
  const int m = 201;
  const double h = 2.0 / (m - 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double x = -1 + i * h, y = -1 + j * h;
      const double rho = std::hypot(x, y);
      if (rho <= 1.0) min_value = std::min(min_value, phi(rho));
    }
  CHECK(min_value >= -1e-12);
  CHECK(std::abs(phi(1.0)) <= 1e-14);
  CHECK(phi(1.5) == 0.0);

  // Second differences along a ray stay within max(C(r), C(s)) + O(h).
  const double step = 1e-3, bound = std::max(phi.inner.constant(), phi.outer.constant());
  for (double rho = step; rho < 1.3; rho += 0.01) {
    const double d2 = (phi(rho + step) - 2 * phi(rho) + phi(std::abs(rho - step))) / (step * step);
    CHECK(std::abs(d2) <= bound + 0.1);
  }
  CHECK_THROWS_AS(build_phi(2, 1.5, 1.0), Error);
  CHECK_THROWS_AS(build_psi(1, 1.0), Error);
}

TEST_CASE("C(r) |B_r| does not depend on r") {
  for (double r : {0.1, 1.0, 10.0}) {
    CHECK(constant_identity(2, r) == doctest::Approx(2 * pi).epsilon(1e-12));
    CHECK(constant_identity(3, r) == doctest::Approx(4 * pi).epsilon(1e-12));
  }
  CHECK(constant_identity(2, 0.1) / constant_identity(2, 10.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weak pairing against Phi") {
  const auto phi = build_phi(2, 0.5, 1.0);
  const QuadratureGrid quad{2, 1.0, 401};
  const double h = quad.spacing();
  // Cell-counted balls: the constant pairing is a boundary-layer effect of size O(h).
  CHECK(std::abs(weak_pairing([](const Point&) { return 1.0; }, phi, quad)) <= 2 * pi * 4 * h);
  const auto r2 = [](const Point& x) { return x[0] * x[0] + x[1] * x[1]; };
  const double sub = weak_pairing(r2, phi, quad);
  CHECK(sub == doctest::Approx(3 * pi / 4).epsilon(8 * h));
  CHECK(weak_pairing([&](const Point& x) { return -r2(x); }, phi, quad) == doctest::Approx(-sub));

  const auto phi3 = build_phi(3, 0.5, 1.0);
  const QuadratureGrid quad3{3, 1.0, 101};
  // 3D: C(s) int_{B_s} |x|^2 - C(r) int_{B_r} |x|^2 = 4 pi (3/5)(s^2 - r^2).
  const auto r2_3 = [](const Point& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; };
  CHECK(weak_pairing(r2_3, phi3, quad3) == doctest::Approx(4 * pi * 0.6 * 0.75).epsilon(10 * quad3.spacing()));
  CHECK_THROWS_AS(weak_pairing(r2, phi, QuadratureGrid{2, 0.9, 101}), Error);
}
