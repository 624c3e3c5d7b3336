#include "mvset/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace mvset {

namespace {

void require_dimension(int n) {
  if (n < 2) throw Error("classical functions need n >= 2");
}

double rho_of(const Point& x, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += x[k] * x[k];
  return std::sqrt(s);
}

}  // namespace

double fundamental(int n, double rho) {
  require_dimension(n);
  return n == 2 ? -std::log(rho) : std::pow(rho, 2.0 - n);
}

double fundamental_derivative(int n, double rho) {
  require_dimension(n);
  return n == 2 ? -1.0 / rho : (2.0 - n) * std::pow(rho, 1.0 - n);
}

double ball_volume(int n, double r) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0) * std::pow(r, n);
}

double AuxiliaryFunction::operator()(double rho) const {
  return rho < s ? alpha - beta * rho * rho : fundamental(n, rho);
}

AuxiliaryFunction build_psi(int n, double s) {
  require_dimension(n);
  if (!(s > 0.0) || !std::isfinite(s)) throw Error("touch radius must be positive");
  AuxiliaryFunction psi;
  psi.n = n;
  psi.s = s;
  // Tangency: alpha - beta s^2 = Gamma(s) and -2 beta s = Gamma'(s).
  if (n == 2) {
    psi.beta = 0.5 / (s * s);
    psi.alpha = 0.5 - std::log(s);
  } else {
    psi.beta = 0.5 * (n - 2) * std::pow(s, -n);
    psi.alpha = 0.5 * n * std::pow(s, 2.0 - n);
  }
  psi.laplacian_inside = -2.0 * n * psi.beta;

  const TangencyResiduals res = tangency_residuals(psi);
  const double scale = std::max(1.0, std::abs(fundamental(n, s)));
  const double dscale = std::max(1.0, std::abs(fundamental_derivative(n, s)) * s);
  if (res.value > 1e-12 * scale || res.derivative * s > 1e-12 * dscale)
    throw Error("tangency equations not satisfied for the auxiliary parabola");
  return psi;
}

TangencyResiduals tangency_residuals(const AuxiliaryFunction& psi) {
  return {std::abs(psi.alpha - psi.beta * psi.s * psi.s - fundamental(psi.n, psi.s)),
          std::abs(-2.0 * psi.beta * psi.s - fundamental_derivative(psi.n, psi.s))};
}

double PhiFunction::laplacian(double rho) const {
  double v = 0.0;
  if (rho < inner.s) v += inner.laplacian_inside;
  if (rho < outer.s) v -= outer.laplacian_inside;
  return v;
}

PhiFunction build_phi(int n, double r, double s) {
  if (!(r > 0.0)) throw Error("Phi needs r > 0");
  if (r > s) throw Error("Phi needs r <= s");
  return {build_psi(n, r), build_psi(n, s)};
}

double constant_identity(int n, double r) {
  return build_psi(n, r).constant() * ball_volume(n, r);
}

Index QuadratureGrid::size() const {
  Index total = 1;
  for (int k = 0; k < n; ++k) total *= cells;
  return total;
}

Point QuadratureGrid::centre(Index cell) const {
  Point p{0.0, 0.0, 0.0};
  const double h = spacing();
  for (int k = n - 1; k >= 0; --k) {
    p[k] = -half_width + (static_cast<double>(cell % cells) + 0.5) * h;
    cell /= cells;
  }
  return p;
}

double weak_pairing(std::span<const double> u_samples, const PhiFunction& phi, const QuadratureGrid& quad) {
  if (quad.n != phi.outer.n) throw Error("quadrature dimension differs from Phi's");
  if (quad.n > 3) throw Error("quadrature supports n <= 3");
  if (quad.cells < 1) throw Error("quadrature grid needs at least one cell");
  if (quad.half_width < phi.outer.s) throw Error("quadrature grid does not cover B_s");
  if (static_cast<Index>(u_samples.size()) != quad.size()) throw Error("u sample count does not match the grid");
  const double dv = std::pow(quad.spacing(), quad.n);
  double sum = 0.0;
  for (Index c = 0; c < quad.size(); ++c) {
    const double lap = phi.laplacian(rho_of(quad.centre(c), quad.n));
    if (lap != 0.0) sum += u_samples[static_cast<std::size_t>(c)] * lap;
  }
  return sum * dv;
}

double weak_pairing(const std::function<double(const Point&)>& u, const PhiFunction& phi, const QuadratureGrid& quad) {
  if (quad.n > 3) throw Error("quadrature supports n <= 3");
  std::vector<double> samples(static_cast<std::size_t>(quad.size()));
  for (Index c = 0; c < quad.size(); ++c) samples[static_cast<std::size_t>(c)] = u(quad.centre(c));
  return weak_pairing(samples, phi, quad);
}

}  // namespace mvset
