#pragma once

#include <functional>
#include <span>

#include "mvset/grid.hpp"

namespace mvset {

/// Fundamental solution without normalisation: -ln rho for n = 2,
/// rho^{2-n} for n >= 3.
double fundamental(int n, double rho);
double fundamental_derivative(int n, double rho);

/// Volume of the n-ball of radius r.
double ball_volume(int n, double r);

/// psi_s: the parabola alpha - beta |x|^2 inside B_s touching the fundamental
/// solution from below on |x| = s, and the fundamental solution outside.
struct AuxiliaryFunction {
  int n = 2;
  double s = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  /// Laplacian inside B_s, that is -C(s).
  double laplacian_inside = 0.0;

  double operator()(double rho) const;
  double constant() const { return -laplacian_inside; }
};

AuxiliaryFunction build_psi(int n, double s);

struct TangencyResiduals {
  double value = 0.0;
  double derivative = 0.0;
};

/// |alpha - beta s^2 - Gamma(s)| and |-2 beta s - Gamma'(s)|.
TangencyResiduals tangency_residuals(const AuxiliaryFunction& psi);

/// Phi_{r,s} = psi_r - psi_s, supported in the closed ball B_s.
struct PhiFunction {
  AuxiliaryFunction inner;
  AuxiliaryFunction outer;

  double operator()(double rho) const { return inner(rho) - outer(rho); }
  /// Piecewise-constant Laplacian -C(r) chi_{B_r} + C(s) chi_{B_s}.
  double laplacian(double rho) const;
};

/// Requires 0 < r <= s; r == s yields Phi identically zero.
PhiFunction build_phi(int n, double r, double s);

/// C(r) |B_r|, independent of r.
double constant_identity(int n, double r);

/// Midpoint-rule grid of `cells` cells per axis on [-half_width, half_width]^n.
struct QuadratureGrid {
  int n = 2;
  double half_width = 1.0;
  Index cells = 401;

  double spacing() const { return 2.0 * half_width / static_cast<double>(cells); }
  Index size() const;
  /// Centre of a cell, row-major with the last axis fastest.
  Point centre(Index cell) const;
};

/// Quadrature of u Delta Phi from samples of u at the cell centres; equals
/// C(s) int_{B_s} u - C(r) int_{B_r} u. Throws when the grid misses part of B_s.
double weak_pairing(std::span<const double> u_samples, const PhiFunction& phi, const QuadratureGrid& quad);
double weak_pairing(const std::function<double(const Point&)>& u, const PhiFunction& phi, const QuadratureGrid& quad);

}  // namespace mvset
