#pragma once

#include <vector>

#include "mvset/operator.hpp"

namespace mvset {

struct SolveReport {
  int iterations = 0;
  /// Relative 2-norm residual: ||b - Ax|| / ||b|| for linear solves, the
  /// natural residual ||min(w, Aw - q)|| / ||q|| for complementarity problems.
  double final_residual = 0.0;
  bool converged = false;
  /// max_i |w_i (Aw - q)_i| / (||w||_inf ||q||_inf); zero for linear solves.
  double complementarity_gap = 0.0;
  /// PSOR sweeps and active-set polish rounds (LCP only).
  int sweeps = 0;
  int polish_rounds = 0;
  /// False when the LCP matrix is not sign-patterned like an M-matrix.
  bool m_matrix = true;
  /// Relative residual after each iteration (linear solves only).
  std::vector<double> residual_history;
};

struct LinearSolution {
  Vector x;
  SolveReport report;
};

inline constexpr double kDefaultLinearTol = 1e-10;
inline constexpr double kDefaultLcpTol = 1e-8;

/// Conjugate gradients preconditioned with one symmetric SOR sweep pair.
/// On failure the best iterate seen is returned with converged = false.
LinearSolution solve_spd(const SparseMatrix& a, const Vector& rhs, double tol = kDefaultLinearTol,
                         int max_iter = 10000, const Vector* initial = nullptr);

/// Field-level wrapper: solves on interior nodes, zero boundary values.
struct FieldSolution {
  ScalarField field;
  SolveReport report;
};
FieldSolution solve_spd(const DiscreteOperator& op, const ScalarField& rhs, double tol = kDefaultLinearTol,
                        int max_iter = 10000);

struct LcpOptions {
  double tol = kDefaultLcpTol;
  int max_iter = 50000;
  double omega = 1.8;
  /// Sweeps spent in PSOR before the first active-set polish is attempted.
  int sweeps_before_polish = 400;
  int max_polish_rounds = 60;
  /// Linear tolerance of the fixed-active-set solves in the polish.
  double polish_linear_tol = 1e-13;
};

/// Finds w >= 0 with A w - q >= 0 and w . (A w - q) = 0 by projected SOR,
/// then sharpens the iterate with exact solves on the current free set.
/// A is expected to be an M-matrix; other matrices are accepted but carry no
/// convergence guarantee.
LinearSolution solve_lcp(const SparseMatrix& a, const Vector& q, const LcpOptions& options = {},
                         const Vector* initial = nullptr);

/// True when every off-diagonal entry is <= 0 and every diagonal entry > 0.
bool is_m_matrix_pattern(const SparseMatrix& a);

}  // namespace mvset
