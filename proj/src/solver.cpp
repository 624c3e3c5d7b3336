#include "mvset/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mvset {

namespace {

constexpr double kSsorOmega = 1.5;

Vector diagonal_of(const SparseMatrix& a) {
  Vector d = Vector::Zero(a.rows());
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
      if (it.col() == i) d[i] = it.value();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) throw Error("matrix has a non-positive diagonal entry at row " + std::to_string(i));
  }
  return d;
}

// z = M^{-1} r for the SSOR splitting M = (D + wL) D^{-1} (D + wU) / (w (2 - w)).
void ssor_apply(const SparseMatrix& a, const Vector& diag, const Vector& r, Vector& z) {
  const Eigen::Index n = a.rows();
  const double w = kSsorOmega;
  z.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = r[i];
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
      if (it.col() < i) s -= w * it.value() * z[it.col()];
    z[i] = s / diag[i];
  }
  for (Eigen::Index i = 0; i < n; ++i) z[i] *= diag[i];
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = z[i];
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
      if (it.col() > i) s -= w * it.value() * z[it.col()];
    z[i] = s / diag[i];
  }
  z *= w * (2.0 - w);
}

struct LcpResidual {
  double natural = 0.0;
  double gap = 0.0;
};

LcpResidual lcp_residual(const SparseMatrix& a, const Vector& q, const Vector& w) {
  const Vector r = a * w - q;
  const double qn = q.norm() > 0.0 ? q.norm() : 1.0;
  double nat2 = 0.0, gap = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double m = std::min(w[i], r[i]);
    nat2 += m * m;
    gap = std::max(gap, std::abs(w[i] * r[i]));
  }
  const double scale = w.lpNorm<Eigen::Infinity>() * q.lpNorm<Eigen::Infinity>();
  return {std::sqrt(nat2) / qn, scale > 0.0 ? gap / scale : 0.0};
}

void psor_sweep(const SparseMatrix& a, const Vector& diag, const Vector& q, double omega, Vector& w) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double s = q[i];
    for (SparseMatrix::InnerIterator it(a, static_cast<int>(i)); it; ++it)
      if (it.col() != i) s -= it.value() * w[it.col()];
    const double gs = s / diag[i];
    w[i] = std::max(0.0, (1.0 - omega) * w[i] + omega * gs);
  }
}

SparseMatrix principal_submatrix(const SparseMatrix& a, const std::vector<int>& rows,
                                 std::vector<int>& map) {
  map.assign(static_cast<std::size_t>(a.rows()), -1);
  for (std::size_t k = 0; k < rows.size(); ++k) map[static_cast<std::size_t>(rows[k])] = static_cast<int>(k);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(rows.size() * 9);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (SparseMatrix::InnerIterator it(a, rows[k]); it; ++it) {
      const int c = map[static_cast<std::size_t>(it.col())];
      if (c >= 0) t.emplace_back(static_cast<int>(k), c, it.value());
    }
  }
  SparseMatrix sub(static_cast<int>(rows.size()), static_cast<int>(rows.size()));
  sub.setFromTriplets(t.begin(), t.end());
  sub.makeCompressed();
  return sub;
}

// Howard / primal-dual active-set iteration: solve exactly on the free set
// {w > Aw - q}, zero elsewhere, until the free set stops changing.
int polish(const SparseMatrix& a, const Vector& q, const LcpOptions& opt, Vector& w) {
  std::vector<char> prev;
  std::vector<int> free_rows, map;
  for (int round = 1; round <= opt.max_polish_rounds; ++round) {
    const Vector r = a * w - q;
    std::vector<char> free(static_cast<std::size_t>(w.size()), 0);
    free_rows.clear();
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w[i] > r[i]) {
        free[static_cast<std::size_t>(i)] = 1;
        free_rows.push_back(static_cast<int>(i));
      }
    }
    if (round > 1 && free == prev) return round - 1;
    prev = free;
    Vector next = Vector::Zero(w.size());
    if (!free_rows.empty()) {
      const SparseMatrix sub = principal_submatrix(a, free_rows, map);
      Vector rhs(static_cast<Eigen::Index>(free_rows.size()));
      Vector guess(rhs.size());
      for (std::size_t k = 0; k < free_rows.size(); ++k) {
        rhs[static_cast<Eigen::Index>(k)] = q[free_rows[k]];
        guess[static_cast<Eigen::Index>(k)] = w[free_rows[k]];
      }
      const LinearSolution s = solve_spd(sub, rhs, opt.polish_linear_tol, 20000, &guess);
      for (std::size_t k = 0; k < free_rows.size(); ++k) next[free_rows[k]] = s.x[static_cast<Eigen::Index>(k)];
    }
    w = std::move(next);
  }
  return opt.max_polish_rounds;
}

}  // namespace

LinearSolution solve_spd(const SparseMatrix& a, const Vector& rhs, double tol, int max_iter,
                         const Vector* initial) {
  if (a.rows() != a.cols() || a.rows() != rhs.size()) throw Error("solve_spd: dimension mismatch");
  if (!(tol > 0.0)) throw Error("solve_spd: tolerance must be positive");
  if (!rhs.allFinite()) throw Error("solve_spd: right-hand side is not finite");
  LinearSolution out;
  const Eigen::Index n = rhs.size();
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    out.x = Vector::Zero(n);
    out.report.converged = true;
    return out;
  }
  const Vector diag = diagonal_of(a);
  Vector x = (initial && initial->size() == n) ? *initial : Vector::Zero(n);
  Vector r = rhs - a * x;
  Vector z, p, ap;
  ssor_apply(a, diag, r, z);
  p = z;
  double rz = r.dot(z);
  double res = r.norm() / bnorm;
  Vector best = x;
  double best_res = res;
  int it = 0;
  while (res > tol && it < max_iter) {
    ap = a * p;
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    ++it;
    res = r.norm() / bnorm;
    out.report.residual_history.push_back(res);
    if (res < best_res) {
      best_res = res;
      best = x;
    }
    if (res <= tol) break;
    ssor_apply(a, diag, r, z);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  const double true_res = (rhs - a * best).norm() / bnorm;
  out.x = std::move(best);
  out.report.iterations = it;
  out.report.final_residual = true_res;
  out.report.converged = true_res <= tol;
  if (!out.x.allFinite()) throw Error("solve_spd produced non-finite values");
  return out;
}

FieldSolution solve_spd(const DiscreteOperator& op, const ScalarField& rhs, double tol, int max_iter) {
  LinearSolution s = solve_spd(op.matrix(), op.restrict_to_interior(rhs), tol, max_iter);
  return {op.extend_by_zero(s.x), std::move(s.report)};
}

LinearSolution solve_lcp(const SparseMatrix& a, const Vector& q, const LcpOptions& opt,
                         const Vector* initial) {
  if (a.rows() != a.cols() || a.rows() != q.size()) throw Error("solve_lcp: dimension mismatch");
  if (!q.allFinite()) throw Error("solve_lcp: q is not finite");
  if (!(opt.omega > 0.0 && opt.omega < 2.0)) throw Error("solve_lcp: relaxation factor must lie in (0, 2)");
  const Vector diag = diagonal_of(a);
  Vector w = (initial && initial->size() == q.size()) ? Vector(initial->cwiseMax(0.0)) : Vector(Vector::Zero(q.size()));

  LinearSolution out;
  SolveReport& rep = out.report;
  rep.m_matrix = is_m_matrix_pattern(a);
  LcpResidual res = lcp_residual(a, q, w);
  auto done = [&] { return res.natural <= opt.tol && res.gap <= opt.tol; };
  int next_polish = opt.sweeps_before_polish;

  while (!done() && rep.sweeps < opt.max_iter) {
    const int chunk = std::min(10, opt.max_iter - rep.sweeps);
    for (int k = 0; k < chunk; ++k) psor_sweep(a, diag, q, opt.omega, w);
    rep.sweeps += chunk;
    if (!w.allFinite()) throw Error("solve_lcp: iterate became non-finite");
    res = lcp_residual(a, q, w);
    if (!done() && opt.max_polish_rounds > 0 && rep.sweeps >= next_polish) {
      Vector trial = w;
      rep.polish_rounds += polish(a, q, opt, trial);
      trial = trial.cwiseMax(0.0);
      const LcpResidual tr = lcp_residual(a, q, trial);
      if (tr.natural <= res.natural) {
        w = std::move(trial);
        res = tr;
      }
      next_polish = rep.sweeps + opt.sweeps_before_polish;
    }
  }
  // Final refinement on the converged active set.
  if (opt.max_polish_rounds > 0 && w.size() > 0) {
    Vector trial = w;
    const int rounds = polish(a, q, opt, trial);
    trial = trial.cwiseMax(0.0);
    const LcpResidual tr = lcp_residual(a, q, trial);
    if (tr.natural <= res.natural) {
      rep.polish_rounds += rounds;
      w = std::move(trial);
      res = tr;
    }
  }
  rep.iterations = rep.sweeps + rep.polish_rounds;
  rep.final_residual = res.natural;
  rep.complementarity_gap = res.gap;
  rep.converged = done();
  out.x = std::move(w);
  return out;
}

bool is_m_matrix_pattern(const SparseMatrix& a) {
  for (int i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
      if (it.col() == i ? !(it.value() > 0.0) : it.value() > 0.0) return false;
    }
  }
  return true;
}

}  // namespace mvset
