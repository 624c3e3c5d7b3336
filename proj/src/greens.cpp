#include "mvset/greens.hpp"

namespace mvset {

GreenField compute_green(const DiscreteOperator& op, Index source, double tol) {
  const GridSpec& g = op.grid();
  if (source < 0 || source >= g.node_count()) throw Error("Green's function source is not a grid node");
  const Index s = op.slot(source);
  if (s < 0) throw Error("Green's function source lies on the boundary");

  Vector rhs = Vector::Zero(op.interior_count());
  rhs[s] = 1.0;
  LinearSolution sol = solve_spd(op.matrix(), rhs, tol, 20000);
  if (!sol.report.converged) {
    throw Error("Green's function solve did not converge (residual " +
                std::to_string(sol.report.final_residual) + ")");
  }
  GreenField out;
  out.mass = (op.matrix() * sol.x).sum();
  out.field = op.extend_by_zero(sol.x);
  out.source = source;
  out.report = std::move(sol.report);
  return out;
}

}  // namespace mvset
