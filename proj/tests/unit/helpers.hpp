#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mvset/greens.hpp"
#include "mvset/grid.hpp"
#include "mvset/operator.hpp"

namespace testing {

inline mvset::GridSpec unit_grid(int dim, mvset::Index nodes) {
  const std::vector<double> origin(static_cast<std::size_t>(dim), 0.0);
  const std::vector<double> extent(static_cast<std::size_t>(dim), 1.0);
  return mvset::build_grid(dim, origin, extent, nodes);
}

inline mvset::DiscreteOperator unit_operator(int dim, mvset::Index nodes, const std::string& family = "identity") {
  const auto g = unit_grid(dim, nodes);
  return mvset::assemble(mvset::make_coefficients(g, mvset::CoefficientFamily::parse(family)));
}

template <class F>
mvset::ScalarField sample(const mvset::GridSpec& g, F&& f) {
  mvset::ScalarField out(g);
  for (mvset::Index i = 0; i < g.node_count(); ++i) out[i] = f(g.coords(i));
  return out;
}

inline mvset::Index centre_node(const mvset::GridSpec& g) {
  return mvset::locate_node(g, {0.5, g.dim() > 1 ? 0.5 : 0.0, g.dim() > 2 ? 0.5 : 0.0});
}

}  // namespace testing
