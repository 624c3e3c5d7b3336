#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "mvset/grid.hpp"

namespace mvset {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vector = Eigen::VectorXd;
using Tensor = Eigen::Matrix3d;

/// How nodal coefficient samples are combined onto a face.
enum class FaceAverage { arithmetic, harmonic };

/// Symmetric matrix field a^{ij}(x) sampled at the grid nodes, with
/// ellipticity bounds lambda <= eig(a) <= Lambda. Only the leading dim x dim
/// block of each tensor is used.
class CoefficientField {
 public:
  CoefficientField(GridSpec grid, std::vector<Tensor> tensors, double lambda, double Lambda);

  const GridSpec& grid() const { return grid_; }
  const Tensor& at(Index node) const { return tensors_[static_cast<std::size_t>(node)]; }
  const std::vector<Tensor>& tensors() const { return tensors_; }
  double lambda() const { return lambda_; }
  double Lambda() const { return Lambda_; }
  bool is_diagonal() const;

  CoefficientField scaled(double c) const;

 private:
  GridSpec grid_;
  std::vector<Tensor> tensors_;
  double lambda_;
  double Lambda_;
};

/// Named coefficient family, e.g. "identity", "anisotropic(4)",
/// "checkerboard(1,10,0.13)", "smooth-rotation(1,4)".
struct CoefficientFamily {
  std::string name;
  std::vector<double> params;

  static CoefficientFamily parse(const std::string& text);
  std::string to_string() const;
};

CoefficientField make_coefficients(const GridSpec& grid, const CoefficientFamily& family);

/// Isotropic field a(x) I from nodal samples; bounds are the sample min/max.
CoefficientField isotropic_coefficients(const ScalarField& samples);

/// Stiffness form of -L = -d_i(a^{ij} d_j .) with homogeneous Dirichlet data.
///
/// (A u)_i approximates -int_{cell i} L u, so A carries the h^dim cell volume
/// and the unit point mass at node i is the vector e_i. Rows and columns run
/// over interior nodes; boundary_coupling() holds the interior x all-nodes
/// entries that multiply boundary values.
class DiscreteOperator {
 public:
  const GridSpec& grid() const { return grid_; }
  const SparseMatrix& matrix() const { return interior_; }
  const SparseMatrix& boundary_coupling() const { return coupling_; }
  const std::vector<Index>& interior_nodes() const { return interior_nodes_; }
  /// Interior slot of a node, or -1 for boundary nodes.
  Index slot(Index node) const { return slot_[static_cast<std::size_t>(node)]; }
  Index interior_count() const { return static_cast<Index>(interior_nodes_.size()); }
  /// Cell volumes of the interior nodes, in slot order.
  const Vector& interior_volumes() const { return volumes_; }

  Vector restrict_to_interior(const ScalarField& field) const;
  ScalarField extend_by_zero(const Vector& interior) const;

  friend DiscreteOperator assemble(const CoefficientField&, FaceAverage);

 private:
  GridSpec grid_;
  SparseMatrix interior_;
  SparseMatrix coupling_;
  std::vector<Index> interior_nodes_;
  std::vector<Index> slot_;
  Vector volumes_;
};

DiscreteOperator assemble(const CoefficientField& coeffs,
                          FaceAverage face_average = FaceAverage::arithmetic);

/// A applied to the full field (boundary values included); zero on boundary nodes.
ScalarField apply(const DiscreteOperator& op, const ScalarField& field);

/// Smallest Ritz value of a symmetric matrix after `iterations` Lanczos steps
/// with full reorthogonalisation, started from a seeded random vector.
double smallest_ritz_value(const SparseMatrix& matrix, int iterations = 20,
                           unsigned seed = 12345);

}  // namespace mvset
