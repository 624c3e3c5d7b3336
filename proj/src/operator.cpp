#include "mvset/operator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace mvset {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kEigenSlack = 1e-12;

double face_mean(double a, double b, FaceAverage mode) {
  if (mode == FaceAverage::harmonic) return (a + b > 0.0) ? 2.0 * a * b / (a + b) : 0.0;
  return 0.5 * (a + b);
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  double back = 0.0;
  // Shortest representation that still round-trips.
  for (int p = 1; p <= 17; ++p) {
    std::ostringstream t;
    t.precision(p);
    t << v;
    std::istringstream(t.str()) >> back;
    if (back == v) return t.str();
  }
  return os.str();
}

}  // namespace

CoefficientField::CoefficientField(GridSpec grid, std::vector<Tensor> tensors, double lambda,
                                   double Lambda)
    : grid_(std::move(grid)), tensors_(std::move(tensors)), lambda_(lambda), Lambda_(Lambda) {
  if (static_cast<Index>(tensors_.size()) != grid_.node_count()) {
    throw Error("coefficient field needs one tensor per node");
  }
  if (!(lambda_ > 0.0) || !(Lambda_ >= lambda_)) {
    throw Error("ellipticity bounds must satisfy 0 < lambda <= Lambda");
  }
  const int n = grid_.dim();
  for (std::size_t k = 0; k < tensors_.size(); ++k) {
    const Tensor& t = tensors_[k];
    const auto block = t.topLeftCorner(n, n);
    const double scale = std::max(1.0, block.cwiseAbs().maxCoeff());
    if ((block - block.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
      throw Error("coefficient tensor at node " + std::to_string(k) + " is not symmetric");
    }
    if (!block.allFinite()) throw Error("coefficient tensor at node " + std::to_string(k) + " is not finite");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(block), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo < lambda_ * (1.0 - kEigenSlack) || hi > Lambda_ * (1.0 + kEigenSlack)) {
      throw Error("ellipticity violated at node " + std::to_string(k) + ": eigenvalues [" +
                  std::to_string(lo) + ", " + std::to_string(hi) + "] outside [" +
                  std::to_string(lambda_) + ", " + std::to_string(Lambda_) + "]");
    }
  }
}

bool CoefficientField::is_diagonal() const {
  const int n = grid_.dim();
  for (const Tensor& t : tensors_) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (p != q && t(p, q) != 0.0) return false;
  }
  return true;
}

CoefficientField CoefficientField::scaled(double c) const {
  if (!(c > 0.0)) throw Error("coefficient scale must be positive");
  std::vector<Tensor> t = tensors_;
  for (Tensor& m : t) m *= c;
  return CoefficientField(grid_, std::move(t), c * lambda_, c * Lambda_);
}

CoefficientFamily CoefficientFamily::parse(const std::string& text) {
  CoefficientFamily f;
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  const auto open = s.find('(');
  if (open == std::string::npos) {
    f.name = s;
  } else {
    if (s.back() != ')') throw Error("malformed coefficient family '" + text + "'");
    f.name = s.substr(0, open);
    std::string args = s.substr(open + 1, s.size() - open - 2);
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        f.params.push_back(std::stod(item, &used));
        if (used != item.size()) throw Error("");
      } catch (...) {
        throw Error("bad parameter '" + item + "' in coefficient family '" + text + "'");
      }
    }
  }
  auto expect = [&](std::size_t lo, std::size_t hi) {
    if (f.params.size() < lo || f.params.size() > hi) {
      throw Error("coefficient family '" + f.name + "' takes " + std::to_string(lo) + "-" +
                  std::to_string(hi) + " parameters");
    }
  };
  if (f.name == "identity") {
    expect(0, 1);
  } else if (f.name == "anisotropic") {
    expect(1, 1);
  } else if (f.name == "checkerboard") {
    expect(3, 3);
  } else if (f.name == "smooth-rotation") {
    expect(0, 2);
  } else {
    throw Error("unknown coefficient family '" + f.name + "'");
  }
  return f;
}

std::string CoefficientFamily::to_string() const {
  if (params.empty()) return name;
  std::string s = name + "(";
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (k) s += ", ";
    s += format_number(params[k]);
  }
  return s + ")";
}

CoefficientField make_coefficients(const GridSpec& grid, const CoefficientFamily& family) {
  const int n = grid.dim();
  const auto nodes = static_cast<std::size_t>(grid.node_count());
  std::vector<Tensor> t(nodes, Tensor::Identity());
  const auto& p = family.params;

  if (family.name == "identity") {
    const double c = p.empty() ? 1.0 : p[0];
    for (Tensor& m : t) m *= c;
    return CoefficientField(grid, std::move(t), c, c);
  }
  if (family.name == "anisotropic") {
    const double ratio = p[0];
    for (Tensor& m : t) m(0, 0) = ratio;
    return CoefficientField(grid, std::move(t), std::min(1.0, ratio), std::max(1.0, ratio));
  }
  if (family.name == "checkerboard") {
    const double lo = p[0], hi = p[1], period = p[2];
    if (!(period > 0.0)) throw Error("checkerboard period must be positive");
    for (Index k = 0; k < grid.node_count(); ++k) {
      const Point x = grid.coords(k);
      long parity = 0;
      for (int a = 0; a < n; ++a) parity += static_cast<long>(std::floor((x[a] - grid.origin()[a]) / period));
      t[static_cast<std::size_t>(k)] *= (parity % 2 == 0) ? lo : hi;
    }
    return CoefficientField(grid, std::move(t), std::min(lo, hi), std::max(lo, hi));
  }
  if (family.name == "smooth-rotation") {
    const double lo = p.size() > 0 ? p[0] : 1.0;
    const double hi = p.size() > 1 ? p[1] : 4.0;
    for (Index k = 0; k < grid.node_count(); ++k) {
      const Point x = grid.coords(k);
      const double xi0 = (x[0] - grid.origin()[0]) / grid.extent(0);
      const double xi1 = (x[1] - grid.origin()[1]) / grid.extent(1);
      const double theta = std::numbers::pi * (xi0 + 0.5 * xi1);
      const double c = std::cos(theta), s = std::sin(theta);
      Tensor& m = t[static_cast<std::size_t>(k)];
      m.setZero();
      m(0, 0) = hi * c * c + lo * s * s;
      m(1, 1) = hi * s * s + lo * c * c;
      m(0, 1) = m(1, 0) = (hi - lo) * c * s;
      m(2, 2) = lo;
    }
    return CoefficientField(grid, std::move(t), std::min(lo, hi), std::max(lo, hi));
  }
  throw Error("unknown coefficient family '" + family.name + "'");
}

CoefficientField isotropic_coefficients(const ScalarField& samples) {
  const auto v = samples.values();
  if (v.empty()) throw Error("empty coefficient samples");
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (!(*lo > 0.0)) throw Error("isotropic coefficient samples must be positive");
  std::vector<Tensor> t(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) t[k] = v[k] * Tensor::Identity();
  return CoefficientField(samples.grid(), std::move(t), *lo, *hi);
}

DiscreteOperator assemble(const CoefficientField& coeffs, FaceAverage face_average) {
  const GridSpec& g = coeffs.grid();
  const int n = g.dim();
  const Index nodes = g.node_count();

  DiscreteOperator op;
  op.grid_ = g;
  op.slot_.assign(static_cast<std::size_t>(nodes), -1);
  for (Index k = 0; k < nodes; ++k) {
    if (!g.on_boundary(k)) {
      op.slot_[static_cast<std::size_t>(k)] = static_cast<Index>(op.interior_nodes_.size());
      op.interior_nodes_.push_back(k);
    }
  }
  const Index m = op.interior_count();
  op.volumes_.resize(m);
  for (Index s = 0; s < m; ++s) op.volumes_[s] = g.cell_volume(op.interior_nodes_[static_cast<std::size_t>(s)]);

  const double scale = std::pow(g.h(), n - 2);
  std::array<Index, 3> stride{g.count(1) * g.count(2), g.count(2), 1};

  std::vector<Eigen::Triplet<double>> inner, couple;
  inner.reserve(static_cast<std::size_t>(m) * (coeffs.is_diagonal() ? 5 : 19));
  // Adds c * (e_a - e_b)(e_a - e_b)^T restricted to interior rows.
  auto add_pair = [&](Index a, Index b, double c) {
    const Index sa = op.slot(a), sb = op.slot(b);
    if (sa >= 0) {
      inner.emplace_back(static_cast<int>(sa), static_cast<int>(sa), c);
      if (sb >= 0) inner.emplace_back(static_cast<int>(sa), static_cast<int>(sb), -c);
      else couple.emplace_back(static_cast<int>(sa), static_cast<int>(b), -c);
    }
    if (sb >= 0) {
      inner.emplace_back(static_cast<int>(sb), static_cast<int>(sb), c);
      if (sa >= 0) inner.emplace_back(static_cast<int>(sb), static_cast<int>(sa), -c);
      else couple.emplace_back(static_cast<int>(sb), static_cast<int>(a), -c);
    }
  };

  for (Index k = 0; k < nodes; ++k) {
    const MultiIndex idx = g.multi_index(k);
    for (int p = 0; p < n; ++p) {
      if (idx[p] + 1 >= g.count(p)) continue;
      // Face flux between k and its +p neighbour.
      const Index kp = k + stride[p];
      const double a = face_mean(coeffs.at(k)(p, p), coeffs.at(kp)(p, p), face_average);
      if (!(a > 0.0)) throw Error("ellipticity violated on a face during assembly");
      add_pair(k, kp, scale * a);

      // Cross terms on the (p, q) square with corners k, k+p, k+q, k+p+q:
      // energy a_pq h^n D_p u D_q u = (a_pq h^{n-2} / 4)[(u11-u00)^2 - (u10-u01)^2].
      for (int q = p + 1; q < n; ++q) {
        if (idx[q] + 1 >= g.count(q)) continue;
        const Index kq = k + stride[q];
        const Index kpq = kp + stride[q];
        const double apq = 0.25 * (coeffs.at(k)(p, q) + coeffs.at(kp)(p, q) + coeffs.at(kq)(p, q) +
                                   coeffs.at(kpq)(p, q));
        if (apq == 0.0) continue;
        const double c = 0.5 * scale * apq;
        add_pair(k, kpq, c);
        add_pair(kp, kq, -c);
      }
    }
  }

  op.interior_.resize(static_cast<int>(m), static_cast<int>(m));
  op.interior_.setFromTriplets(inner.begin(), inner.end());
  op.interior_.makeCompressed();
  op.coupling_.resize(static_cast<int>(m), static_cast<int>(nodes));
  op.coupling_.setFromTriplets(couple.begin(), couple.end());
  op.coupling_.makeCompressed();
  return op;
}

Vector DiscreteOperator::restrict_to_interior(const ScalarField& field) const {
  if (!(field.grid() == grid_)) throw Error("field grid does not match operator grid");
  Vector v(interior_count());
  for (Index s = 0; s < interior_count(); ++s) v[s] = field[interior_nodes_[static_cast<std::size_t>(s)]];
  return v;
}

ScalarField DiscreteOperator::extend_by_zero(const Vector& interior) const {
  if (interior.size() != interior_count()) throw Error("interior vector has wrong length");
  ScalarField f(grid_, 0.0);
  for (Index s = 0; s < interior_count(); ++s) f[interior_nodes_[static_cast<std::size_t>(s)]] = interior[s];
  return f;
}

ScalarField apply(const DiscreteOperator& op, const ScalarField& field) {
  if (!(field.grid() == op.grid())) throw Error("grid mismatch in apply");
  const Eigen::Map<const Vector> all(field.values().data(), static_cast<Eigen::Index>(field.size()));
  Vector r = op.matrix() * op.restrict_to_interior(field) + op.boundary_coupling() * all;
  return op.extend_by_zero(r);
}

double smallest_ritz_value(const SparseMatrix& matrix, int iterations, unsigned seed) {
  const Eigen::Index n = matrix.rows();
  if (n == 0) throw Error("empty matrix");
  const int k = static_cast<int>(std::min<Eigen::Index>(iterations, n));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd basis(n, k);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  v.normalize();
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
  int used = 0;
  for (int j = 0; j < k; ++j) {
    basis.col(j) = v;
    used = j + 1;
    Vector w = matrix * v;
    tri(j, j) = v.dot(w);
    // Full reorthogonalisation against the Krylov basis so far.
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    const double beta = w.norm();
    if (j + 1 == k || beta < 1e-14) break;
    tri(j, j + 1) = tri(j + 1, j) = beta;
    v = w / beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri.topLeftCorner(used, used), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace mvset
