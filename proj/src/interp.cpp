#include "anisotetra/interp.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <sstream>

namespace anisotetra {

namespace {

struct ReferenceSolve {
  Eigen::MatrixXd inverse;  // column j holds the coefficients of basis function j
  double condition = 1.0;
  double residual = 0.0;
};

// Nodal Vandermonde matrix on the reference lattice, solved once per degree.
const ReferenceSolve& reference_solve(int k) {
  static std::array<std::once_flag, kMaxDegree + 1> once;
  static std::array<ReferenceSolve, kMaxDegree + 1> cache;
  std::call_once(once[static_cast<std::size_t>(k)], [k] {
    const auto idx = indices_up_to(k);
    const auto n = static_cast<Eigen::Index>(idx.size());
    // Solved in extended precision; the inverse is rounded once.
    using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    MatrixXld Vl(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const long double kd = k;
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto& g = idx[j];
        Vl(i, j) = std::pow(idx[i][0] / kd, g[0]) * std::pow(idx[i][1] / kd, g[1]) *
                   std::pow(idx[i][2] / kd, g[2]);
      }
    }
    const Eigen::MatrixXd V = Vl.cast<double>();
    Eigen::PartialPivLU<MatrixXld> lu(Vl);
    ReferenceSolve& s = cache[static_cast<std::size_t>(k)];
    s.inverse = lu.solve(MatrixXld::Identity(n, n)).cast<double>();
    s.residual = (V * s.inverse - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    s.condition = V.cwiseAbs().colwise().sum().maxCoeff() *
                  s.inverse.cwiseAbs().colwise().sum().maxCoeff();
  });
  return cache[static_cast<std::size_t>(k)];
}

void check_degree(int k) {
  if (k < 1 || k > kMaxDegree) {
    std::ostringstream os;
    os << "degree k = " << k << " outside supported range [1, " << kMaxDegree << "]";
    throw Error(ErrorKind::InvalidDegree, os.str());
  }
}

const ReferenceSolve& checked_solve(int k) {
  const ReferenceSolve& s = reference_solve(k);
  if (s.residual > 1e-8) {
    std::ostringstream os;
    os << "nodal Vandermonde solve for k = " << k << " left residual " << s.residual
       << " (condition estimate " << s.condition << ")";
    throw Error(ErrorKind::IllConditionedBasis, os.str());
  }
  return s;
}

}  // namespace

LagrangeBasis lagrange_basis(const Tetrahedron& t, int k) {
  check_degree(k);
  require_nondegenerate(t);
  const ReferenceSolve& s = checked_solve(k);
  LagrangeBasis basis;
  basis.k = k;
  basis.nodes = sigma_k(t, k);
  basis.condition_estimate = s.condition;
  const Frame frame = Frame::reference_of(t);
  basis.functions.reserve(basis.nodes.size());
  for (Eigen::Index j = 0; j < s.inverse.cols(); ++j) {
    Polynomial3 p(k, frame);
    for (Eigen::Index i = 0; i < s.inverse.rows(); ++i)
      p.coeffs()[static_cast<std::size_t>(i)] = s.inverse(i, j);
    basis.functions.push_back(std::move(p));
  }
  return basis;
}

double Interpolant::nodal_residual() const {
  double r = 0.0;
  for (const auto& [node, value] : node_values) r = std::max(r, std::abs(poly(node.point) - value));
  return r;
}

Interpolant interpolate(const ScalarField& v, const Tetrahedron& t, int k) {
  check_degree(k);
  require_nondegenerate(t);
  const ReferenceSolve& s = checked_solve(k);
  Interpolant I;
  I.tetra = t;
  I.k = k;
  const auto nodes = sigma_k(t, k);
  Eigen::VectorXd values(static_cast<Eigen::Index>(nodes.size()));
  I.node_values.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double value = v(nodes[i].point);
    values(static_cast<Eigen::Index>(i)) = value;
    I.node_values.emplace_back(nodes[i], value);
  }
  const Eigen::VectorXd c = s.inverse * values;
  I.poly = Polynomial3(k, Frame::reference_of(t));
  for (Eigen::Index i = 0; i < c.size(); ++i) I.poly.coeffs()[static_cast<std::size_t>(i)] = c(i);
  return I;
}

Interpolant interpolate(const Polynomial3& v, const Tetrahedron& t, int k) {
  return interpolate(ScalarField::from_polynomial(v), t, k);
}

ScalarField residual(const ScalarField& v, const Tetrahedron& t, int k) {
  return v - interpolate(v, t, k).poly;
}

}  // namespace anisotetra
