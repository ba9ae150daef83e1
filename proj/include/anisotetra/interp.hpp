#pragma once

#include <vector>

#include "anisotetra/field.hpp"
#include "anisotetra/lattice.hpp"
#include "anisotetra/polynomial.hpp"

namespace anisotetra {

inline constexpr int kMaxDegree = 8;

/// Nodal Lagrange basis on Sigma^k(t). Polynomials are written in the
/// reference frame of t, so the basis coefficients are the same for every
/// tetrahedron; only the frame changes.
struct LagrangeBasis {
  int k = 1;
  std::vector<LatticeNode> nodes;
  std::vector<Polynomial3> functions;  // functions[i](nodes[j].point) = delta_ij
  double condition_estimate = 1.0;     // 1-norm condition of the nodal Vandermonde matrix
};

/// Throws InvalidDegree outside [1, kMaxDegree], DegenerateTetrahedron, or
/// IllConditionedBasis when the nodal solve leaves a residual above 1e-8.
LagrangeBasis lagrange_basis(const Tetrahedron& t, int k);

struct Interpolant {
  Polynomial3 poly;
  Tetrahedron tetra;
  int k = 1;
  std::vector<std::pair<LatticeNode, double>> node_values;

  double operator()(const Point3& x) const { return poly(x); }
  /// max over nodes of |poly(node) - value|.
  double nodal_residual() const;
};

Interpolant interpolate(const ScalarField& v, const Tetrahedron& t, int k);
Interpolant interpolate(const Polynomial3& v, const Tetrahedron& t, int k);

/// u = v - I^k v, with exact derivatives on the polynomial part.
ScalarField residual(const ScalarField& v, const Tetrahedron& t, int k);

}  // namespace anisotetra
