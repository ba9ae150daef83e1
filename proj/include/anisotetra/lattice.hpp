#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "anisotetra/geom.hpp"
#include "anisotetra/multi_index.hpp"

namespace anisotetra {

class ScalarField;

/// A node of Sigma^k(T): barycentric multi-index gamma with |gamma| = k.
struct LatticeNode {
  MultiIndex4 gamma;
  int k = 1;
  Point3 point = Point3::Zero();
};

/// Sigma^k(T), C(k+3, 3) nodes. Node order follows indices_up_to(k) on the
/// last three barycentric components, so node i sits at reference
/// coordinates indices_up_to(k)[i] / k.
std::vector<LatticeNode> sigma_k(const Tetrahedron& t, int k);

enum class Reference { Hat, Tilde };

const char* to_string(Reference r);

/// Exact membership of the lattice point gamma / k in the reference
/// tetrahedron. T-tilde is {y >= 0, z >= 0, y <= x, x + z <= 1}.
bool contains(Reference ref, const MultiIndex3& gamma, int k);

/// The axis-aligned box spanned by x_gamma and x_{gamma + delta} = (gamma + delta) / k.
struct Box {
  MultiIndex3 gamma;
  MultiIndex3 delta;
  int k = 1;

  /// 3 = parallelepiped, 2 = rectangle, 1 = segment.
  int rank() const { return delta.nonzero_count(); }
  /// The 2^rank corners as lattice indices.
  std::vector<MultiIndex3> corners() const;
};

/// Every box with anchor gamma and offset delta whose corners all lie in the
/// chosen reference tetrahedron. Requires 1 <= |delta| <= k.
std::vector<Box> enumerate_boxes(int k, const MultiIndex3& delta, Reference ref);

/// One signed term of a difference quotient: coeff * f(x_{gamma + eta}).
struct StencilTerm {
  MultiIndex3 eta;
  std::int64_t coeff = 0;
};

/// Integer form of the difference-quotient stencil: the quotient equals
/// k^{|delta|} / delta! * sum(coeff * f(x_{gamma+eta})), with
/// coeff = (-1)^{|delta|-|eta|} prod_i C(delta_i, eta_i). Terms are ordered
/// by eta descending lexicographically.
std::vector<StencilTerm> difference_stencil(const MultiIndex3& delta);

using NodeValues = std::map<MultiIndex3, double>;

/// f^{|delta|}[x_gamma, Delta^delta x_gamma] from tabulated lattice values.
/// Throws MissingNodeValue naming the first absent node.
double difference_quotient(const NodeValues& values, const MultiIndex3& gamma,
                           const MultiIndex3& delta, int k);

/// Same quotient with f evaluated at the reference lattice points gamma / k.
double difference_quotient(const std::function<double(const Point3&)>& f,
                           const MultiIndex3& gamma, const MultiIndex3& delta, int k);

/// Iterated integral over the box of g(Z, W, Y), where each coordinate axis
/// with offset s is integrated over the ordered s-simplex
/// 1 >= w_1 >= ... >= w_s >= 0 at position (gamma_i + w_1 + ... + w_s) / k.
/// Uses a tensor Gauss-Legendre rule with `points` nodes per dimension.
double box_mean(const std::function<double(const Point3&)>& g, const Box& box,
                int points = 6);

/// Integral form of the difference quotient: box_mean of d^delta f.
/// Throws DerivativeUnavailable when the field order is below |delta|.
double box_integral(const ScalarField& field, const Box& box, int points = 6);

struct ResidualQuotients {
  double max_abs = 0;
  std::size_t quotients = 0;
  double scale = 0;  // max |v| over the nodes, for relative tolerances
};

/// Builds u = v - I^k v on t, pulls it back to the reference lattice through
/// the vertex-order affine map from `ref` onto t, and evaluates every
/// difference quotient of u over boxes inside the reference with
/// 1 <= |delta| <= k.
ResidualQuotients residual_quotients_vanish(const ScalarField& field, const Tetrahedron& t,
                                            int k, Reference ref = Reference::Hat);

/// Rank of the linear conditions "box_mean(q) = 0 on every box" restricted
/// to q in P_{k-|delta|}; full rank means the conditions determine q = 0.
struct BoxConditionRank {
  std::size_t rank = 0;
  std::size_t boxes = 0;
  std::size_t dimension = 0;
};

BoxConditionRank box_condition_rank(int k, const MultiIndex3& delta, Reference ref);

}  // namespace anisotetra
