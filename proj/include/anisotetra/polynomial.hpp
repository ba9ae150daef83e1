#pragma once

#include <vector>

#include "anisotetra/geom.hpp"
#include "anisotetra/multi_index.hpp"

namespace anisotetra {

/// Local affine coordinates xi = to_local * (x - origin) in which a
/// polynomial's monomials are written. The identity frame gives plain
/// monomials in x, y, z.
struct Frame {
  Point3 origin = Point3::Zero();
  Matrix3 to_local = Matrix3::Identity();
  Matrix3 from_local = Matrix3::Identity();  // inverse of to_local, kept exact when known

  Point3 local(const Point3& x) const { return to_local * (x - origin); }

  /// Frame for an arbitrary invertible map; from_local is computed.
  static Frame affine(const Point3& origin, const Matrix3& to_local);
  /// Reference coordinates of t: xi = J^{-1} (x - v0), from_local = J.
  static Frame reference_of(const Tetrahedron& t);

  bool operator==(const Frame& o) const {
    return origin == o.origin && to_local == o.to_local;
  }
};

/// Polynomial in three variables, sum c_gamma xi^gamma over |gamma| <= degree,
/// with xi the frame's local coordinates. Coefficients are stored densely in
/// indices_up_to(degree) order.
class Polynomial3 {
 public:
  Polynomial3() : Polynomial3(0) {}
  explicit Polynomial3(int degree, Frame frame = {});

  static Polynomial3 constant(double c, Frame frame = {});
  /// The single monomial coeff * xi^gamma.
  static Polynomial3 monomial(const MultiIndex3& gamma, double coeff = 1.0, Frame frame = {});

  int degree() const { return degree_; }
  /// Highest order carrying a nonzero coefficient (-1 for the zero polynomial).
  int effective_degree() const;
  const Frame& frame() const { return frame_; }

  double coeff(const MultiIndex3& gamma) const;
  void set_coeff(const MultiIndex3& gamma, double value);
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }

  double operator()(const Point3& x) const { return eval_local(frame_.local(x)); }
  double eval_local(const Point3& xi) const;

  /// Exact d/dx_axis in global coordinates (chain rule through the frame).
  Polynomial3 partial(int axis) const;
  /// Exact d^gamma in global coordinates.
  Polynomial3 partial(const MultiIndex3& gamma) const;
  /// Derivative with respect to the local coordinate xi_axis.
  Polynomial3 partial_local(int axis) const;

  /// The same function written in another frame (exact re-expansion).
  Polynomial3 in_frame(const Frame& target) const;

  Polynomial3& operator+=(const Polynomial3& o);
  Polynomial3& operator-=(const Polynomial3& o);
  Polynomial3& operator*=(double s);
  friend Polynomial3 operator+(Polynomial3 a, const Polynomial3& b) { return a += b; }
  friend Polynomial3 operator-(Polynomial3 a, const Polynomial3& b) { return a -= b; }
  friend Polynomial3 operator*(Polynomial3 a, double s) { return a *= s; }
  friend Polynomial3 operator*(double s, Polynomial3 a) { return a *= s; }
  /// Product; b is re-expanded into a's frame when they differ.
  friend Polynomial3 operator*(const Polynomial3& a, const Polynomial3& b);

  double max_abs_coeff() const;

 private:
  void grow(int degree);

  int degree_ = 0;
  Frame frame_;
  std::vector<double> coeffs_;
};

}  // namespace anisotetra
