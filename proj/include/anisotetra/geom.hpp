#pragma once

#include <array>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "anisotetra/error.hpp"

namespace anisotetra {

using Point3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// Scale-relative thresholds used by the geometric predicates.
struct GeomTolerances {
  double volume = 1e-14;  // |T| must exceed volume * h_T^3
  double plane = 1e-12;   // on-plane band for the bisector test, times h_T
  double angle = 1e-12;   // slack on the MAC comparison, radians
};

struct Tetrahedron {
  std::array<Point3, 4> v;

  static Tetrahedron reference_hat();    // (0,0,0) (1,0,0) (0,1,0) (0,0,1)
  static Tetrahedron reference_tilde();  // (0,0,0) (1,0,0) (1,1,0) (0,0,1)
  static Tetrahedron regular();          // unit edge length

  /// Edge (i, j) for the six vertex pairs in lexicographic order.
  static constexpr std::array<std::pair<int, int>, 6> edges{
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

  double edge_length(int i, int j) const { return (v[j] - v[i]).norm(); }
  double diameter() const;
  double signed_volume() const;
  Point3 centroid() const { return (v[0] + v[1] + v[2] + v[3]) / 4.0; }

  /// Affine map from the unit reference simplex: x = v0 + J xi.
  Matrix3 jacobian() const;
  Point3 from_reference(const Point3& xi) const { return v[0] + jacobian() * xi; }
};

/// Throws DegenerateTetrahedron unless the volume clears the scale-invariant
/// threshold and every coordinate is finite.
void require_nondegenerate(const Tetrahedron& t, const GeomTolerances& tol = {});

double volume(const Tetrahedron& t, const GeomTolerances& tol = {});

enum class TetraType { Type1, Type2 };

const char* to_string(TetraType kind);

/// Vertex-index pair into the input tetrahedron, stored with a < b.
struct EdgeRef {
  int a = 0;
  int b = 0;
};

struct Classification {
  TetraType kind = TetraType::Type1;
  /// perm[i] is the input index of the vertex labelled x_{i+1}.
  std::array<int, 4> perm{0, 1, 2, 3};
  /// (alpha_1, alpha_2, alpha_3) = |x1x2|, shortest edge, |x1x4|.
  std::array<double, 3> alpha{};
  EdgeRef e1;  // longest edge adjacent to e2
  EdgeRef e2;  // a globally shortest edge
};

/// Classification into Type 1 / Type 2 by the bisector half-space test.
///
/// Ties among shortest (or longest adjacent) edges go to the lexicographically
/// smallest input vertex pair. A vertex inside the on-plane band counts as
/// sharing the half-space of the other one (Type 1); when x3 is the vertex on
/// the plane, x1 is taken to be the endpoint of e1 on x4's side so that x1 and
/// x4 still share a half-space.
Classification classify(const Tetrahedron& t, const GeomTolerances& tol = {});

/// Orthogonal map y = rotation * x + translation; mirror is set when
/// det(rotation) = -1.
struct RigidMotion {
  Matrix3 rotation = Matrix3::Identity();
  Point3 translation = Point3::Zero();
  bool mirror = false;

  Point3 apply(const Point3& x) const { return rotation * x + translation; }
};

struct StandardPosition {
  TetraType kind = TetraType::Type1;
  std::array<int, 4> perm{0, 1, 2, 3};
  std::array<double, 3> alpha{};
  double s1 = 0, t1 = 1, s21 = 0, s22 = 0, t2 = 1;
  RigidMotion motion;

  /// Canonical coordinates of x1..x4 built from alpha and the parameters.
  std::array<Point3, 4> vertices() const;
  /// The input tetrahedron relabelled into x1..x4 order.
  Tetrahedron relabelled(const Tetrahedron& input) const;
};

StandardPosition standard_position(const Tetrahedron& t, const GeomTolerances& tol = {});

struct TransformMatrices {
  Matrix3 A;  // A-hat for Type 1, A-tilde for Type 2
  Matrix3 D;  // diag(alpha)
  Matrix3 X;
  Matrix3 Y;
  // Closed-form spectral norms of the factors.
  double norm_X = 1, norm_X_inv = 1, norm_Y = 1, norm_Y_inv = 1;
  // Upper bounds on ||A|| and ||A^-1|| from the factor norms.
  double norm_A_bound = 1, norm_A_inv_bound = 1;
  // ||A|| and ||A^-1|| themselves (from the SVD).
  double norm_A = 1, norm_A_inv = 1;
};

TransformMatrices matrices(const StandardPosition& sp);

/// Largest singular value, via SVD.
double spectral_norm(const Matrix3& m);

/// Reference tetrahedron matching a type (T-hat for Type 1, T-tilde for Type 2).
Tetrahedron reference_for(TetraType kind);

struct Quality {
  double R_T = 0;  // h1 h2 h_T^2 / |T|
  double H_T = 0;  // 6 h_T / (t1 t2)
};

Quality quality(const Tetrahedron& t, const GeomTolerances& tol = {});

/// Angles indexed by input vertex numbers 0..3. Face F_i is opposite vertex i.
struct GeometryReport {
  std::array<double, 6> h{};  // sorted edge lengths, h[5] = h_T
  double volume = 0;
  double R_T = 0;
  double H_T = 0;
  /// theta[i][j]: internal angle of F_i at vertex j (i != j), else 0.
  std::array<std::array<double, 4>, 4> theta{};
  /// psi[i][j]: dihedral angle between F_i and F_j (symmetric, i != j).
  std::array<std::array<double, 4>, 4> psi{};
  /// phi[i][j]: angle between F_i and the edge x_i x_j.
  std::array<std::array<double, 4>, 4> phi{};
  double max_angle = 0;  // over all theta and psi

  double h_T() const { return h[5]; }
};

GeometryReport angles(const Tetrahedron& t, const GeomTolerances& tol = {});

/// True iff every face angle and dihedral angle is <= gamma_max (+ tol.angle).
bool mac_check(const Tetrahedron& t, double gamma_max, const GeomTolerances& tol = {});
bool mac_check(const GeometryReport& report, double gamma_max, const GeomTolerances& tol = {});

struct MacConstants {
  double gamma_max = 0;
  double delta = 0;
  double sin_delta = 0;
  double C0 = 0;
  double C1 = 0;
  double D = 0;  // 6 / (C0 C1^2), the bound on H_T / h_T

  /// pi - arcsin(M), defined for 0 < M < 1.
  static double gamma_of_M(double M);
};

MacConstants mac_bound_constants(double gamma_max);

/// (cos g + 1) / (sin(g/2) + 1); lies in (0, 1] for g in [pi/3, pi).
double delta_ratio(double gamma);

/// Angle guaranteed by the converse direction when H_T / h_T <= 6 / M.
double converse_gamma_type1(double M);
double converse_gamma_type2(double M);

/// Angle guaranteed when R_T / h_T <= bound. Uses H_T < 2 R_T, i.e.
/// M = 3 / bound, then the type-specific formula; the larger of the two when
/// the type is not known.
double converse_gamma_max(double r_bound, std::optional<TetraType> kind = std::nullopt);

struct TrigResidual {
  double twosin = 0;
  double face_cosine = 0;
  double dihedral_cosine = 0;

  double max() const;
};

TrigResidual verify_trig_identities(const Tetrahedron& t, const GeomTolerances& tol = {});
TrigResidual verify_trig_identities(const GeometryReport& report);

void validate_gamma_max(double gamma_max);

}  // namespace anisotetra
