#include "anisotetra/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace anisotetra {

namespace {

constexpr double kPi = std::numbers::pi;

double angle_between(const Point3& a, const Point3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

// The face opposite vertex i, as the three remaining indices in increasing order.
std::array<int, 3> face_of(int i) {
  std::array<int, 3> f{};
  int n = 0;
  for (int j = 0; j < 4; ++j)
    if (j != i) f[n++] = j;
  return f;
}

// Unit normal of face F_i pointing toward vertex i.
Point3 inward_normal(const Tetrahedron& t, int i) {
  const auto f = face_of(i);
  Point3 n = (t.v[f[1]] - t.v[f[0]]).cross(t.v[f[2]] - t.v[f[0]]);
  n.normalize();
  if (n.dot(t.v[i] - t.v[f[0]]) < 0) n = -n;
  return n;
}

}  // namespace

const char* to_string(TetraType kind) {
  return kind == TetraType::Type1 ? "Type1" : "Type2";
}

Tetrahedron Tetrahedron::reference_hat() {
  return {{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1)}};
}

Tetrahedron Tetrahedron::reference_tilde() {
  return {{Point3(0, 0, 0), Point3(1, 0, 0), Point3(1, 1, 0), Point3(0, 0, 1)}};
}

Tetrahedron Tetrahedron::regular() {
  const double r = 1.0 / (2.0 * std::sqrt(2.0));
  return {{Point3(r, r, r), Point3(r, -r, -r), Point3(-r, r, -r), Point3(-r, -r, r)}};
}

double Tetrahedron::diameter() const {
  double h = 0;
  for (auto [i, j] : edges) h = std::max(h, edge_length(i, j));
  return h;
}

double Tetrahedron::signed_volume() const {
  return jacobian().determinant() / 6.0;
}

Matrix3 Tetrahedron::jacobian() const {
  Matrix3 j;
  j.col(0) = v[1] - v[0];
  j.col(1) = v[2] - v[0];
  j.col(2) = v[3] - v[0];
  return j;
}

Tetrahedron reference_for(TetraType kind) {
  return kind == TetraType::Type1 ? Tetrahedron::reference_hat()
                                  : Tetrahedron::reference_tilde();
}

void require_nondegenerate(const Tetrahedron& t, const GeomTolerances& tol) {
  for (const auto& p : t.v) {
    if (!p.allFinite())
      throw Error(ErrorKind::DegenerateTetrahedron, "tetrahedron has a non-finite coordinate");
  }
  const double h = t.diameter();
  const double vol = std::abs(t.signed_volume());
  if (!(h > 0) || !(vol >= tol.volume * h * h * h)) {
    std::ostringstream os;
    os << "degenerate tetrahedron: |T| = " << vol << " below threshold "
       << tol.volume << " * h_T^3 (h_T = " << h << ")";
    throw Error(ErrorKind::DegenerateTetrahedron, os.str());
  }
}

double volume(const Tetrahedron& t, const GeomTolerances& tol) {
  require_nondegenerate(t, tol);
  return std::abs(t.signed_volume());
}

Classification classify(const Tetrahedron& t, const GeomTolerances& tol) {
  require_nondegenerate(t, tol);
  const double h_T = t.diameter();
  const double band = tol.plane * h_T;

  std::array<double, 6> len{};
  for (std::size_t e = 0; e < 6; ++e) {
    auto [i, j] = Tetrahedron::edges[e];
    len[e] = t.edge_length(i, j);
  }

  // Shortest edge; near-ties within the band resolve to the first edge in
  // lexicographic order.
  const double shortest = *std::min_element(len.begin(), len.end());
  std::size_t e2 = 0;
  while (len[e2] > shortest + band) ++e2;
  const auto [a2, b2] = Tetrahedron::edges[e2];

  // Longest edge sharing exactly one vertex with e2.
  double longest = -1;
  for (std::size_t e = 0; e < 6; ++e) {
    auto [i, j] = Tetrahedron::edges[e];
    const bool adjacent = (i == a2 || i == b2) != (j == a2 || j == b2);
    if (adjacent) longest = std::max(longest, len[e]);
  }
  std::size_t e1 = 0;
  for (; e1 < 6; ++e1) {
    auto [i, j] = Tetrahedron::edges[e1];
    const bool adjacent = (i == a2 || i == b2) != (j == a2 || j == b2);
    if (adjacent && len[e1] >= longest - band) break;
  }
  const auto [a1, b1] = Tetrahedron::edges[e1];

  const int shared = (a1 == a2 || a1 == b2) ? a1 : b1;
  const int other = shared == a1 ? b1 : a1;
  const int x3 = (a2 == shared) ? b2 : a2;
  int x4 = 0;
  while (x4 == shared || x4 == other || x4 == x3) ++x4;

  // Signed distance from the bisector plane of e1; negative on `shared`'s side.
  const Point3 mid = 0.5 * (t.v[shared] + t.v[other]);
  const Point3 dir = (t.v[other] - t.v[shared]).normalized();
  const double f3 = (t.v[x3] - mid).dot(dir);
  const double f4 = (t.v[x4] - mid).dot(dir);
  const bool on3 = std::abs(f3) <= band;
  const bool on4 = std::abs(f4) <= band;

  Classification c;
  int x1 = shared;
  int x2 = other;
  if (on3) {
    c.kind = TetraType::Type1;
    if (f4 > band) std::swap(x1, x2);
  } else if (on4 || (f3 < 0) == (f4 < 0)) {
    c.kind = TetraType::Type1;
  } else {
    c.kind = TetraType::Type2;
    std::swap(x1, x2);
  }
  c.perm = {x1, x2, x3, x4};
  c.alpha[0] = t.edge_length(x1, x2);
  c.alpha[1] = c.kind == TetraType::Type1 ? t.edge_length(x1, x3) : t.edge_length(x2, x3);
  c.alpha[2] = t.edge_length(x1, x4);
  c.e1 = {std::min(x1, x2), std::max(x1, x2)};
  const int e2_end = c.kind == TetraType::Type1 ? x1 : x2;
  c.e2 = {std::min(e2_end, x3), std::max(e2_end, x3)};
  return c;
}

std::array<Point3, 4> StandardPosition::vertices() const {
  const auto [a1, a2, a3] = alpha;
  const double x3 = kind == TetraType::Type1 ? a2 * s1 : a1 - a2 * s1;
  return {Point3(0, 0, 0), Point3(a1, 0, 0), Point3(x3, a2 * t1, 0),
          Point3(a3 * s21, a3 * s22, a3 * t2)};
}

Tetrahedron StandardPosition::relabelled(const Tetrahedron& input) const {
  return {{input.v[perm[0]], input.v[perm[1]], input.v[perm[2]], input.v[perm[3]]}};
}

StandardPosition standard_position(const Tetrahedron& t, const GeomTolerances& tol) {
  const Classification c = classify(t, tol);
  StandardPosition sp;
  sp.kind = c.kind;
  sp.perm = c.perm;
  sp.alpha = c.alpha;

  const Tetrahedron r = sp.relabelled(t);
  // x3 is measured from the endpoint of e2 on the x1x2 axis, which keeps the
  // offsets accurate when alpha_2 << alpha_1.
  const Point3& anchor = c.kind == TetraType::Type1 ? r.v[0] : r.v[1];

  const Point3 ex = (r.v[1] - r.v[0]).normalized();
  Point3 w = r.v[2] - anchor;
  w -= w.dot(ex) * ex;
  const Point3 ey = w.normalized();
  Point3 ez = ex.cross(ey);
  const bool mirror = (r.v[3] - r.v[0]).dot(ez) < 0;
  if (mirror) ez = -ez;

  Matrix3 rot;
  rot.row(0) = ex.transpose();
  rot.row(1) = ey.transpose();
  rot.row(2) = ez.transpose();
  sp.motion.rotation = rot;
  sp.motion.translation = -(rot * r.v[0]);
  sp.motion.mirror = mirror;

  const Point3 c3 = rot * (r.v[2] - anchor);
  const Point3 c4 = rot * (r.v[3] - r.v[0]);
  const auto [a1, a2, a3] = sp.alpha;
  sp.s1 = c.kind == TetraType::Type1 ? c3.x() / a2 : -c3.x() / a2;
  sp.t1 = c3.y() / a2;
  sp.s21 = c4.x() / a3;
  sp.s22 = c4.y() / a3;
  sp.t2 = c4.z() / a3;
  (void)a1;
  return sp;
}

double spectral_norm(const Matrix3& m) {
  Eigen::JacobiSVD<Matrix3> svd(m);
  return svd.singularValues()(0);
}

TransformMatrices matrices(const StandardPosition& sp) {
  TransformMatrices tm;
  const double sign = sp.kind == TetraType::Type1 ? 1.0 : -1.0;
  tm.A << 1, sign * sp.s1, sp.s21,
          0, sp.t1, sp.s22,
          0, 0, sp.t2;
  tm.D = Eigen::Vector3d(sp.alpha[0], sp.alpha[1], sp.alpha[2]).asDiagonal();
  tm.X << 1, 0, sp.s21,
          0, 1, sp.s22,
          0, 0, sp.t2;
  tm.Y << 1, sign * sp.s1, 0,
          0, sp.t1, 0,
          0, 0, 1;

  // 1 - s is formed as t^2 / (1 + s) to keep it accurate for flat elements.
  const double bs1 = std::abs(sp.s1);
  const double bs2 = std::hypot(sp.s21, sp.s22);
  tm.norm_X = std::sqrt(1 + bs2);
  tm.norm_X_inv = 1 / std::sqrt(sp.t2 * sp.t2 / (1 + bs2));
  tm.norm_Y = std::sqrt(1 + bs1);
  tm.norm_Y_inv = 1 / std::sqrt(sp.t1 * sp.t1 / (1 + bs1));
  tm.norm_A_bound = tm.norm_X * tm.norm_Y;
  tm.norm_A_inv_bound = tm.norm_X_inv * tm.norm_Y_inv;

  tm.norm_A = spectral_norm(tm.A);
  tm.norm_A_inv = spectral_norm(tm.A.inverse());
  return tm;
}

Quality quality(const Tetrahedron& t, const GeomTolerances& tol) {
  const double vol = volume(t, tol);
  std::array<double, 6> h{};
  for (std::size_t e = 0; e < 6; ++e) {
    auto [i, j] = Tetrahedron::edges[e];
    h[e] = t.edge_length(i, j);
  }
  std::sort(h.begin(), h.end());
  const StandardPosition sp = standard_position(t, tol);
  return {h[0] * h[1] * h[5] * h[5] / vol, 6 * h[5] / (sp.t1 * sp.t2)};
}

GeometryReport angles(const Tetrahedron& t, const GeomTolerances& tol) {
  GeometryReport r;
  r.volume = volume(t, tol);
  for (std::size_t e = 0; e < 6; ++e) {
    auto [i, j] = Tetrahedron::edges[e];
    r.h[e] = t.edge_length(i, j);
  }
  std::sort(r.h.begin(), r.h.end());
  const Quality q = quality(t, tol);
  r.R_T = q.R_T;
  r.H_T = q.H_T;

  std::array<Point3, 4> normal;
  for (int i = 0; i < 4; ++i) normal[i] = inward_normal(t, i);

  double max_angle = 0;
  for (int i = 0; i < 4; ++i) {
    const auto f = face_of(i);
    for (int a = 0; a < 3; ++a) {
      const int j = f[a];
      const int p = f[(a + 1) % 3];
      const int q2 = f[(a + 2) % 3];
      r.theta[i][j] = angle_between(t.v[p] - t.v[j], t.v[q2] - t.v[j]);
      max_angle = std::max(max_angle, r.theta[i][j]);

      const Point3 edge = t.v[i] - t.v[j];
      const double normal_part = std::abs(edge.dot(normal[i]));
      const double tangential = (edge - edge.dot(normal[i]) * normal[i]).norm();
      r.phi[i][j] = std::atan2(normal_part, tangential);
    }
    for (int j = i + 1; j < 4; ++j) {
      const double psi = kPi - angle_between(normal[i], normal[j]);
      r.psi[i][j] = r.psi[j][i] = psi;
      max_angle = std::max(max_angle, psi);
    }
  }
  r.max_angle = max_angle;
  return r;
}

void validate_gamma_max(double gamma_max) {
  if (!(gamma_max >= kPi / 3 && gamma_max < kPi)) {
    std::ostringstream os;
    os << "gamma_max = " << gamma_max << " outside [pi/3, pi)";
    throw Error(ErrorKind::InvalidGammaMax, os.str());
  }
}

bool mac_check(const GeometryReport& report, double gamma_max, const GeomTolerances& tol) {
  validate_gamma_max(gamma_max);
  return report.max_angle <= gamma_max + tol.angle;
}

bool mac_check(const Tetrahedron& t, double gamma_max, const GeomTolerances& tol) {
  validate_gamma_max(gamma_max);
  return mac_check(angles(t, tol), gamma_max, tol);
}

double delta_ratio(double gamma) {
  return (std::cos(gamma) + 1) / (std::sin(gamma / 2) + 1);
}

double MacConstants::gamma_of_M(double M) {
  if (!(M > 0 && M < 1))
    throw Error(ErrorKind::InvalidGammaMax, "gamma(M) needs 0 < M < 1");
  return kPi - std::asin(M);
}

MacConstants mac_bound_constants(double gamma_max) {
  validate_gamma_max(gamma_max);
  MacConstants c;
  c.gamma_max = gamma_max;
  c.sin_delta = std::sqrt(delta_ratio(gamma_max));
  c.delta = std::asin(std::min(1.0, c.sin_delta));
  c.C1 = std::min(std::sin((kPi - gamma_max) / 2), std::sin(gamma_max));
  c.C0 = std::min(c.sin_delta, std::sin(gamma_max));
  c.D = 6 / (c.C0 * c.C1 * c.C1);
  return c;
}

double converse_gamma_type1(double M) {
  const double g = MacConstants::gamma_of_M(M / 2);
  const double dihedral = std::acos(-std::sqrt(1 - M * M) * std::sqrt(1 - M * M / 4));
  return std::max(g, dihedral);
}

double converse_gamma_type2(double M) {
  const double g = MacConstants::gamma_of_M(M);
  return std::max(g, std::acos(M * M - 1));
}

double converse_gamma_max(double r_bound, std::optional<TetraType> kind) {
  const double M = 3 / r_bound;
  if (!(M > 0 && M < 1))
    throw Error(ErrorKind::InvalidGammaMax, "R_T/h_T bound must exceed 3");
  if (!kind) return std::max(converse_gamma_type1(M), converse_gamma_type2(M));
  return *kind == TetraType::Type1 ? converse_gamma_type1(M) : converse_gamma_type2(M);
}

double TrigResidual::max() const {
  return std::max({twosin, face_cosine, dihedral_cosine});
}

TrigResidual verify_trig_identities(const GeometryReport& g) {
  TrigResidual res;
  const auto& th = g.theta;
  const auto& ps = g.psi;
  for (int j = 0; j < 4; ++j) {
    const auto others = face_of(j);
    for (int n : others) {
      for (int k : others) {
        if (k == n) continue;
        const double lhs = std::sin(g.phi[j][n]);
        const double rhs = std::sin(th[k][n]) * std::sin(ps[k][j]);
        res.twosin = std::max(res.twosin, std::abs(lhs - rhs));
      }
    }
    for (int a = 0; a < 3; ++a) {
      const int k = others[a];
      const int m = others[(a + 1) % 3];
      const int n = others[(a + 2) % 3];
      const double face = std::cos(th[m][j]) * std::cos(th[n][j]) +
                          std::sin(th[m][j]) * std::sin(th[n][j]) * std::cos(ps[m][n]);
      res.face_cosine = std::max(res.face_cosine, std::abs(std::cos(th[k][j]) - face));
      const double dihedral = std::sin(ps[m][k]) * std::sin(ps[n][k]) * std::cos(th[k][j]) -
                              std::cos(ps[m][k]) * std::cos(ps[n][k]);
      res.dihedral_cosine =
          std::max(res.dihedral_cosine, std::abs(std::cos(ps[n][m]) - dihedral));
    }
  }
  return res;
}

TrigResidual verify_trig_identities(const Tetrahedron& t, const GeomTolerances& tol) {
  return verify_trig_identities(angles(t, tol));
}

}  // namespace anisotetra
