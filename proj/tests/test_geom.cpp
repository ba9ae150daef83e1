#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "anisotetra/error.hpp"
#include "anisotetra/geom.hpp"
#include "anisotetra/verify.hpp"
#include "test_support.hpp"

using namespace anisotetra;
using testing::angle;
using testing::rel;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent half-space oracle: shortest edge, longest edge sharing a
// vertex with it, then the sides of the two remaining vertices relative to
// the perpendicular bisector plane of that longest edge.
TetraType type_oracle(const Tetrahedron& t) {
  auto len = [&](int i, int j) { return t.edge_length(i, j); };
  std::pair<int, int> e2{0, 1};
  for (auto [i, j] : Tetrahedron::edges)
    if (len(i, j) < len(e2.first, e2.second) - 1e-12) e2 = {i, j};
  std::pair<int, int> e1{-1, -1};
  double best = -1;
  for (auto [i, j] : Tetrahedron::edges) {
    if (std::pair{i, j} == e2) continue;
    const bool adjacent = i == e2.first || i == e2.second || j == e2.first || j == e2.second;
    if (adjacent && len(i, j) > best + 1e-12) {
      best = len(i, j);
      e1 = {i, j};
    }
  }
  const Point3 a = t.v[e1.first], b = t.v[e1.second];
  const Point3 n = (b - a).normalized();
  const Point3 mid = (a + b) / 2;
  double side[2];
  int s = 0;
  for (int v = 0; v < 4; ++v)
    if (v != e1.first && v != e1.second) side[s++] = n.dot(t.v[v] - mid);
  return side[0] * side[1] >= 0 ? TetraType::Type1 : TetraType::Type2;
}

std::vector<double> all_angles(const GeometryReport& g) {
  std::vector<double> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) {
        out.push_back(g.theta[i][j]);
        out.push_back(g.psi[i][j]);
      }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("geom") {
  TEST_CASE("volume of the reference simplex and vertex permutations") {
    const Tetrahedron t = Tetrahedron::reference_hat();
    CHECK(volume(t) == doctest::Approx(1.0 / 6).epsilon(1e-15));
    std::array<int, 4> p{0, 1, 2, 3};
    do {
      Tetrahedron q;
      for (int i = 0; i < 4; ++i) q.v[i] = t.v[p[i]];
      CHECK(volume(q) == doctest::Approx(1.0 / 6).epsilon(1e-15));
    } while (std::next_permutation(p.begin(), p.end()));
  }

  TEST_CASE("degenerate input is refused") {
    const Tetrahedron flat{{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(1, 1, 0)}};
    CHECK_THROWS_AS(require_nondegenerate(flat), Error);
    try {
      quality(flat);
      FAIL("expected DegenerateTetrahedron");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateTetrahedron);
    }
    Tetrahedron nan = Tetrahedron::reference_hat();
    nan.v[2][1] = std::nan("");
    CHECK_THROWS_AS(angles(nan), Error);
  }

  TEST_CASE("classification of hand-built configurations") {
    // Shortest edge x1x2 with x2 near the far end of the longest edge x0x1,
    // x3 near x0: opposite sides of the bisector plane x = 1/2.
    const Tetrahedron t2{{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0.9, 0.1, 0), Point3(0.2, 0.3, 0.4)}};
    CHECK(type_oracle(t2) == TetraType::Type2);
    CHECK(classify(t2).kind == TetraType::Type2);
    CHECK(classify(t2).e2.a + classify(t2).e2.b == 3);

    const Tetrahedron t1{{Point3(0, 0, 0), Point3(10, 0, 0), Point3(0.5, 1, 0), Point3(0.4, 0.5, 1)}};
    CHECK(type_oracle(t1) == TetraType::Type1);
    CHECK(classify(t1).kind == TetraType::Type1);

    // Shortest edge x2x3, longest adjacent edge x0x2; x1 and x3 both lie on
    // the x0 side of its bisector plane, so the rule gives Type 1.
    const Tetrahedron same{{Point3(0, 0, 0), Point3(10, 0, 0), Point3(5.2, 1, 0), Point3(5, 0.5, 1)}};
    CHECK(type_oracle(same) == TetraType::Type1);
    CHECK(classify(same).kind == TetraType::Type1);
  }

  TEST_CASE("classification agrees with the half-space oracle on random elements") {
    TetraGenSpec gen;
    gen.seed = 11;
    for (std::size_t i = 0; i < 500; ++i) {
      const Tetrahedron t = generate_one(gen, i);
      CHECK(classify(t).kind == type_oracle(t));
    }
  }

  TEST_CASE("reference simplex: alpha and standard position") {
    const Tetrahedron t = Tetrahedron::reference_hat();
    const Classification c = classify(t);
    CHECK(c.alpha[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(c.alpha[1] == doctest::Approx(1.0));
    CHECK((std::abs(c.alpha[2] - 1) < 1e-12 || std::abs(c.alpha[2] - std::sqrt(2.0)) < 1e-12));
    const StandardPosition sp = standard_position(t);
    CHECK(sp.t1 > 0);
    CHECK(sp.t2 > 0);
    CHECK(sp.alpha[0] * sp.alpha[1] * sp.alpha[2] * sp.t1 * sp.t2 / 6 == doctest::Approx(1.0 / 6));
  }

  TEST_CASE("standard position is a fixed point and motion invariant") {
    StandardPosition want;
    want.alpha = {1.0, 0.3, 0.45};
    want.s1 = 0.2;
    want.t1 = std::sqrt(1 - 0.04);
    want.s21 = 0.1;
    want.s22 = 0.3;
    want.t2 = std::sqrt(1 - 0.01 - 0.09);
    const auto v = want.vertices();
    const Tetrahedron t{{v[0], v[1], v[2], v[3]}};
    const StandardPosition sp = standard_position(t);
    CHECK(sp.kind == TetraType::Type1);
    for (int i = 0; i < 3; ++i) CHECK(sp.alpha[i] == doctest::Approx(want.alpha[i]).epsilon(1e-12));
    CHECK(sp.s1 == doctest::Approx(want.s1).epsilon(1e-12));
    CHECK(sp.t2 == doctest::Approx(want.t2).epsilon(1e-12));
    CHECK((sp.motion.rotation - Matrix3::Identity()).norm() < 1e-12);
    CHECK(sp.motion.translation.norm() < 1e-12);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const Tetrahedron m = testing::moved(t, testing::random_rotation(rng), Point3(1.5, -2, 0.25));
      const StandardPosition q = standard_position(m);
      CHECK(q.kind == sp.kind);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(q.alpha[i] - sp.alpha[i]) < 1e-9);
      CHECK(std::abs(q.s1 - sp.s1) < 1e-9);
      CHECK(std::abs(q.t1 - sp.t1) < 1e-9);
      CHECK(std::abs(std::hypot(q.s21, q.s22) - std::hypot(sp.s21, sp.s22)) < 1e-9);
      CHECK(std::abs(q.t2 - sp.t2) < 1e-9);
    }
  }

  TEST_CASE("transform matrices") {
    SUBCASE("orthogonal parameters give the identity") {
      StandardPosition sp;
      sp.alpha = {1, 1, 1};
      const TransformMatrices m = matrices(sp);
      CHECK((m.A - Matrix3::Identity()).norm() < 1e-15);
      CHECK(m.norm_A == doctest::Approx(1.0));
      CHECK(m.norm_A_inv == doctest::Approx(1.0));
      CHECK(m.norm_X == doctest::Approx(1.0));
    }
    SUBCASE("t1 = t2 = 1/2 against the SVD") {
      StandardPosition sp;
      sp.alpha = {1, 0.5, 0.5};
      sp.t1 = 0.5;
      sp.s1 = std::sqrt(0.75);
      sp.t2 = 0.5;
      sp.s21 = 0.6;
      sp.s22 = std::sqrt(0.75 - 0.36);
      const TransformMatrices m = matrices(sp);
      CHECK(rel(m.norm_X, spectral_norm(m.X)) < 1e-10);
      CHECK(rel(m.norm_X_inv, spectral_norm(m.X.inverse())) < 1e-10);
      CHECK(rel(m.norm_Y, spectral_norm(m.Y)) < 1e-10);
      CHECK(rel(m.norm_Y_inv, spectral_norm(m.Y.inverse())) < 1e-10);
      const double bound = std::sqrt(1 + sp.s1) / sp.t1 * std::sqrt(1 + std::hypot(sp.s21, sp.s22)) / sp.t2;
      CHECK(spectral_norm(m.A.inverse()) <= bound * (1 + 1e-12));
      CHECK(m.norm_A_inv <= m.norm_A_inv_bound * (1 + 1e-12));
    }
  }

  TEST_CASE("R_T and H_T") {
    const Tetrahedron t = Tetrahedron::reference_hat();
    CHECK(quality(t).R_T == doctest::Approx(12.0).epsilon(1e-14));

    const Tetrahedron r = Tetrahedron::regular();
    const Quality qr = quality(r);
    CHECK(qr.R_T / qr.H_T == doctest::Approx(1.0).epsilon(1e-12));

    const Quality q1 = quality(t);
    for (double c : {0.01, 3.0, 250.0}) {
      const Quality qc = quality(testing::moved(t, Matrix3::Identity(), Point3::Zero(), c));
      CHECK(qc.R_T == doctest::Approx(c * q1.R_T).epsilon(1e-12));
      CHECK(qc.H_T == doctest::Approx(c * q1.H_T).epsilon(1e-12));
    }

    for (double eps : {1e-1, 1e-3, 1e-6}) {
      const Tetrahedron n = needle(eps);
      const StandardPosition sp = standard_position(n);
      const Quality q = quality(n);
      CHECK(q.H_T == doctest::Approx(6 * n.diameter() / (sp.t1 * sp.t2)).epsilon(1e-9));
      CHECK(q.H_T / n.diameter() < 13);
    }
  }

  TEST_CASE("angles of the reference and regular tetrahedra") {
    const Tetrahedron t = Tetrahedron::reference_hat();
    const GeometryReport g = angles(t);
    // Inward normals of the faces opposite each vertex.
    std::array<Point3, 4> n;
    for (int i = 0; i < 4; ++i) {
      std::array<int, 3> f;
      int c = 0;
      for (int j = 0; j < 4; ++j)
        if (j != i) f[c++] = j;
      Point3 nn = (t.v[f[1]] - t.v[f[0]]).cross(t.v[f[2]] - t.v[f[0]]);
      if (nn.dot(t.v[i] - t.v[f[0]]) < 0) nn = -nn;
      n[i] = nn;
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        CHECK(g.psi[i][j] == doctest::Approx(kPi - angle(n[i], n[j])).epsilon(1e-12));
    // Faces opposite vertices 2 and 3 lie in coordinate planes; face 0 is slanted.
    CHECK(g.psi[2][3] == doctest::Approx(kPi / 2));
    CHECK(g.psi[0][1] == doctest::Approx(std::acos(1 / std::sqrt(3.0))));
    CHECK(g.psi[0][1] == doctest::Approx(0.9553166).epsilon(1e-7));
    CHECK(g.max_angle == doctest::Approx(kPi / 2));

    const GeometryReport gr = angles(Tetrahedron::regular());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) {
          CHECK(gr.theta[i][j] == doctest::Approx(kPi / 3).epsilon(1e-12));
          CHECK(gr.psi[i][j] == doctest::Approx(std::acos(1.0 / 3)).epsilon(1e-12));
        }
    CHECK(verify_trig_identities(Tetrahedron::regular()).max() < 1e-12);
    CHECK(verify_trig_identities(t).max() < 1e-12);
  }

  TEST_CASE("face angle oracle") {
    TetraGenSpec gen;
    gen.seed = 5;
    for (std::size_t s = 0; s < 100; ++s) {
      const Tetrahedron t = generate_one(gen, s);
      const GeometryReport g = angles(t);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          if (i == j) continue;
          int a = -1, b = -1;
          for (int v = 0; v < 4; ++v)
            if (v != i && v != j) (a < 0 ? a : b) = v;
          CHECK(g.theta[i][j] == doctest::Approx(angle(t.v[a] - t.v[j], t.v[b] - t.v[j])).epsilon(1e-10));
        }
    }
  }

  TEST_CASE("rigid motion and reflection invariance") {
    TetraGenSpec gen;
    gen.family = Family::Mixed;
    gen.seed = 17;
    std::mt19937_64 rng(9);
    for (std::size_t s = 0; s < 200; ++s) {
      const Tetrahedron t = generate_one(gen, s);
      Matrix3 R = testing::random_rotation(rng);
      if (s % 2) R.col(0) = -R.col(0);
      const Tetrahedron m = testing::moved(t, R, Point3(0.3, -0.7, 2.0));
      const GeometryReport a = angles(t), b = angles(m);
      CHECK(std::abs(b.volume - a.volume) <= 1e-9 * a.volume);
      for (int i = 0; i < 6; ++i) CHECK(rel(b.h[i], a.h[i]) < 1e-9);
      CHECK(std::abs(b.R_T - a.R_T) <= 1e-9 * a.R_T);
      CHECK(std::abs(b.H_T - a.H_T) <= 1e-9 * a.H_T);
      const auto aa = all_angles(a), bb = all_angles(b);
      for (std::size_t i = 0; i < aa.size(); ++i) CHECK(std::abs(aa[i] - bb[i]) < 1e-9);
      CHECK(classify(m).kind == classify(t).kind);
      CHECK(mac_check(m, 2.0) == mac_check(t, 2.0));
    }
  }

  TEST_CASE("R_T and H_T are equivalent within a factor 2") {
    TetraGenSpec gen;
    gen.family = Family::Mixed;
    gen.seed = 23;
    for (std::size_t s = 0; s < 3000; ++s) {
      const Quality q = quality(generate_one(gen, s));
      CHECK(q.R_T >= 0.5 * q.H_T * (1 - 1e-9));
      CHECK(q.R_T <= 2 * q.H_T * (1 + 1e-9));
    }
  }

  TEST_CASE("maximum angle condition") {
    const Tetrahedron t = Tetrahedron::reference_hat();
    CHECK(mac_check(t, kPi / 2));
    CHECK_FALSE(mac_check(t, kPi / 3));
    CHECK_FALSE(mac_check(sliver(1e-3), 0.9 * kPi));
    CHECK(mac_check(Tetrahedron::regular(), std::acos(1.0 / 3) + 1e-6));
    CHECK_THROWS_AS(validate_gamma_max(kPi / 3 - 0.1), Error);
    CHECK_THROWS_AS(validate_gamma_max(kPi), Error);
  }

  TEST_CASE("MAC constants") {
    const MacConstants c = mac_bound_constants(kPi / 2);
    CHECK(c.sin_delta == doctest::Approx(0.7653669).epsilon(1e-7));
    CHECK(c.C1 == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
    CHECK(c.C0 == doctest::Approx(0.7653669).epsilon(1e-7));
    CHECK(c.D == doctest::Approx(15.6787).epsilon(1e-5));
    CHECK(c.D == doctest::Approx(6 / (c.C0 * c.C1 * c.C1)).epsilon(1e-14));

    double previous = 0;
    for (double g : {2.0, 2.5, 3.0, 3.1, 3.14}) {
      const MacConstants m = mac_bound_constants(g);
      CHECK(m.D > previous);
      previous = m.D;
    }
    CHECK(mac_bound_constants(kPi - 1e-6).sin_delta < 1e-3);

    for (int i = 0; i < 1000; ++i) {
      const double g = kPi / 3 + (kPi - kPi / 3) * (i + 0.5) / 1000;
      const double r = delta_ratio(g);
      CHECK(r > 0);
      CHECK(r <= 1 + 1e-15);
    }
  }

  TEST_CASE("converse angle for the regular tetrahedron") {
    const double gamma = std::acos(1.0 / 3) + 1e-6;
    const MacConstants c = mac_bound_constants(gamma);
    const Tetrahedron r = Tetrahedron::regular();
    const Quality q = quality(r);
    CHECK(q.H_T / r.diameter() <= c.D);
    CHECK(q.R_T / r.diameter() <= c.D);
    CHECK(mac_check(r, converse_gamma_max(c.D)));
    CHECK(converse_gamma_max(c.D) < kPi);
    CHECK(converse_gamma_max(c.D) >= std::max(converse_gamma_type1(3 / c.D), converse_gamma_type2(3 / c.D)) - 1e-15);
  }
}
