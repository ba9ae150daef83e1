#include <doctest.h>

#include <cmath>

#include "anisotetra/error.hpp"
#include "anisotetra/expression.hpp"
#include "anisotetra/interp.hpp"
#include "anisotetra/quad.hpp"
#include "anisotetra/verify.hpp"
#include "test_support.hpp"

using namespace anisotetra;

namespace {

std::array<double, 4> barycentric(const Tetrahedron& t, const Point3& x) {
  const Eigen::Vector3d l = t.jacobian().inverse() * (x - t.v[0]);
  return {1 - l.sum(), l[0], l[1], l[2]};
}

Point3 random_point(const Tetrahedron& t, std::mt19937_64& rng) {
  std::exponential_distribution<double> e;
  double w[4], s = 0;
  for (double& x : w) s += (x = e(rng));
  Point3 p = Point3::Zero();
  for (int i = 0; i < 4; ++i) p += w[i] / s * t.v[i];
  return p;
}

}  // namespace

TEST_SUITE("interp") {
  TEST_CASE("k = 1 basis is barycentric") {
    const Tetrahedron t{{Point3(0.2, 0.1, 0), Point3(1.3, 0, 0.2), Point3(0.4, 0.9, 0.1), Point3(0.3, 0.2, 0.8)}};
    const LagrangeBasis b = lagrange_basis(t, 1);
    REQUIRE(b.functions.size() == 4);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      const Point3 x = random_point(t, rng);
      const auto lam = barycentric(t, x);
      for (std::size_t i = 0; i < 4; ++i) {
        // Node i sits at the vertex with barycentric index gamma.
        int vertex = 0;
        for (int j = 0; j < 4; ++j)
          if (b.nodes[i].gamma.a[static_cast<std::size_t>(j)] == 1) vertex = j;
        CHECK(b.functions[i](x) == doctest::Approx(lam[static_cast<std::size_t>(vertex)]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("k = 2 basis matches the closed forms") {
    const Tetrahedron t = Tetrahedron::reference_hat();
    const LagrangeBasis b = lagrange_basis(t, 2);
    REQUIRE(b.functions.size() == 10);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      const Point3 x = random_point(t, rng);
      const auto lam = barycentric(t, x);
      for (std::size_t i = 0; i < b.nodes.size(); ++i) {
        const auto& g = b.nodes[i].gamma.a;
        double want = 0;
        int first = -1, second = -1;
        for (int j = 0; j < 4; ++j) {
          if (g[static_cast<std::size_t>(j)] == 2) first = second = j;
          if (g[static_cast<std::size_t>(j)] == 1) (first < 0 ? first : second) = j;
        }
        if (first == second)
          want = lam[first] * (2 * lam[first] - 1);
        else
          want = 4 * lam[first] * lam[second];
        CHECK(b.functions[i](x) == doctest::Approx(want).epsilon(1e-11));
      }
    }
    for (std::size_t i = 0; i < b.nodes.size(); ++i)
      for (std::size_t j = 0; j < b.nodes.size(); ++j)
        CHECK(std::abs(b.functions[i](b.nodes[j].point) - (i == j)) < 1e-12);
  }

  TEST_CASE("partition of unity") {
    const Tetrahedron t{{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0.3, 0.01, 0), Point3(0.2, 0.004, 0.01)}};
    for (int k = 1; k <= 6; ++k) {
      const LagrangeBasis b = lagrange_basis(t, k);
      Polynomial3 sum(k, b.functions[0].frame());
      for (const auto& f : b.functions) sum += f;
      sum -= Polynomial3::constant(1.0, sum.frame());
      CHECK(sum.max_abs_coeff() < 1e-10);
    }
    CHECK_THROWS_AS(lagrange_basis(t, kMaxDegree + 1), Error);
    CHECK_THROWS_AS(lagrange_basis(t, 0), Error);
  }

  TEST_CASE("interpolation of simple fields") {
    const Tetrahedron t = Tetrahedron::reference_hat();
    const Interpolant c = interpolate(ScalarField::constant(2.5), t, 3);
    CHECK(c(Point3(0.1, 0.2, 0.3)) == doctest::Approx(2.5));

    const Interpolant i = interpolate(Polynomial3::monomial({{2, 0, 0}}), t, 1);
    const Polynomial3 local = i.poly.in_frame(Frame{});
    CHECK(std::abs(local.coeff({{1, 0, 0}}) - 1) < 1e-14);
    for (const auto& g : indices_up_to(2))
      if (g != MultiIndex3{{1, 0, 0}}) CHECK(std::abs(local.coeff(g)) < 1e-14);

    const ScalarField u = residual(ScalarField::from_polynomial(Polynomial3::monomial({{2, 0, 0}})), t, 1);
    CHECK(u(Point3(0.5, 0, 0)) == doctest::Approx(-0.25));
    CHECK(sup_abs(u, t) == doctest::Approx(0.25).epsilon(1e-12));
  }

  TEST_CASE("reproduction and nodal exactness") {
    TetraGenSpec gen;
    gen.family = Family::Mixed;
    gen.seed = 31;
    for (int k = 1; k <= 4; ++k) {
      for (std::size_t s = 0; s < 30; ++s) {
        const Tetrahedron t = s % 4 == 0 ? Tetrahedron::reference_hat() : generate_one(gen, s);
        std::mt19937_64 rng = sample_rng(99, s * 8 + static_cast<std::uint64_t>(k));
        const Polynomial3 q = random_polynomial(k, rng);
        const Interpolant I = interpolate(q, t, k);
        // Compare in the element's reference frame, where coefficients are O(|q|).
        const Polynomial3 local = q.in_frame(I.poly.frame());
        const Polynomial3 diff = I.poly - local;
        CHECK(diff.max_abs_coeff() < 1e-9 * std::max(1.0, local.max_abs_coeff()));
        CHECK(I.nodal_residual() < 1e-9);
      }
    }
    const ScalarField v = expression_field(Expression::parse("exp(x)*sin(y + 2*z)"));
    const Tetrahedron t = generate_one(gen, 2);
    for (int k = 1; k <= 5; ++k) {
      const ScalarField u = residual(v, t, k);
      for (const auto& n : sigma_k(t, k)) CHECK(std::abs(u(n.point)) < 1e-9);
    }
  }

  TEST_CASE("affine covariance and linearity") {
    const ScalarField v = expression_field(Expression::parse("cos(x - y) + x*z^2"));
    const ScalarField w = expression_field(Expression::parse("exp(-y)*z"));
    const Tetrahedron t{{Point3(0, 0, 0), Point3(1, 0.1, 0), Point3(0.2, 0.6, 0), Point3(0.1, 0.2, 0.5)}};
    Matrix3 M;
    M << 2, 0.3, -0.1, 0.2, 0.5, 0.4, -0.3, 0.1, 1.5;
    const Point3 origin(0.5, -1, 2);
    Tetrahedron Ft;
    for (int i = 0; i < 4; ++i) Ft.v[i] = origin + M * t.v[i];
    std::mt19937_64 rng(4);
    for (int k = 1; k <= 4; ++k) {
      const Interpolant a = interpolate(v.pulled_through(origin, M), Ft, k);
      const Interpolant b = interpolate(v, t, k);
      const Interpolant sum = interpolate(ScalarField::linear_combination(2.0, v, -3.0, w), t, k);
      const Interpolant iw = interpolate(w, t, k);
      for (int trial = 0; trial < 20; ++trial) {
        const Point3 x = random_point(t, rng);
        CHECK(a(origin + M * x) == doctest::Approx(b(x)).epsilon(1e-9));
        CHECK(sum(x) == doctest::Approx(2 * b(x) - 3 * iw(x)).epsilon(1e-9));
      }
    }
  }
}
