#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "anisotetra/error.hpp"
#include "anisotetra/expression.hpp"
#include "anisotetra/interp.hpp"
#include "anisotetra/lattice.hpp"

using namespace anisotetra;

namespace {

double f_exp(const Point3& p) { return std::exp(p[0] + p[1] + p[2]); }

// Composition of 1D forward differences: each axis applies
// (k / s) * ... recursively, i.e. the quotient as iterated 1D divided
// differences on the uniform grid of spacing 1/k.
double iterated_difference(const std::function<double(const Point3&)>& f, const MultiIndex3& gamma,
                           const MultiIndex3& delta, int k) {
  for (int axis = 0; axis < 3; ++axis) {
    if (delta[axis] == 0) continue;
    MultiIndex3 lower = delta;
    lower[axis] -= 1;
    MultiIndex3 shifted = gamma;
    shifted[axis] += 1;
    // f[x_0..x_s] = (f[x_1..x_s] - f[x_0..x_{s-1}]) / (s / k) along the axis.
    return (iterated_difference(f, shifted, lower, k) - iterated_difference(f, gamma, lower, k)) *
           k / delta[axis];
  }
  return f(Point3(gamma[0], gamma[1], gamma[2]) / k);
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("Sigma^k node sets") {
    const Tetrahedron t = Tetrahedron::reference_hat();
    const auto k1 = sigma_k(t, 1);
    REQUIRE(k1.size() == 4);
    std::set<std::array<double, 3>> pts;
    for (const auto& n : k1) pts.insert({n.point[0], n.point[1], n.point[2]});
    for (const auto& v : t.v) CHECK(pts.count({v[0], v[1], v[2]}) == 1);

    const auto k2 = sigma_k(t, 2);
    REQUIRE(k2.size() == 10);
    std::set<std::array<double, 3>> want;
    for (int i = 0; i < 4; ++i) {
      want.insert({t.v[i][0], t.v[i][1], t.v[i][2]});
      for (int j = i + 1; j < 4; ++j) {
        const Point3 m = (t.v[i] + t.v[j]) / 2;
        want.insert({m[0], m[1], m[2]});
      }
    }
    std::set<std::array<double, 3>> got;
    for (const auto& n : k2) got.insert({n.point[0], n.point[1], n.point[2]});
    CHECK(got == want);

    for (int k = 1; k <= 8; ++k) {
      const auto nodes = sigma_k(t, k);
      CHECK(nodes.size() == binomial(k + 3, 3));
      for (const auto& n : nodes) CHECK(n.gamma.order() == k);
    }
    CHECK(sigma_k(t, 4).size() == 35);
    CHECK_THROWS_AS(sigma_k(t, 0), Error);
  }

  TEST_CASE("box enumeration") {
    CHECK(enumerate_boxes(4, {{1, 1, 1}}, Reference::Hat).size() == 4);
    CHECK(enumerate_boxes(4, {{1, 2, 0}}, Reference::Hat).size() == 4);
    const auto seg = enumerate_boxes(1, {{1, 0, 0}}, Reference::Hat);
    REQUIRE(seg.size() == 1);
    CHECK(seg[0].gamma == MultiIndex3{{0, 0, 0}});
    CHECK(seg[0].rank() == 1);
    CHECK(seg[0].corners().size() == 2);
    for (Reference ref : {Reference::Hat, Reference::Tilde})
      for (int k = 1; k <= 5; ++k)
        for (int order = 1; order <= k; ++order)
          for (const auto& d : indices_of_order(order))
            CHECK(enumerate_boxes(k, d, ref).size() == dim_p(k - order));
    CHECK_THROWS_AS(enumerate_boxes(2, {{2, 1, 0}}, Reference::Hat), Error);
    CHECK_THROWS_AS(enumerate_boxes(2, {{0, 0, 0}}, Reference::Hat), Error);
  }

  TEST_CASE("tilde containment matches its half-space description") {
    const Tetrahedron t = Tetrahedron::reference_tilde();
    const int k = 6;
    for (int a = 0; a <= 2 * k; ++a)
      for (int b = 0; b <= 2 * k; ++b)
        for (int c = 0; c <= 2 * k; ++c) {
          // Barycentric test against the vertex list.
          const Point3 p = Point3(a, b, c) / k;
          const Eigen::Vector3d lam = t.jacobian().inverse() * (p - t.v[0]);
          const bool inside = lam.minCoeff() >= -1e-12 && lam.sum() <= 1 + 1e-12;
          CHECK(contains(Reference::Tilde, {{a, b, c}}, k) == inside);
        }
  }

  TEST_CASE("box-mean conditions have full rank") {
    for (Reference ref : {Reference::Hat, Reference::Tilde})
      for (int k = 1; k <= 5; ++k)
        for (int order = 1; order <= k; ++order)
          for (const auto& d : indices_of_order(order)) {
            const BoxConditionRank r = box_condition_rank(k, d, ref);
            CHECK(r.rank == r.dimension);
          }
  }

  TEST_CASE("difference stencil for delta = (2,1,1)") {
    const auto s = difference_stencil({{2, 1, 1}});
    REQUIRE(s.size() == 12);
    std::map<MultiIndex3, std::int64_t> got;
    for (const auto& t : s) got[t.eta] = t.coeff;
    const std::map<MultiIndex3, std::int64_t> want{
        {{{2, 1, 1}}, 1},  {{{1, 1, 1}}, -2}, {{{0, 1, 1}}, 1},  {{{2, 0, 1}}, -1},
        {{{1, 0, 1}}, 2},  {{{0, 0, 1}}, -1}, {{{2, 1, 0}}, -1}, {{{1, 1, 0}}, 2},
        {{{0, 1, 0}}, -1}, {{{2, 0, 0}}, 1},  {{{1, 0, 0}}, -2}, {{{0, 0, 0}}, 1}};
    CHECK(got == want);

    // Leading factor k^4 / 2.
    NodeValues unit;
    for (const auto& t : s) unit[t.eta] = t.eta == MultiIndex3{{2, 1, 1}} ? 1.0 : 0.0;
    CHECK(difference_quotient(unit, {{0, 0, 0}}, {{2, 1, 1}}, 4) == doctest::Approx(256.0 / 2));
  }

  TEST_CASE("difference quotients") {
    SUBCASE("constants vanish") {
      for (const auto& d : indices_up_to(3)) {
        if (d.order() == 0) continue;
        CHECK(difference_quotient([](const Point3&) { return 7.0; }, {{0, 0, 0}}, d, 3) == doctest::Approx(0.0));
      }
    }
    SUBCASE("f = x along a segment") {
      auto fx = [](const Point3& p) { return p[0]; };
      CHECK(difference_quotient(fx, {{0, 0, 0}}, {{1, 0, 0}}, 4) == doctest::Approx(1.0));
      for (int s = 2; s <= 4; ++s)
        CHECK(std::abs(difference_quotient(fx, {{0, 0, 0}}, {{s, 0, 0}}, 4)) < 1e-12);
    }
    SUBCASE("matches iterated 1D differences") {
      for (const auto& d : indices_up_to(4)) {
        if (d.order() == 0) continue;
        const double a = difference_quotient(f_exp, {{0, 0, 0}}, d, 4);
        const double b = iterated_difference(f_exp, {{0, 0, 0}}, d, 4);
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
      }
    }
    SUBCASE("linearity and annihilation of lower-degree polynomials") {
      auto g = [](const Point3& p) { return std::sin(p[0] - 2 * p[1]) + p[2]; };
      const MultiIndex3 d{{1, 1, 1}};
      const double lhs = difference_quotient([&](const Point3& p) { return 2 * f_exp(p) - 3 * g(p); },
                                             {{0, 1, 0}}, d, 4);
      const double rhs = 2 * difference_quotient(f_exp, {{0, 1, 0}}, d, 4) -
                         3 * difference_quotient(g, {{0, 1, 0}}, d, 4);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      auto quad = [](const Point3& p) { return 1 + p[0] * p[1] - 4 * p[2] * p[2] + p[0] * p[2]; };
      CHECK(std::abs(difference_quotient(quad, {{0, 0, 0}}, d, 4)) < 1e-10);
    }
    SUBCASE("missing node") {
      NodeValues partial{{{{0, 0, 0}}, 1.0}};
      CHECK_THROWS_AS(difference_quotient(partial, {{0, 0, 0}}, {{1, 0, 0}}, 2), Error);
    }
  }

  TEST_CASE("box integrals agree with difference quotients") {
    SUBCASE("polynomial of degree |delta|") {
      const ScalarField f = expression_field(Expression::parse("3*x^2*y - x*y*z + 2*z^3 + x"));
      for (const auto& d : indices_of_order(3)) {
        for (const auto& box : enumerate_boxes(4, d, Reference::Hat)) {
          const double dq = difference_quotient([&](const Point3& p) { return f(p); }, box.gamma, d, 4);
          CHECK(box_integral(f, box) == doctest::Approx(dq).epsilon(1e-12));
        }
      }
    }
    SUBCASE("exp(x + y + z), k = 4, delta = (1,1,1)") {
      const ScalarField f = expression_field(Expression::parse("exp(x + y + z)"));
      for (const auto& box : enumerate_boxes(4, {{1, 1, 1}}, Reference::Hat)) {
        const double dq = difference_quotient(f_exp, box.gamma, {{1, 1, 1}}, 4);
        CHECK(std::abs(box_integral(f, box, 8) - dq) < 1e-8);
      }
    }
    SUBCASE("vanishing derivative") {
      const ScalarField f = expression_field(Expression::parse("x^2 + y"));
      const Box box{{{0, 0, 0}}, {{0, 0, 2}}, 3};
      CHECK(box_integral(f, box) == doctest::Approx(0.0));
    }
  }

  TEST_CASE("residual quotients vanish") {
    const Tetrahedron hat = Tetrahedron::reference_hat();
    const ScalarField v = expression_field(Expression::parse("sin(x)*cos(y)"));
    SUBCASE("k = 1 unit offsets") {
      for (const auto& d : indices_of_order(1))
        for (const auto& box : enumerate_boxes(1, d, Reference::Hat)) {
          const ScalarField u = residual(v, hat, 1);
          CHECK(std::abs(difference_quotient([&](const Point3& p) { return u(p); }, box.gamma, d, 1)) < 1e-14);
        }
    }
    SUBCASE("sin(x)cos(y), k = 3") {
      const ResidualQuotients q = residual_quotients_vanish(v, hat, 3, Reference::Hat);
      CHECK(q.quotients > 0);
      CHECK(q.max_abs < 1e-9);
    }
    SUBCASE("polynomials in P_k") {
      const ScalarField p = expression_field(Expression::parse("1 + x*y - z^2 + x"));
      CHECK(residual_quotients_vanish(p, Tetrahedron::reference_tilde(), 2, Reference::Tilde).max_abs < 1e-12);
    }
  }
}
