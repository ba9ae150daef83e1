#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "anisotetra/error.hpp"
#include "anisotetra/expression.hpp"
#include "anisotetra/lattice.hpp"
#include "anisotetra/report.hpp"
#include "anisotetra/verify.hpp"
#include "test_support.hpp"

using namespace anisotetra;

TEST_SUITE("verify") {
  TEST_CASE("generators are deterministic and order independent") {
    for (Family f : {Family::UniformBall, Family::Needle, Family::Sliver, Family::Mixed}) {
      TetraGenSpec gen;
      gen.family = f;
      gen.seed = 42;
      const auto a = generate(gen, 64);
      set_worker_threads(4);
      const auto b = generate(gen, 64);
      set_worker_threads(0);
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].v == b[i].v);
        CHECK(generate_one(gen, i).v == a[i].v);
      }
      CHECK(parse_family(to_string(f)) == f);
    }
    CHECK_THROWS_AS(parse_family("blob"), Error);
  }

  TEST_CASE("parallel_for visits each index once and reports the first failure") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(1000, [&](std::size_t i) { ++hits[i]; }, 4);
    for (auto& h : hits) CHECK(h.load() == 1);
    try {
      parallel_for(
          100, [](std::size_t i) {
            if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
          },
          4);
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "17");
    }
  }

  TEST_CASE("rejection sampling reports exhaustion") {
    TetraGenSpec gen;
    gen.family = Family::MacConstrained;
    gen.gamma_max = std::numbers::pi / 3 + 0.01;
    gen.max_retries = 200;
    try {
      generate_one(gen, 0);
      FAIL("expected GenerationFailure");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::GenerationFailure);
      CHECK(std::string(e.what()).find("accepted 0 of 200") != std::string::npos);
    }
  }

  TEST_CASE("error ratio") {
    const Tetrahedron t = Tetrahedron::reference_hat();
    SUBCASE("polynomials in P_k are reproduced") {
      const ScalarField v = expression_field(Expression::parse("1 + x - 2*y*z + z^2"));
      const ErrorRatioResult r = error_ratio(v, t, 2, 0, 2.0);
      CHECK(r.error < 1e-12);
      CHECK(r.ratio < 1e-10);
    }
    SUBCASE("x^2, k = 1, m = 0, p = 2") {
      const ScalarField v = ScalarField::from_polynomial(Polynomial3::monomial({{2, 0, 0}}));
      const ErrorRatioResult r = error_ratio(v, t, 1, 0, 2.0);
      // u = x^2 - x; the integral of x^n over the simplex is n! / (n + 3)!.
      const double integral = 24.0 / 5040 - 2 * 6.0 / 720 + 2.0 / 120;
      CHECK(r.error == doctest::Approx(std::sqrt(integral)).epsilon(1e-12));
      CHECK(r.seminorm_hi == doctest::Approx(std::sqrt(4.0 / 6)).epsilon(1e-12));
      CHECK(std::isfinite(r.ratio));
      std::mt19937_64 rng(5);
      for (int trial = 0; trial < 10; ++trial) {
        const Matrix3 R = testing::random_rotation(rng);
        const Point3 shift(0.3 * trial, -1, 2);
        const Tetrahedron m = testing::moved(t, R, shift);
        const ErrorRatioResult q = error_ratio(v.pulled_through(shift, R), m, 1, 0, 2.0);
        CHECK(q.ratio == doctest::Approx(r.ratio).epsilon(1e-8));
      }
    }
    SUBCASE("inadmissible exponent") {
      const ScalarField v = expression_field(Expression::parse("x^2"));
      try {
        error_ratio(v, t, 1, 1, 2.0);
        FAIL("expected InadmissiblePC");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InadmissiblePC);
        CHECK(std::string(e.what()) == "p must exceed 2 when k = m");
      }
    }
  }

  TEST_CASE("needle ratios stay bounded") {
    const ScalarField v = expression_field(Expression::parse("sin(x + 2*y + 3*z)"));
    const double at_one = error_ratio(v, needle(1.0), 1, 1, 3.0).ratio;
    for (double eps = 0.5; eps > 1e-4; eps /= 4) {
      const ErrorRatioResult r = error_ratio(v, needle(eps), 1, 1, 3.0);
      CHECK(r.ratio <= 10 * at_one);
    }
  }

  TEST_CASE("the chain of matrix bounds") {
    TetraGenSpec gen;
    gen.family = Family::Mixed;
    gen.seed = 77;
    for (std::size_t s = 0; s < 300; ++s) {
      const Tetrahedron t = generate_one(gen, s);
      for (auto [k, m] : {std::pair{1, 0}, std::pair{1, 1}, std::pair{3, 1}}) {
        const MatrixBoundChain c = matrix_bound_chain(t, k, m);
        CHECK(c.holds);
        CHECK(c.norm_A <= 2 * (1 + 1e-10));
      }
    }
  }

  TEST_CASE("squeeze sweep") {
    const AlphaPattern pattern = parse_alpha_pattern("1,eps,eps");
    CHECK(pattern.at(0) == std::array<double, 3>{1, 1, 1});
    CHECK(pattern.at(3) == std::array<double, 3>{1, 0.125, 0.125});
    CHECK_THROWS_AS(parse_alpha_pattern("1,eps"), Error);
    CHECK_THROWS_AS(parse_alpha_pattern("1,foo,eps"), Error);

    const SweepResult s = squeeze_sweep(1, 0, 2.0, pattern, 4);
    REQUIRE(s.rows.size() == 4);
    // Level 0 is the reference element itself.
    const ErrorRatioResult ref = [] {
      const Tetrahedron t = Tetrahedron::reference_hat();
      double best = 0;
      ErrorRatioResult out;
      for (const auto& f : field_corpus(1, t)) {
        const ErrorRatioResult r = error_ratio(f, t, 1, 0, 2.0);
        if (!r.indeterminate && r.ratio > best) {
          best = r.ratio;
          out = r;
        }
      }
      return out;
    }();
    CHECK(s.rows[0].max_ratio == doctest::Approx(ref.ratio).epsilon(1e-12));
    CHECK(s.variation >= 1.0);
    CHECK(sweep_csv(s) == sweep_csv(squeeze_sweep(1, 0, 2.0, pattern, 4)));
    CHECK(fit_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
  }

  TEST_CASE("field corpus") {
    const Tetrahedron t{{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0.3, 0.2, 0), Point3(0.1, 0.1, 0.3)}};
    for (int k = 1; k <= 3; ++k) {
      const auto corpus = field_corpus(k, t);
      REQUIRE(corpus.size() == 20);
      for (const auto& f : corpus) CHECK(f.order() >= k + 1);
      // The last field vanishes on Sigma^k(t).
      for (const auto& n : sigma_k(t, k)) CHECK(std::abs(corpus.back()(n.point)) < 1e-12);
    }
  }

  TEST_CASE("R_T / H_T sampling") {
    TetraGenSpec gen;
    gen.family = Family::Mixed;
    gen.seed = 2;
    const EquivalenceReport r = equivalence_sample(3000, gen);
    CHECK(r.violations == 0);
    CHECK(r.min_ratio >= 0.5);
    CHECK(r.max_ratio <= 2.0);
  }

  TEST_CASE("maximum angle experiment") {
    const MacReport r = mac_experiment(300, std::numbers::pi / 2, 7);
    CHECK(r.passed());
    CHECK(r.forward.checked == 300);
    CHECK(r.forward.max_value <= r.forward_bound_H);
    CHECK(r.forward_bound_R == doctest::Approx(2 * r.forward_bound_H));
    CHECK(r.max_R_forward <= r.forward_bound_R);
    CHECK(r.reverse.violations == 0);
    CHECK(r.reverse.max_value <= r.converse_gamma + 1e-12);

    const MacReport infeasible = mac_experiment(5, std::numbers::pi / 3 + 0.01, 7);
    CHECK(infeasible.forward.generation_failed);
    CHECK_FALSE(infeasible.passed());
  }

  TEST_CASE("convergence study") {
    const ScalarField v = expression_field(Expression::parse("exp(x - y + 2*z)"));
    const Tetrahedron t0{{Point3(0.1, 0.2, 0.3), Point3(0.6, 0.25, 0.3), Point3(0.2, 0.45, 0.35),
                          Point3(0.15, 0.3, 0.7)}};
    const ConvergenceResult r = convergence_study(v, t0, 1, 0, 2.0, 5);
    CHECK(r.expected_order == 2.0);
    CHECK(r.levels.size() == 5);
    CHECK(std::abs(r.final_order - 2.0) <= 0.1);
    const ConvergenceResult exact =
        convergence_study(expression_field(Expression::parse("x + 2*y")), t0, 1, 0, 2.0, 3);
    CHECK(exact.exact);
  }

  TEST_CASE("report serialization") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(number(std::nan("")) == Json("nan"));
    const GeometryReport g = angles(Tetrahedron::reference_hat());
    const Json j = to_json(g);
    const Json back = Json::parse(j.dump());
    CHECK(back == j);
    CHECK(back["R_T"].get<double>() == g.R_T);
    const Json report = make_report("analyze", Json::object(), j, Json::array(), 3);
    CHECK(report["schema_version"] == kSchemaVersion);
    CHECK(report["seed"] == 3);
  }
}
