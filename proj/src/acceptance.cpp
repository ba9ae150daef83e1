#include "anisotetra/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include "anisotetra/expression.hpp"
#include "anisotetra/interp.hpp"
#include "anisotetra/lattice.hpp"
#include "anisotetra/quad.hpp"
#include "anisotetra/report.hpp"
#include "anisotetra/verify.hpp"

namespace anisotetra {

namespace {

std::size_t scaled(std::size_t n, const AcceptanceOptions& o) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * o.scale)));
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string joined(const std::ostringstream& parts) {
  std::string s = parts.str();
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "; ") == 0) s.resize(s.size() - 2);
  return s;
}

CriterionResult equivalence(const AcceptanceOptions& o) {
  TetraGenSpec gen;
  gen.family = Family::Mixed;
  gen.seed = o.seed;
  const EquivalenceReport r = equivalence_sample(scaled(100000, o), gen);
  CriterionResult c;
  c.passed = r.violations == 0;
  c.detail = std::to_string(r.n) + " samples, " + std::to_string(r.violations) +
             " violations, R_T/H_T in [" + fmt(r.min_ratio) + ", " + fmt(r.max_ratio) + "]";
  return c;
}

CriterionResult trig(const AcceptanceOptions& o) {
  TetraGenSpec gen;
  gen.family = Family::Mixed;
  gen.seed = o.seed + 1;
  const std::size_t n = scaled(10000, o);
  std::vector<double> worst(n);
  parallel_for(n, [&](std::size_t i) { worst[i] = verify_trig_identities(generate_one(gen, i)).max(); });
  double mx = 0;
  for (double w : worst) mx = std::max(mx, w);
  CriterionResult c;
  c.passed = mx < 1e-9;
  c.detail = std::to_string(n) + " samples, max residual " + fmt(mx);
  return c;
}

CriterionResult standard(const AcceptanceOptions& o) {
  TetraGenSpec gen;
  gen.family = Family::Mixed;
  gen.seed = o.seed + 2;
  const std::size_t n = scaled(10000, o);
  struct Cell {
    double param = 0, order = 0, map = 0, norms = 0;
  };
  std::vector<Cell> cells(n);
  parallel_for(n, [&](std::size_t i) {
    const Tetrahedron t = generate_one(gen, i);
    const StandardPosition sp = standard_position(t);
    const TransformMatrices m = matrices(sp);
    const auto [a1, a2, a3] = sp.alpha;
    Cell& c = cells[i];
    c.param = std::max({std::abs(sp.s1 * sp.s1 + sp.t1 * sp.t1 - 1),
                        std::abs(sp.s21 * sp.s21 + sp.s22 * sp.s22 + sp.t2 * sp.t2 - 1)});
    // Sign and ordering constraints, as violations (0 when satisfied).
    c.order = std::max({0.0, -sp.s1, -sp.t1, -sp.t2, a2 * sp.s1 - a1 / 2, a3 * sp.s21 - a1 / 2});
    const double hT = t.diameter();
    const Tetrahedron ref = reference_for(sp.kind);
    const Tetrahedron r = sp.relabelled(t);
    const auto verts = sp.vertices();
    for (std::size_t v = 0; v < 4; ++v) {
      const Point3 image = m.A * m.D * ref.v[v];
      c.map = std::max({c.map, (image - verts[v]).norm() / hT,
                        (sp.motion.apply(r.v[v]) - verts[v]).norm() / hT});
    }
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    c.norms = std::max({rel(m.norm_X, spectral_norm(m.X)), rel(m.norm_X_inv, spectral_norm(m.X.inverse())),
                        rel(m.norm_Y, spectral_norm(m.Y)), rel(m.norm_Y_inv, spectral_norm(m.Y.inverse()))});
  });
  Cell w;
  for (const auto& c : cells) {
    w.param = std::max(w.param, c.param);
    w.order = std::max(w.order, c.order);
    w.map = std::max(w.map, c.map);
    w.norms = std::max(w.norms, c.norms);
  }
  CriterionResult c;
  c.passed = w.param < 1e-10 && w.order <= 1e-10 && w.map < 1e-10 && w.norms < 1e-10;
  c.detail = std::to_string(n) + " samples, param " + fmt(w.param) + ", order " + fmt(w.order) +
             ", A D map " + fmt(w.map) + ", norms " + fmt(w.norms);
  return c;
}

CriterionResult reproduction(const AcceptanceOptions& o) {
  const std::size_t per_k = scaled(100, o);
  double worst = 0;
  for (int k = 1; k <= 4; ++k) {
    std::vector<double> rel(per_k);
    parallel_for(per_k, [&](std::size_t i) {
      TetraGenSpec gen;
      gen.family = i % 2 ? Family::Sliver : Family::Needle;
      gen.eps = 1.0;
      gen.eps_min = 1e-4;
      gen.seed = o.seed + 3 + static_cast<std::uint64_t>(k);
      const Tetrahedron t = generate_one(gen, i);
      std::mt19937_64 rng = sample_rng(o.seed + 100 + static_cast<std::uint64_t>(k), i);
      const Polynomial3 q = random_polynomial(k, rng);
      const Interpolant I = interpolate(q, t, k);
      const ScalarField qf = ScalarField::from_polynomial(q);
      const ScalarField diff = qf - I.poly;
      rel[i] = sup_abs(diff, t, 20, false) / sup_abs(qf, t, 20, false);
    });
    for (double r : rel) worst = std::max(worst, r);
  }
  CriterionResult c;
  c.passed = worst < 1e-9;
  c.detail = std::to_string(4 * per_k) + " polynomials, max |q - Iq| / |q| = " + fmt(worst);
  return c;
}

CriterionResult quotients(const AcceptanceOptions& o) {
  const bool stencil_ok = matches_reference_expansion(difference_stencil({{2, 1, 1}}));

  double worst = 0;
  std::size_t evaluated = 0;
  const std::size_t nf = std::min<std::size_t>(20, scaled(20, o));
  for (Reference ref : {Reference::Hat, Reference::Tilde}) {
    const Tetrahedron t = ref == Reference::Hat ? Tetrahedron::reference_hat() : Tetrahedron::reference_tilde();
    for (int k = 1; k <= 4; ++k) {
      const auto corpus = field_corpus(k, t, o.seed);
      for (std::size_t f = 0; f < nf; ++f) {
        const ResidualQuotients q = residual_quotients_vanish(corpus[f], t, k, ref);
        worst = std::max(worst, q.max_abs / std::max(1.0, q.scale));
        evaluated += q.quotients;
      }
    }
  }

  bool counts_ok = true;
  for (Reference ref : {Reference::Hat, Reference::Tilde})
    for (int k = 1; k <= 5; ++k)
      for (int order = 1; order <= k; ++order)
        for (const auto& d : indices_of_order(order))
          counts_ok = counts_ok && enumerate_boxes(k, d, ref).size() == dim_p(k - order);

  CriterionResult c;
  c.passed = stencil_ok && worst < 1e-9 && counts_ok;
  c.detail = std::string("stencil ") + (stencil_ok ? "exact" : "MISMATCH") + ", " +
             std::to_string(evaluated) + " residual quotients max " + fmt(worst) + ", box counts " +
             (counts_ok ? "match" : "MISMATCH");
  return c;
}

CriterionResult squeeze(const AcceptanceOptions&) {
  const AlphaPattern pattern = parse_alpha_pattern("1,eps,eps");
  std::ostringstream detail;
  bool ok = true;
  for (auto [m, p] : {std::pair{0, 2.0}, std::pair{1, 3.0}}) {
    const SweepResult s = squeeze_sweep(1, m, p, pattern, 11);
    const bool pass = s.variation < 4.0 && s.slope <= 0.1;
    ok = ok && pass;
    detail << "m=" << m << " p=" << p << ": variation " << fmt(s.variation) << ", slope "
           << fmt(s.slope) << (pass ? "" : " (fail)") << "; ";
  }
  CriterionResult c;
  c.passed = ok;
  c.detail = joined(detail);
  return c;
}

CriterionResult convergence(const AcceptanceOptions&) {
  const ScalarField v = expression_field(Expression::parse("sin(x + 2*y + 3*z)"));
  const Tetrahedron t0{{Point3(0.1, 0.2, 0.3), Point3(0.6, 0.25, 0.3), Point3(0.2, 0.45, 0.35),
                        Point3(0.15, 0.3, 0.7)}};
  std::ostringstream detail;
  bool ok = true;
  for (auto [k, m] : {std::pair{1, 0}, std::pair{2, 0}, std::pair{2, 1}, std::pair{3, 1}}) {
    const ConvergenceResult r = convergence_study(v, t0, k, m, 2.0, 5);
    const bool pass = std::abs(r.final_order - r.expected_order) <= 0.1;
    ok = ok && pass;
    detail << "(" << k << "," << m << ") " << fmt(r.final_order) << "/" << r.expected_order
           << (pass ? "" : " (fail)") << "; ";
  }
  CriterionResult c;
  c.passed = ok;
  c.detail = joined(detail);
  return c;
}

CriterionResult mac(const AcceptanceOptions& o) {
  const double pi = std::numbers::pi;
  std::ostringstream detail;
  bool ok = true;
  const std::size_t n = scaled(10000, o);
  for (double g : {pi / 3 + 0.01, pi / 2, 2 * pi / 3, 0.9 * pi}) {
    const MacReport r = mac_experiment(n, g, o.seed);
    ok = ok && r.passed();
    detail << "gamma " << fmt(g) << ": fwd ";
    if (r.forward.generation_failed) {
      detail << "no samples (" << r.forward.failure << ")";
      // The regular tetrahedron minimizes the largest face or dihedral angle.
      if (g < std::acos(1.0 / 3))
        detail << " [every tetrahedron has an angle >= arccos(1/3) = " << fmt(std::acos(1.0 / 3)) << "]";
    } else
      detail << r.forward.violations << "/" << r.forward.checked << " viol, max H/h "
             << fmt(r.forward.max_value) << " <= " << fmt(r.forward_bound_H);
    detail << ", rev ";
    if (r.reverse.generation_failed)
      detail << "no samples (" << r.reverse.failure << ")";
    else
      detail << r.reverse.violations << "/" << r.reverse.checked << " viol";
    detail << "; ";
  }
  CriterionResult c;
  c.passed = ok;
  c.detail = joined(detail);
  return c;
}

CriterionResult quadrature(const AcceptanceOptions&) {
  double worst = 0;
  for (int d = 1; d <= 12; ++d) {
    const QuadratureRule& rule = rule_for_degree(d);
    for (const auto& g : indices_up_to(d)) {
      const Polynomial3 mono = Polynomial3::monomial(g);
      double sum = 0;
      for (std::size_t i = 0; i < rule.size(); ++i)
        sum += rule.weights[i] * mono(rule.point(i, Tetrahedron::reference_hat()));
      const double exact = simplex_monomial_integral(g);
      worst = std::max(worst, std::abs(sum / 6.0 - exact) / exact);
    }
  }
  CriterionResult c;
  c.passed = worst < 1e-12;
  c.detail = "degrees 1..12, max relative error " + fmt(worst);
  return c;
}

CriterionResult determinism(const AcceptanceOptions& o) {
  const AlphaPattern pattern = parse_alpha_pattern("1,eps,eps");
  const unsigned saved = worker_threads();
  set_worker_threads(1);
  const std::string serial = sweep_csv(squeeze_sweep(1, 0, 2.0, pattern, 4, TetraType::Type1, o.seed));
  set_worker_threads(4);
  const std::string parallel = sweep_csv(squeeze_sweep(1, 0, 2.0, pattern, 4, TetraType::Type1, o.seed));
  set_worker_threads(saved);
  CriterionResult c;
  c.passed = serial == parallel;
  c.detail = c.passed ? "serial and 4-worker CSV identical (" + std::to_string(serial.size()) + " bytes)"
                      : "CSV differs between runs";
  return c;
}

const char* kNames[kCriteria] = {
    "R_T / H_T equivalence",      "trigonometric identities", "standard position",
    "interpolation reproduction", "difference quotients",     "anisotropy robustness",
    "convergence orders",        "maximum angle condition",  "quadrature exactness",
    "determinism",
};

}  // namespace

bool matches_reference_expansion(const std::vector<StencilTerm>& stencil) {
  // f^4[x_0, Delta^(2,1,1) x_0] in units of k^4 / 2.
  static const std::map<MultiIndex3, std::int64_t> expected{
      {{{2, 1, 1}}, 1},  {{{1, 1, 1}}, -2}, {{{0, 1, 1}}, 1},  {{{2, 0, 1}}, -1},
      {{{1, 0, 1}}, 2},  {{{0, 0, 1}}, -1}, {{{2, 1, 0}}, -1}, {{{1, 1, 0}}, 2},
      {{{0, 1, 0}}, -1}, {{{2, 0, 0}}, 1},  {{{1, 0, 0}}, -2}, {{{0, 0, 0}}, 1}};
  std::map<MultiIndex3, std::int64_t> got;
  for (const auto& term : stencil) got[term.eta] = term.coeff;
  return got == expected && MultiIndex3{{2, 1, 1}}.factorial() == 2;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  static const Fn fns[kCriteria] = {equivalence, trig,        standard, reproduction, quotients,
                                    squeeze, convergence, mac,      quadrature,   determinism};
  if (id < 1 || id > kCriteria) throw Error(ErrorKind::ParseError, "no acceptance criterion " + std::to_string(id));
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = fns[id - 1](opts);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = id;
  r.name = kNames[id - 1];
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) {
    out.push_back(run_criterion(id, opts));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d  %-27s (%.1f s)  ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds);
  return head + r.detail;
}

}  // namespace anisotetra
