#include "anisotetra/quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace anisotetra {

namespace {

GaussRule1D build_gauss(int n) {
  GaussRule1D r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map [-1, 1] onto [0, 1]; nodes ascending.
    const auto idx = static_cast<std::size_t>(n - 1 - i);
    r.nodes[idx] = 0.5 * (1.0 + x);
    r.weights[idx] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

QuadratureRule build_rule(int d) {
  const int n = (d + 4) / 2;  // ceil((d + 3) / 2)
  const GaussRule1D& g = gauss_legendre(n);
  QuadratureRule rule;
  rule.exactness = d;
  rule.nodes.reserve(static_cast<std::size_t>(n * n * n));
  rule.weights.reserve(static_cast<std::size_t>(n * n * n));
  // x = u, y = (1 - u) v, z = (1 - u)(1 - v) w; Jacobian (1 - u)^2 (1 - v).
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const double u = g.nodes[i], v = g.nodes[j], w = g.nodes[l];
        const double x = u, y = (1 - u) * v, z = (1 - u) * (1 - v) * w;
        rule.nodes.push_back({1.0 - x - y - z, x, y, z});
        rule.weights.push_back(6.0 * g.weights[i] * g.weights[j] * g.weights[l] * (1 - u) *
                               (1 - u) * (1 - v));
      }
  return rule;
}

bool is_even_integer(double p) {
  return std::isfinite(p) && p == std::floor(p) && std::fmod(p, 2.0) == 0.0;
}

Point3 barycentric_tail(const Tetrahedron& t, const Matrix3& jinv, const Point3& x) {
  return jinv * (x - t.v[0]);
}

bool inside(const Point3& lam, double slack) {
  return lam.minCoeff() >= -slack && lam.sum() <= 1.0 + slack;
}

// Newton iteration for a stationary point of g restricted to the affine hull
// of the vertices listed in `free`, starting at x.
double polish(const Polynomial3& g, const std::array<Polynomial3, 3>& grad,
              const std::array<std::array<Polynomial3, 3>, 3>& hess, const Tetrahedron& t,
              const Matrix3& jinv, const std::vector<int>& free, Point3 x) {
  double best = std::abs(g(x));
  if (free.size() < 2) return best;
  const auto dim = static_cast<Eigen::Index>(free.size() - 1);
  Eigen::MatrixXd E(3, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    E.col(c) = t.v[static_cast<std::size_t>(free[static_cast<std::size_t>(c) + 1])] -
               t.v[static_cast<std::size_t>(free[0])];
  for (int it = 0; it < 12; ++it) {
    Eigen::Vector3d gr;
    Matrix3 H;
    for (int a = 0; a < 3; ++a) {
      gr[a] = grad[static_cast<std::size_t>(a)](x);
      for (int b = 0; b < 3; ++b) H(a, b) = hess[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)](x);
    }
    const Eigen::MatrixXd Hr = E.transpose() * H * E;
    const Eigen::VectorXd gr_r = E.transpose() * gr;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Hr);
    if (!lu.isInvertible()) break;
    const Eigen::VectorXd s = -lu.solve(gr_r);
    const Point3 next = x + E * s;
    if (!inside(barycentric_tail(t, jinv, next), 1e-12)) break;
    x = next;
    best = std::max(best, std::abs(g(x)));
    if ((E * s).norm() <= 1e-15 * (1.0 + x.norm())) break;
  }
  return best;
}

}  // namespace

const GaussRule1D& gauss_legendre(int n) {
  if (n < 1 || n > 64) {
    std::ostringstream os;
    os << "Gauss-Legendre rule with " << n << " points not available (1..64)";
    throw Error(ErrorKind::UnsupportedDegree, os.str());
  }
  static std::array<std::once_flag, 65> once;
  static std::array<GaussRule1D, 65> cache;
  const auto i = static_cast<std::size_t>(n);
  std::call_once(once[i], [i, n] { cache[i] = build_gauss(n); });
  return cache[i];
}

const QuadratureRule& rule_for_degree(int d) {
  if (d < 1 || d > kMaxQuadratureDegree) {
    std::ostringstream os;
    os << "no quadrature rule for degree " << d << " (supported: 1.." << kMaxQuadratureDegree << ")";
    throw Error(ErrorKind::UnsupportedDegree, os.str());
  }
  static std::array<std::once_flag, kMaxQuadratureDegree + 1> once;
  static std::array<QuadratureRule, kMaxQuadratureDegree + 1> cache;
  const auto i = static_cast<std::size_t>(d);
  std::call_once(once[i], [i, d] { cache[i] = build_rule(d); });
  return cache[i];
}

double simplex_monomial_integral(const MultiIndex3& g) {
  // a! b! c! / (n + 3)!, accumulated as a product of ratios to stay in range.
  double r = 1.0;
  int denom = 3;
  for (int axis = 0; axis < 3; ++axis)
    for (int i = 1; i <= g[axis]; ++i) r *= static_cast<double>(i) / ++denom;
  return r / 6.0;
}

double integrate(const std::function<double(const Point3&)>& f, const Tetrahedron& t,
                 const QuadratureRule& rule) {
  std::vector<double> terms(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) terms[i] = rule.weights[i] * f(rule.point(i, t));
  return std::abs(t.signed_volume()) * pairwise_sum(terms.data(), terms.size());
}

std::array<Tetrahedron, 8> refine(const Tetrahedron& t) {
  const auto& v = t.v;
  auto mid = [&v](int a, int b) -> Point3 { return 0.5 * (v[a] + v[b]); };
  const Point3 m01 = mid(0, 1), m02 = mid(0, 2), m03 = mid(0, 3), m12 = mid(1, 2),
               m13 = mid(1, 3), m23 = mid(2, 3);
  return {{
      {{v[0], m01, m02, m03}},
      {{m01, v[1], m12, m13}},
      {{m02, m12, v[2], m23}},
      {{m03, m13, m23, v[3]}},
      // Inner octahedron split along the m02-m13 diagonal.
      {{m01, m02, m03, m13}},
      {{m01, m02, m12, m13}},
      {{m02, m03, m13, m23}},
      {{m02, m12, m13, m23}},
  }};
}

Admissibility validate_p(int k, int m, double p) {
  Admissibility a;
  if (k < 1 || m < 0 || m > k) {
    a.admissible = false;
    a.reason = "need k >= 1 and 0 <= m <= k";
    return a;
  }
  if (std::isnan(p) || p < 1.0) {
    a.admissible = false;
    a.reason = "p must be at least 1";
    return a;
  }
  if (k == m) {
    if (!(p > 2.0)) {
      a.admissible = false;
      a.reason = "p must exceed 2 when k = m";
    }
    return a;
  }
  if (k == 1 && m == 0) {
    if (!(p > 1.5)) {
      a.admissible = false;
      a.reason = "p must exceed 3/2 when k = 1 and m = 0";
    }
    return a;
  }
  return a;
}

double parse_p(const std::string& text) {
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "inf" || s == "infinity") return kInfinity;
  std::size_t used = 0;
  double p = 0;
  try {
    p = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || used == 0 || !std::isfinite(p) || p < 1.0)
    throw Error(ErrorKind::ParseError, "p: expected a number >= 1 or 'inf', got '" + text + "'");
  return p;
}

std::string format_p(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << p;
  return os.str();
}

double sup_abs(const ScalarField& g, const Tetrahedron& t, int n, bool polish_max) {
  n = std::max(n, 1);
  const Matrix3 jinv = t.jacobian().inverse();
  struct Sample {
    double value;
    std::array<int, 4> bary;
  };
  std::vector<Sample> samples;
  samples.reserve(dim_p(n));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j)
      for (int l = 0; i + j + l <= n; ++l) {
        const std::array<int, 4> b{n - i - j - l, i, j, l};
        const Point3 x = (b[0] * t.v[0] + b[1] * t.v[1] + b[2] * t.v[2] + b[3] * t.v[3]) / n;
        samples.push_back({std::abs(g(x)), b});
      }
  const auto top = std::min<std::size_t>(samples.size(), 16);
  std::partial_sort(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(top), samples.end(),
                    [](const Sample& a, const Sample& b) {
                      return a.value > b.value || (a.value == b.value && a.bary < b.bary);
                    });
  double best = samples.front().value;
  const Polynomial3* poly = g.polynomial();
  if (!polish_max || poly == nullptr || poly->effective_degree() < 2) return best;

  std::array<Polynomial3, 3> grad;
  std::array<std::array<Polynomial3, 3>, 3> hess;
  for (int a = 0; a < 3; ++a) {
    grad[static_cast<std::size_t>(a)] = poly->partial(a);
    for (int b = 0; b < 3; ++b)
      hess[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = grad[static_cast<std::size_t>(a)].partial(b);
  }
  for (std::size_t s = 0; s < top; ++s) {
    const auto& b = samples[s].bary;
    std::vector<int> free;
    for (int v = 0; v < 4; ++v)
      if (b[static_cast<std::size_t>(v)] > 0) free.push_back(v);
    const Point3 x = (b[0] * t.v[0] + b[1] * t.v[1] + b[2] * t.v[2] + b[3] * t.v[3]) / n;
    best = std::max(best, polish(*poly, grad, hess, t, jinv, free, x));
  }
  return best;
}

namespace {

struct TermIntegral {
  double value = 0;
  bool warning = false;
};

TermIntegral integrate_power(const ScalarField& g, const Tetrahedron& t, double p, int degree,
                             bool check) {
  auto integrand = [&g, p](const Point3& x) {
    const double a = std::abs(g(x));
    return p == 2.0 ? a * a : std::pow(a, p);
  };
  const QuadratureRule& rule = rule_for_degree(degree);
  const double coarse = integrate(integrand, t, rule);
  if (!check) return {coarse, false};
  double fine = 0.0;
  for (const auto& child : refine(t)) fine += integrate(integrand, child, rule);
  const double scale = std::max(std::abs(fine), std::abs(coarse));
  const bool warn = scale > 0 && std::abs(fine - coarse) > 1e-6 * scale;
  return {fine, warn};
}

}  // namespace

SeminormResult seminorm(const ScalarField& u, const Tetrahedron& t, const SeminormSpec& spec) {
  if (spec.validate_k > 0) {
    const Admissibility a = validate_p(spec.validate_k, spec.m, spec.p);
    if (!a.admissible) throw Error(ErrorKind::InadmissiblePC, a.reason);
  }
  if (spec.m < 0) throw Error(ErrorKind::InvalidDegree, "seminorm order m must be >= 0");
  if (std::isnan(spec.p) || spec.p < 1.0) throw Error(ErrorKind::InadmissiblePC, "p must be at least 1");
  require_nondegenerate(t);

  SeminormResult result;
  result.approximate = u.approximate();
  const auto gammas = indices_of_order(spec.m);

  if (std::isinf(spec.p)) {
    result.approximate = true;
    double mx = 0.0;
    for (const auto& g : gammas) mx = std::max(mx, sup_abs(u.derivative(g), t, spec.sup_lattice));
    result.value = mx;
    return result;
  }

  std::vector<double> terms;
  terms.reserve(gammas.size());
  for (const auto& g : gammas) {
    const ScalarField d = u.derivative(g);
    const double w = spec.weighted ? multinomial(g) : 1.0;
    int degree = spec.quad_degree;
    bool exact = false;
    if (const Polynomial3* poly = d.polynomial()) {
      const int e = poly->effective_degree();
      if (e < 0) {
        terms.push_back(0.0);
        continue;
      }
      if (is_even_integer(spec.p) && spec.p * e <= kMaxQuadratureDegree) {
        exact = true;
        if (degree == 0) degree = std::max(1, static_cast<int>(spec.p) * e);
      }
    }
    if (degree == 0) degree = 12;
    const TermIntegral ti = integrate_power(d, t, spec.p, degree, !exact);
    result.refinement_warning = result.refinement_warning || ti.warning;
    terms.push_back(w * ti.value);
  }
  const double total = pairwise_sum(terms.data(), terms.size());
  result.value = std::pow(std::max(total, 0.0), 1.0 / spec.p);
  return result;
}

SeminormResult seminorm(const Polynomial3& u, const Tetrahedron& t, const SeminormSpec& spec) {
  return seminorm(ScalarField::from_polynomial(u), t, spec);
}

}  // namespace anisotetra
