#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "anisotetra/field.hpp"
#include "anisotetra/geom.hpp"
#include "anisotetra/multi_index.hpp"

namespace anisotetra {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Gauss-Legendre rule on [0, 1].
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule, 1 <= n <= 64.
const GaussRule1D& gauss_legendre(int n);

/// Rule on a tetrahedron in barycentric form. Weights sum to 1, so the
/// integral over T is volume(T) * sum(w_i f(x_i)).
struct QuadratureRule {
  std::vector<std::array<double, 4>> nodes;
  std::vector<double> weights;
  int exactness = 0;

  std::size_t size() const { return weights.size(); }
  Point3 point(std::size_t i, const Tetrahedron& t) const {
    const auto& b = nodes[i];
    return b[0] * t.v[0] + b[1] * t.v[1] + b[2] * t.v[2] + b[3] * t.v[3];
  }
};

inline constexpr int kMaxQuadratureDegree = 20;

/// Collapsed-coordinate tensor Gauss rule exact for total degree d.
/// Throws UnsupportedDegree outside [1, 20]. Rules are cached.
const QuadratureRule& rule_for_degree(int d);

/// Closed form of the integral of x^a y^b z^c over the unit simplex:
/// a! b! c! / (a + b + c + 3)!.
double simplex_monomial_integral(const MultiIndex3& gamma);

/// Integral of f over t with the given rule.
double integrate(const std::function<double(const Point3&)>& f, const Tetrahedron& t,
                 const QuadratureRule& rule);

/// Splits t into eight children by halving every edge.
std::array<Tetrahedron, 8> refine(const Tetrahedron& t);

struct Admissibility {
  bool admissible = true;
  std::string reason;
};

/// Admissible exponents for (k, m): p > 2 when k = m, p > 3/2 when k = 1 and
/// m = 0, p >= 1 when k >= 2 and k - m >= 1. p may be kInfinity.
Admissibility validate_p(int k, int m, double p);

/// Parses "inf", "infinity" or a number >= 1 (ParseError otherwise).
double parse_p(const std::string& text);
std::string format_p(double p);

struct SeminormSpec {
  int m = 0;
  double p = 2.0;
  bool weighted = true;  // multinomial weights m!/gamma!
  /// 0 selects the default: exact for polynomial integrands where
  /// possible, else degree 12 with a refinement check.
  int quad_degree = 0;
  /// Lattice density for p = infinity.
  int sup_lattice = 40;
  /// When > 0, (k, m, p) is checked with validate_p and InadmissiblePC thrown.
  int validate_k = 0;
};

struct SeminormResult {
  double value = 0;
  bool refinement_warning = false;  // two quadrature levels disagreed beyond 1e-6
  bool approximate = false;         // sampled sup or finite-difference partials
};

SeminormResult seminorm(const ScalarField& u, const Tetrahedron& t, const SeminormSpec& spec);
SeminormResult seminorm(const Polynomial3& u, const Tetrahedron& t, const SeminormSpec& spec);

/// max |g| over t: sampled on Sigma^n(t), then polished by Newton steps
/// inside the face of each leading sample when g is a polynomial.
double sup_abs(const ScalarField& g, const Tetrahedron& t, int n = 40, bool polish = true);

}  // namespace anisotetra
