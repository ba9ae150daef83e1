#include "anisotetra/lattice.hpp"

#include <cmath>
#include <sstream>

#include "anisotetra/field.hpp"
#include "anisotetra/interp.hpp"
#include "anisotetra/quad.hpp"

namespace anisotetra {

namespace {

void check_k(int k) {
  if (k < 1) throw Error(ErrorKind::InvalidDegree, "lattice degree k must be >= 1");
}

std::string describe(const MultiIndex3& g) {
  std::ostringstream os;
  os << "(" << g[0] << "," << g[1] << "," << g[2] << ")";
  return os.str();
}

Point3 lattice_point(const MultiIndex3& g, int k) {
  return Point3(g[0], g[1], g[2]) / static_cast<double>(k);
}

}  // namespace

const char* to_string(Reference r) { return r == Reference::Hat ? "hat" : "tilde"; }

std::vector<LatticeNode> sigma_k(const Tetrahedron& t, int k) {
  check_k(k);
  std::vector<LatticeNode> out;
  const auto idx = indices_up_to(k);
  out.reserve(idx.size());
  const double kd = k;
  for (const auto& g : idx) {
    LatticeNode n;
    n.k = k;
    n.gamma = {{k - g.order(), g[0], g[1], g[2]}};
    n.point = (n.gamma[0] * t.v[0] + g[0] * t.v[1] + g[1] * t.v[2] + g[2] * t.v[3]) / kd;
    out.push_back(n);
  }
  return out;
}

bool contains(Reference ref, const MultiIndex3& g, int k) {
  if (g[0] < 0 || g[1] < 0 || g[2] < 0) return false;
  if (ref == Reference::Hat) return g.order() <= k;
  return g[1] <= g[0] && g[0] + g[2] <= k;
}

std::vector<MultiIndex3> Box::corners() const {
  std::vector<MultiIndex3> out{gamma};
  for (int axis = 0; axis < 3; ++axis) {
    if (delta[axis] == 0) continue;
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
      MultiIndex3 c = out[i];
      c[axis] += delta[axis];
      out.push_back(c);
    }
  }
  return out;
}

std::vector<Box> enumerate_boxes(int k, const MultiIndex3& delta, Reference ref) {
  check_k(k);
  if (delta.order() < 1 || delta.order() > k || !MultiIndex3{}.le(delta)) {
    std::ostringstream os;
    os << "box offset " << describe(delta) << " needs 1 <= |delta| <= k = " << k;
    throw Error(ErrorKind::InvalidDegree, os.str());
  }
  std::vector<Box> out;
  // T-tilde holds lattice points with |gamma| up to 2k, so scan the cube.
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b)
      for (int c = 0; c <= k; ++c) {
        Box box{{{a, b, c}}, delta, k};
        bool inside = true;
        for (const auto& corner : box.corners()) inside = inside && contains(ref, corner, k);
        if (inside) out.push_back(box);
      }
  return out;
}

std::vector<StencilTerm> difference_stencil(const MultiIndex3& delta) {
  std::vector<StencilTerm> out;
  for (int a = delta[0]; a >= 0; --a)
    for (int b = delta[1]; b >= 0; --b)
      for (int c = delta[2]; c >= 0; --c) {
        const MultiIndex3 eta{{a, b, c}};
        auto coeff = static_cast<std::int64_t>(binomial(delta[0], a) * binomial(delta[1], b) *
                                               binomial(delta[2], c));
        if ((delta.order() - eta.order()) % 2) coeff = -coeff;
        out.push_back({eta, coeff});
      }
  return out;
}

namespace {

double quotient_scale(const MultiIndex3& delta, int k) {
  return std::pow(static_cast<double>(k), delta.order()) / static_cast<double>(delta.factorial());
}

}  // namespace

double difference_quotient(const NodeValues& values, const MultiIndex3& gamma,
                           const MultiIndex3& delta, int k) {
  check_k(k);
  double sum = 0.0;
  for (const auto& term : difference_stencil(delta)) {
    const MultiIndex3 node = gamma + term.eta;
    auto it = values.find(node);
    if (it == values.end())
      throw Error(ErrorKind::MissingNodeValue, "no value supplied for lattice node " + describe(node));
    sum += static_cast<double>(term.coeff) * it->second;
  }
  return quotient_scale(delta, k) * sum;
}

double difference_quotient(const std::function<double(const Point3&)>& f,
                           const MultiIndex3& gamma, const MultiIndex3& delta, int k) {
  check_k(k);
  double sum = 0.0;
  for (const auto& term : difference_stencil(delta))
    sum += static_cast<double>(term.coeff) * f(lattice_point(gamma + term.eta, k));
  return quotient_scale(delta, k) * sum;
}

double box_mean(const std::function<double(const Point3&)>& g, const Box& box, int points) {
  const GaussRule1D& rule = gauss_legendre(points);
  // Each axis with offset s carries an ordered s-simplex collapsed onto the
  // unit cube: w_1 = u_1, w_j = w_{j-1} u_j, with Jacobian prod u_j^{s-j}.
  struct AxisSample {
    double offset;
    double weight;
  };
  std::array<std::vector<AxisSample>, 3> samples;
  for (int axis = 0; axis < 3; ++axis) {
    const int s = box.delta[axis];
    if (s == 0) {
      samples[axis].push_back({0.0, 1.0});
      continue;
    }
    std::vector<int> digit(static_cast<std::size_t>(s), 0);
    for (;;) {
      double w = 1.0, sum = 0.0, weight = 1.0;
      for (int j = 0; j < s; ++j) {
        const double u = rule.nodes[static_cast<std::size_t>(digit[j])];
        w *= u;
        sum += w;
        weight *= rule.weights[static_cast<std::size_t>(digit[j])] * std::pow(u, s - 1 - j);
      }
      samples[axis].push_back({sum, weight});
      int j = 0;
      while (j < s && ++digit[j] == points) digit[j++] = 0;
      if (j == s) break;
    }
  }
  const double kd = box.k;
  double total = 0.0;
  for (const auto& sx : samples[0])
    for (const auto& sy : samples[1])
      for (const auto& sz : samples[2]) {
        const Point3 p((box.gamma[0] + sx.offset) / kd, (box.gamma[1] + sy.offset) / kd,
                       (box.gamma[2] + sz.offset) / kd);
        total += sx.weight * sy.weight * sz.weight * g(p);
      }
  return total;
}

double box_integral(const ScalarField& field, const Box& box, int points) {
  const ScalarField d = field.derivative(box.delta);
  return box_mean([&d](const Point3& p) { return d(p); }, box, points);
}

ResidualQuotients residual_quotients_vanish(const ScalarField& field, const Tetrahedron& t,
                                            int k, Reference ref) {
  check_k(k);
  const ScalarField u = residual(field, t, k);
  const Tetrahedron r =
      ref == Reference::Hat ? Tetrahedron::reference_hat() : Tetrahedron::reference_tilde();
  // Affine map from the reference onto t, matching vertices in order.
  const Matrix3 map = t.jacobian() * r.jacobian().inverse();
  auto pulled = [&](const Point3& xi) { return u(t.v[0] + map * (xi - r.v[0])); };

  ResidualQuotients out;
  for (const auto& node : sigma_k(t, k)) out.scale = std::max(out.scale, std::abs(field(node.point)));
  for (int order = 1; order <= k; ++order) {
    for (const auto& delta : indices_of_order(order)) {
      for (const auto& box : enumerate_boxes(k, delta, ref)) {
        const double q = difference_quotient(pulled, box.gamma, delta, k);
        out.max_abs = std::max(out.max_abs, std::abs(q));
        ++out.quotients;
      }
    }
  }
  return out;
}

BoxConditionRank box_condition_rank(int k, const MultiIndex3& delta, Reference ref) {
  const auto boxes = enumerate_boxes(k, delta, ref);
  const int n = k - delta.order();
  const auto monos = indices_up_to(n);
  Eigen::MatrixXd M(static_cast<Eigen::Index>(boxes.size()), static_cast<Eigen::Index>(monos.size()));
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = 0; j < monos.size(); ++j) {
      const auto& g = monos[j];
      auto mono = [&g](const Point3& p) {
        return std::pow(p[0], g[0]) * std::pow(p[1], g[1]) * std::pow(p[2], g[2]);
      };
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          box_mean(mono, boxes[i], std::max(2, n + 2));
    }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-10);
  return {static_cast<std::size_t>(lu.rank()), boxes.size(), monos.size()};
}

}  // namespace anisotetra
