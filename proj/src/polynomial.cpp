#include "anisotetra/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace anisotetra {

std::vector<MultiIndex3> indices_of_order(int order) {
  std::vector<MultiIndex3> out;
  if (order < 0) return out;
  out.reserve(static_cast<std::size_t>((order + 1) * (order + 2) / 2));
  for (int a = order; a >= 0; --a)
    for (int b = order - a; b >= 0; --b) out.push_back({{a, b, order - a - b}});
  return out;
}

std::vector<MultiIndex3> indices_up_to(int degree) {
  std::vector<MultiIndex3> out;
  out.reserve(dim_p(degree));
  for (int n = 0; n <= degree; ++n) {
    auto level = indices_of_order(n);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::size_t monomial_index(const MultiIndex3& g) {
  const int n = g.order();
  const int r = n - g[0];
  return dim_p(n - 1) + static_cast<std::size_t>(r * (r + 1) / 2 + (r - g[1]));
}

double multinomial(const MultiIndex3& gamma) {
  return static_cast<double>(factorial(gamma.order())) / static_cast<double>(gamma.factorial());
}

Frame Frame::affine(const Point3& origin, const Matrix3& to_local) {
  return {origin, to_local, to_local.inverse()};
}

Frame Frame::reference_of(const Tetrahedron& t) {
  const Matrix3 J = t.jacobian();
  return {t.v[0], J.inverse(), J};
}

Polynomial3::Polynomial3(int degree, Frame frame)
    : degree_(std::max(degree, 0)), frame_(std::move(frame)), coeffs_(dim_p(degree_), 0.0) {}

Polynomial3 Polynomial3::constant(double c, Frame frame) {
  Polynomial3 p(0, std::move(frame));
  p.coeffs_[0] = c;
  return p;
}

Polynomial3 Polynomial3::monomial(const MultiIndex3& gamma, double coeff, Frame frame) {
  Polynomial3 p(gamma.order(), std::move(frame));
  p.coeffs_[monomial_index(gamma)] = coeff;
  return p;
}

int Polynomial3::effective_degree() const {
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (coeffs_[i] != 0.0) {
      int n = 0;
      while (dim_p(n) <= i) ++n;
      return n;
    }
  }
  return -1;
}

double Polynomial3::coeff(const MultiIndex3& gamma) const {
  if (gamma.order() > degree_) return 0.0;
  return coeffs_[monomial_index(gamma)];
}

void Polynomial3::set_coeff(const MultiIndex3& gamma, double value) {
  grow(gamma.order());
  coeffs_[monomial_index(gamma)] = value;
}

void Polynomial3::grow(int degree) {
  if (degree <= degree_) return;
  degree_ = degree;
  coeffs_.resize(dim_p(degree_), 0.0);
}

double Polynomial3::eval_local(const Point3& xi) const {
  constexpr int kInline = 24;
  std::array<std::array<double, kInline>, 3> inline_pw;
  std::vector<double> heap;
  std::array<double*, 3> pw{};
  if (degree_ < kInline) {
    for (int i = 0; i < 3; ++i) pw[i] = inline_pw[i].data();
  } else {
    heap.resize(3 * (static_cast<std::size_t>(degree_) + 1));
    for (int i = 0; i < 3; ++i) pw[i] = heap.data() + i * (degree_ + 1);
  }
  for (int i = 0; i < 3; ++i) {
    pw[i][0] = 1.0;
    for (int e = 1; e <= degree_; ++e) pw[i][e] = pw[i][e - 1] * xi[i];
  }
  double sum = 0.0;
  std::size_t idx = 0;
  for (int n = 0; n <= degree_; ++n)
    for (int a = n; a >= 0; --a)
      for (int b = n - a; b >= 0; --b, ++idx) {
        const double c = coeffs_[idx];
        if (c != 0.0) sum += c * pw[0][a] * pw[1][b] * pw[2][n - a - b];
      }
  return sum;
}

Polynomial3 Polynomial3::partial_local(int axis) const {
  Polynomial3 out(std::max(degree_ - 1, 0), frame_);
  const auto idx = indices_up_to(degree_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const int e = idx[i][axis];
    if (e == 0 || coeffs_[i] == 0.0) continue;
    MultiIndex3 g = idx[i];
    g[axis] -= 1;
    out.coeffs_[monomial_index(g)] += e * coeffs_[i];
  }
  return out;
}

Polynomial3 Polynomial3::partial(int axis) const {
  Polynomial3 out(std::max(degree_ - 1, 0), frame_);
  for (int j = 0; j < 3; ++j) {
    const double w = frame_.to_local(j, axis);
    if (w == 0.0) continue;
    Polynomial3 d = partial_local(j);
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] += w * d.coeffs_[i];
  }
  return out;
}

Polynomial3 Polynomial3::partial(const MultiIndex3& gamma) const {
  Polynomial3 p = *this;
  for (int axis = 0; axis < 3; ++axis)
    for (int r = 0; r < gamma[axis]; ++r) p = p.partial(axis);
  return p;
}

Polynomial3& Polynomial3::operator+=(const Polynomial3& o) {
  if (!(o.frame_ == frame_)) return *this += o.in_frame(frame_);
  grow(o.degree_);
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Polynomial3& Polynomial3::operator-=(const Polynomial3& o) {
  if (!(o.frame_ == frame_)) return *this -= o.in_frame(frame_);
  grow(o.degree_);
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Polynomial3& Polynomial3::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Polynomial3 operator*(const Polynomial3& a, const Polynomial3& b) {
  if (!(a.frame_ == b.frame_)) return a * b.in_frame(a.frame_);
  Polynomial3 out(a.degree_ + b.degree_, a.frame_);
  const auto ia = indices_up_to(a.degree_);
  const auto ib = indices_up_to(b.degree_);
  for (std::size_t i = 0; i < ia.size(); ++i) {
    if (a.coeffs_[i] == 0.0) continue;
    for (std::size_t j = 0; j < ib.size(); ++j) {
      if (b.coeffs_[j] == 0.0) continue;
      out.coeffs_[monomial_index(ia[i] + ib[j])] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return out;
}

Polynomial3 Polynomial3::in_frame(const Frame& target) const {
  // xi = L (x - o) with x = o' + L'^{-1} eta, so xi = shift + M eta.
  const Matrix3 M = frame_.to_local * target.from_local;
  const Point3 shift = frame_.to_local * (target.origin - frame_.origin);

  std::array<std::vector<Polynomial3>, 3> powers;
  for (int i = 0; i < 3; ++i) {
    Polynomial3 lin(1, target);
    lin.coeffs_[0] = shift[i];
    for (int j = 0; j < 3; ++j) {
      MultiIndex3 e{};
      e[j] = 1;
      lin.coeffs_[monomial_index(e)] = M(i, j);
    }
    powers[i].push_back(Polynomial3::constant(1.0, target));
    for (int e = 1; e <= degree_; ++e) powers[i].push_back(powers[i].back() * lin);
  }

  Polynomial3 out(degree_, target);
  const auto idx = indices_up_to(degree_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (coeffs_[i] == 0.0) continue;
    Polynomial3 term = powers[0][idx[i][0]] * powers[1][idx[i][1]] * powers[2][idx[i][2]];
    term *= coeffs_[i];
    out += term;
  }
  return out;
}

double Polynomial3::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace anisotetra
