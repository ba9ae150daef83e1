#include "anisotetra/field.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace anisotetra {

namespace {

[[noreturn]] void derivative_unavailable(const std::string& name, int order, const MultiIndex3& g) {
  std::ostringstream os;
  os << "field '" << name << "' has order " << order << "; partial (" << g[0] << ","
     << g[1] << "," << g[2] << ") requested";
  throw Error(ErrorKind::DerivativeUnavailable, os.str());
}

MultiIndex3 unit(int axis) {
  MultiIndex3 e{};
  e[axis] = 1;
  return e;
}

class PolynomialModel final : public ScalarField::Model {
 public:
  explicit PolynomialModel(Polynomial3 p) : p_(std::move(p)) {}
  int order() const override { return ScalarField::kUnbounded; }
  double value(const Point3& x) const override { return p_(x); }
  std::shared_ptr<const Model> derivative(const MultiIndex3& g) const override {
    return std::make_shared<PolynomialModel>(p_.partial(g));
  }
  const Polynomial3* polynomial() const override { return &p_; }

 private:
  Polynomial3 p_;
};

class FunctionModel final : public ScalarField::Model {
 public:
  using Value = std::function<double(const Point3&)>;
  using Partial = std::function<double(const MultiIndex3&, const Point3&)>;

  FunctionModel(int order, Value value, Partial partial, MultiIndex3 offset = {})
      : order_(order), value_(std::move(value)), partial_(std::move(partial)), offset_(offset) {}

  int order() const override { return order_; }
  double value(const Point3& x) const override {
    return offset_.order() == 0 ? value_(x) : partial_(offset_, x);
  }
  std::shared_ptr<const Model> derivative(const MultiIndex3& g) const override {
    return std::make_shared<FunctionModel>(order_ - g.order(), value_, partial_, offset_ + g);
  }

 private:
  int order_;
  Value value_;
  Partial partial_;
  MultiIndex3 offset_;
};

class FiniteDifferenceModel final : public ScalarField::Model {
 public:
  FiniteDifferenceModel(int order, std::function<double(const Point3&)> value, double scale,
                        MultiIndex3 offset = {})
      : order_(order), value_(std::move(value)), scale_(scale), offset_(offset) {}

  int order() const override { return order_; }
  bool approximate() const override { return offset_.order() > 0; }

  double value(const Point3& x) const override {
    const int n = offset_.order();
    if (n == 0) return value_(x);
    const double h =
        std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (n + 2)) * scale_;
    // Tensor product of 1D central differences of order offset_[i].
    std::vector<std::pair<Point3, double>> terms{{Point3::Zero(), 1.0}};
    for (int axis = 0; axis < 3; ++axis) {
      const int a = offset_[axis];
      if (a == 0) continue;
      std::vector<std::pair<Point3, double>> next;
      for (int j = 0; j <= a; ++j) {
        const double w = ((j % 2) ? -1.0 : 1.0) * static_cast<double>(binomial(a, j)) /
                         std::pow(h, a);
        Point3 shift = Point3::Zero();
        shift[axis] = (0.5 * a - j) * h;
        for (const auto& [p, c] : terms) next.emplace_back(p + shift, c * w);
      }
      terms = std::move(next);
    }
    double sum = 0.0;
    for (const auto& [p, c] : terms) sum += c * value_(x + p);
    return sum;
  }

  std::shared_ptr<const Model> derivative(const MultiIndex3& g) const override {
    return std::make_shared<FiniteDifferenceModel>(order_ - g.order(), value_, scale_,
                                                   offset_ + g);
  }

 private:
  int order_;
  std::function<double(const Point3&)> value_;
  double scale_;
  MultiIndex3 offset_;
};

class CombinationModel final : public ScalarField::Model {
 public:
  using Term = std::pair<double, std::shared_ptr<const Model>>;
  explicit CombinationModel(std::vector<Term> terms) : terms_(std::move(terms)) {}

  int order() const override {
    int r = ScalarField::kUnbounded;
    for (const auto& [c, m] : terms_) r = std::min(r, m->order());
    return r;
  }
  bool approximate() const override {
    for (const auto& [c, m] : terms_)
      if (m->approximate()) return true;
    return false;
  }
  double value(const Point3& x) const override {
    double s = 0.0;
    for (const auto& [c, m] : terms_) s += c * m->value(x);
    return s;
  }
  std::shared_ptr<const Model> derivative(const MultiIndex3& g) const override {
    std::vector<Term> d;
    d.reserve(terms_.size());
    for (const auto& [c, m] : terms_) d.emplace_back(c, m->derivative(g));
    return std::make_shared<CombinationModel>(std::move(d));
  }

 private:
  std::vector<Term> terms_;
};

// g(y) = f(Minv (y - origin)).
class PulledModel final : public ScalarField::Model {
 public:
  PulledModel(std::shared_ptr<const Model> f, Point3 origin, Matrix3 minv)
      : f_(std::move(f)), origin_(std::move(origin)), minv_(std::move(minv)) {}

  int order() const override { return f_->order(); }
  bool approximate() const override { return f_->approximate(); }
  double value(const Point3& y) const override { return f_->value(minv_ * (y - origin_)); }

  std::shared_ptr<const Model> derivative(const MultiIndex3& g) const override {
    if (g.order() == 0) return std::make_shared<PulledModel>(*this);
    int axis = 0;
    while (g[axis] == 0) ++axis;
    // d/dy_axis g = sum_j Minv(j, axis) (d_j f)(Minv (y - origin)).
    std::vector<CombinationModel::Term> terms;
    for (int j = 0; j < 3; ++j) {
      if (minv_(j, axis) == 0.0) continue;
      terms.emplace_back(minv_(j, axis),
                         std::make_shared<PulledModel>(f_->derivative(unit(j)), origin_, minv_));
    }
    auto first = std::make_shared<CombinationModel>(std::move(terms));
    return first->derivative(g - unit(axis));
  }

 private:
  std::shared_ptr<const Model> f_;
  Point3 origin_;
  Matrix3 minv_;
};

}  // namespace

ScalarField ScalarField::from_polynomial(Polynomial3 p, std::string name) {
  return {std::make_shared<PolynomialModel>(std::move(p)), std::move(name)};
}

ScalarField ScalarField::constant(double c) {
  return from_polynomial(Polynomial3::constant(c), "constant");
}

ScalarField ScalarField::from_functions(std::string name, int order,
                                        std::function<double(const Point3&)> value,
                                        std::function<double(const MultiIndex3&, const Point3&)> partial) {
  return {std::make_shared<FunctionModel>(order, std::move(value), std::move(partial)),
          std::move(name)};
}

ScalarField ScalarField::finite_difference(std::string name, int order,
                                           std::function<double(const Point3&)> value,
                                           double scale) {
  return {std::make_shared<FiniteDifferenceModel>(order, std::move(value), scale),
          std::move(name)};
}

ScalarField ScalarField::derivative(const MultiIndex3& gamma) const {
  if (gamma.order() > order()) derivative_unavailable(name_, order(), gamma);
  if (gamma.order() == 0) return *this;
  return {model_->derivative(gamma), name_};
}

ScalarField operator-(const ScalarField& v, const Polynomial3& p) {
  if (const Polynomial3* q = v.polynomial()) {
    Polynomial3 diff = q->in_frame(p.frame());
    diff -= p;
    return ScalarField::from_polynomial(std::move(diff), v.name_ + " - I v");
  }
  std::vector<CombinationModel::Term> terms{
      {1.0, v.model_}, {-1.0, std::make_shared<PolynomialModel>(p)}};
  return {std::make_shared<CombinationModel>(std::move(terms)), v.name_ + " - I v"};
}

ScalarField ScalarField::linear_combination(double a, const ScalarField& f, double b,
                                            const ScalarField& g) {
  std::vector<CombinationModel::Term> terms{{a, f.model_}, {b, g.model_}};
  return {std::make_shared<CombinationModel>(std::move(terms)),
          "(" + f.name_ + ", " + g.name_ + ")"};
}

ScalarField ScalarField::pulled_through(const Point3& origin, const Matrix3& M) const {
  return {std::make_shared<PulledModel>(model_, origin, M.inverse()), name_ + " o F^-1"};
}

}  // namespace anisotetra
