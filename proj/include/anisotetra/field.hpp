#pragma once

#include <climits>
#include <functional>
#include <memory>
#include <string>

#include "anisotetra/polynomial.hpp"

namespace anisotetra {

/// A scalar function on R^3 together with its partial derivatives up to a
/// declared order. Fields are immutable values that share their model.
class ScalarField {
 public:
  static constexpr int kUnbounded = INT_MAX / 2;

  class Model {
   public:
    virtual ~Model() = default;
    virtual int order() const = 0;
    virtual double value(const Point3& x) const = 0;
    /// Model of d^gamma; called only with |gamma| <= order().
    virtual std::shared_ptr<const Model> derivative(const MultiIndex3& gamma) const = 0;
    virtual bool approximate() const { return false; }
    virtual const Polynomial3* polynomial() const { return nullptr; }
  };

  ScalarField() = default;
  ScalarField(std::shared_ptr<const Model> model, std::string name)
      : model_(std::move(model)), name_(std::move(name)) {}

  static ScalarField from_polynomial(Polynomial3 p, std::string name = "polynomial");
  static ScalarField constant(double c);

  /// Field with analytic partials supplied by `partial` for |gamma| <= order.
  static ScalarField from_functions(std::string name, int order,
                                    std::function<double(const Point3&)> value,
                                    std::function<double(const MultiIndex3&, const Point3&)> partial);

  /// Field whose partials are central finite differences of `value` with step
  /// eps^{1/(|gamma|+2)} * scale; results are flagged approximate.
  static ScalarField finite_difference(std::string name, int order,
                                       std::function<double(const Point3&)> value,
                                       double scale = 1.0);

  explicit operator bool() const { return static_cast<bool>(model_); }
  const std::string& name() const { return name_; }
  int order() const { return model_->order(); }
  bool approximate() const { return model_->approximate(); }
  /// Non-null when the field is exactly this polynomial.
  const Polynomial3* polynomial() const { return model_->polynomial(); }

  double operator()(const Point3& x) const { return model_->value(x); }

  /// d^gamma as a field of order order() - |gamma|. Throws
  /// DerivativeUnavailable past the declared order.
  ScalarField derivative(const MultiIndex3& gamma) const;
  double partial(const MultiIndex3& gamma, const Point3& x) const {
    return derivative(gamma)(x);
  }

  /// v - p, with exact derivatives on the polynomial part.
  friend ScalarField operator-(const ScalarField& v, const Polynomial3& p);
  /// a * f + b * g.
  static ScalarField linear_combination(double a, const ScalarField& f, double b,
                                        const ScalarField& g);
  /// f o F^{-1} for the affine map F(x) = origin + M x, i.e. g(y) = f(M^{-1}(y - origin)).
  ScalarField pulled_through(const Point3& origin, const Matrix3& M) const;

 private:
  std::shared_ptr<const Model> model_;
  std::string name_;
};

}  // namespace anisotetra
