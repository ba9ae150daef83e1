#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "anisotetra/field.hpp"

namespace anisotetra {

/// Arithmetic expression in x, y, z: + - * / ^, unary minus, parentheses,
/// numbers, and the functions sin, cos, exp, log, sqrt. Supports symbolic
/// differentiation with light constant folding.
class Expression {
 public:
  struct Node;

  /// Throws ExpressionParseError with the offending position and a caret line.
  static Expression parse(std::string_view text);

  static Expression number(double v);
  static Expression variable(int axis);

  double operator()(const Point3& p) const;
  Expression derivative(int axis) const;
  Expression derivative(const MultiIndex3& gamma) const;
  std::string to_string() const;

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression pow(const Expression& a, const Expression& b);
  friend Expression sin(const Expression& a);
  friend Expression cos(const Expression& a);
  friend Expression exp(const Expression& a);
  friend Expression log(const Expression& a);
  friend Expression sqrt(const Expression& a);

  const std::shared_ptr<const Node>& node() const { return node_; }

 private:
  explicit Expression(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Field with symbolic partials of every order.
ScalarField expression_field(const Expression& e, std::string name = {});

}  // namespace anisotetra
