#include "anisotetra/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace anisotetra {

enum class Op { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Sqrt };

struct Expression::Node {
  Op op = Op::Num;
  double value = 0.0;
  int var = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr num(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Num;
  n->value = v;
  return n;
}

NodePtr var(int axis) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Var;
  n->var = axis;
  return n;
}

bool is_num(const NodePtr& n, double v) { return n->op == Op::Num && n->value == v; }
bool is_num(const NodePtr& n) { return n->op == Op::Num; }

double eval(const Expression::Node& n, const Point3& p);

NodePtr add(NodePtr a, NodePtr b) {
  if (is_num(a, 0)) return b;
  if (is_num(b, 0)) return a;
  if (is_num(a) && is_num(b)) return num(a->value + b->value);
  return make(Op::Add, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  if (is_num(a)) return num(-a->value);
  if (a->op == Op::Neg) return a->a;
  return make(Op::Neg, std::move(a));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_num(b, 0)) return a;
  if (is_num(a, 0)) return neg(std::move(b));
  if (is_num(a) && is_num(b)) return num(a->value - b->value);
  return make(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_num(a, 0) || is_num(b, 0)) return num(0);
  if (is_num(a, 1)) return b;
  if (is_num(b, 1)) return a;
  if (is_num(a) && is_num(b)) return num(a->value * b->value);
  if (is_num(b)) std::swap(a, b);
  if (is_num(a) && b->op == Op::Mul && is_num(b->a)) return mul(num(a->value * b->a->value), b->b);
  return make(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_num(a, 0)) return num(0);
  if (is_num(b, 1)) return a;
  if (is_num(a) && is_num(b)) return num(a->value / b->value);
  return make(Op::Div, std::move(a), std::move(b));
}

NodePtr power(NodePtr a, NodePtr b) {
  if (is_num(b, 0)) return num(1);
  if (is_num(b, 1)) return a;
  if (is_num(a) && is_num(b)) return num(std::pow(a->value, b->value));
  return make(Op::Pow, std::move(a), std::move(b));
}

NodePtr func(Op op, NodePtr a) {
  if (is_num(a)) {
    Expression::Node tmp;
    tmp.op = op;
    tmp.a = a;
    return num(eval(tmp, Point3::Zero()));
  }
  return make(op, std::move(a));
}

double eval(const Expression::Node& n, const Point3& p) {
  switch (n.op) {
    case Op::Num: return n.value;
    case Op::Var: return p[n.var];
    case Op::Add: return eval(*n.a, p) + eval(*n.b, p);
    case Op::Sub: return eval(*n.a, p) - eval(*n.b, p);
    case Op::Mul: return eval(*n.a, p) * eval(*n.b, p);
    case Op::Div: return eval(*n.a, p) / eval(*n.b, p);
    case Op::Pow: {
      const double base = eval(*n.a, p);
      if (n.b->op == Op::Num) {
        const double e = n.b->value;
        if (e == 2.0) return base * base;
        if (e == 3.0) return base * base * base;
        return std::pow(base, e);
      }
      return std::pow(base, eval(*n.b, p));
    }
    case Op::Neg: return -eval(*n.a, p);
    case Op::Sin: return std::sin(eval(*n.a, p));
    case Op::Cos: return std::cos(eval(*n.a, p));
    case Op::Exp: return std::exp(eval(*n.a, p));
    case Op::Log: return std::log(eval(*n.a, p));
    case Op::Sqrt: return std::sqrt(eval(*n.a, p));
  }
  return 0.0;
}

NodePtr diff(const NodePtr& n, int axis) {
  switch (n->op) {
    case Op::Num: return num(0);
    case Op::Var: return num(n->var == axis ? 1 : 0);
    case Op::Add: return add(diff(n->a, axis), diff(n->b, axis));
    case Op::Sub: return sub(diff(n->a, axis), diff(n->b, axis));
    case Op::Mul:
      return add(mul(diff(n->a, axis), n->b), mul(n->a, diff(n->b, axis)));
    case Op::Div:
      return sub(div(diff(n->a, axis), n->b),
                 div(mul(n->a, diff(n->b, axis)), mul(n->b, n->b)));
    case Op::Pow: {
      if (is_num(n->b)) {
        const double e = n->b->value;
        return mul(mul(num(e), power(n->a, num(e - 1))), diff(n->a, axis));
      }
      // d(a^b) = a^b (b' log a + b a' / a)
      return mul(n, add(mul(diff(n->b, axis), func(Op::Log, n->a)),
                        div(mul(n->b, diff(n->a, axis)), n->a)));
    }
    case Op::Neg: return neg(diff(n->a, axis));
    case Op::Sin: return mul(func(Op::Cos, n->a), diff(n->a, axis));
    case Op::Cos: return neg(mul(func(Op::Sin, n->a), diff(n->a, axis)));
    case Op::Exp: return mul(n, diff(n->a, axis));
    case Op::Log: return div(diff(n->a, axis), n->a);
    case Op::Sqrt: return div(diff(n->a, axis), mul(num(2), n));
  }
  return num(0);
}

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

void print(const NodePtr& n, std::ostream& os, int outer) {
  const int prec = precedence(n->op);
  const bool paren = prec < outer;
  if (paren) os << '(';
  switch (n->op) {
    case Op::Num: {
      std::ostringstream s;
      s.precision(17);
      s << n->value;
      os << s.str();
      break;
    }
    case Op::Var: os << "xyz"[n->var]; break;
    case Op::Add: print(n->a, os, 1); os << " + "; print(n->b, os, 2); break;
    case Op::Sub: print(n->a, os, 1); os << " - "; print(n->b, os, 2); break;
    case Op::Mul: print(n->a, os, 2); os << "*"; print(n->b, os, 3); break;
    case Op::Div: print(n->a, os, 2); os << "/"; print(n->b, os, 3); break;
    case Op::Pow: print(n->a, os, 5); os << "^"; print(n->b, os, 4); break;
    case Op::Neg: os << "-"; print(n->a, os, 4); break;
    case Op::Sin: os << "sin("; print(n->a, os, 0); os << ")"; break;
    case Op::Cos: os << "cos("; print(n->a, os, 0); os << ")"; break;
    case Op::Exp: os << "exp("; print(n->a, os, 0); os << ")"; break;
    case Op::Log: os << "log("; print(n->a, os, 0); os << ")"; break;
    case Op::Sqrt: os << "sqrt("; print(n->a, os, 0); os << ")"; break;
  }
  if (paren) os << ')';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "expression error at position " << pos_ << ": " << what << "\n  " << text_ << "\n  "
       << std::string(pos_, ' ') << '^';
    throw Error(ErrorKind::ExpressionParseError, os.str());
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = add(lhs, term());
      else if (accept('-')) lhs = sub(lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = mul(lhs, unary());
      else if (accept('/')) lhs = div(lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return neg(unary());
    if (accept('+')) return unary();
    NodePtr base = primary();
    if (accept('^')) return power(base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0;
      const char* begin = text_.data() + pos_;
      auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
      if (ec != std::errc()) fail("malformed number");
      pos_ += static_cast<std::size_t>(ptr - begin);
      return num(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view id = text_.substr(start, pos_ - start);
      if (id == "x") return var(0);
      if (id == "y") return var(1);
      if (id == "z") return var(2);
      if (id == "pi") return num(3.14159265358979323846);
      Op op;
      if (id == "sin") op = Op::Sin;
      else if (id == "cos") op = Op::Cos;
      else if (id == "exp") op = Op::Exp;
      else if (id == "log") op = Op::Log;
      else if (id == "sqrt") op = Op::Sqrt;
      else {
        pos_ = start;
        fail("unknown identifier '" + std::string(id) + "'");
      }
      if (!accept('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return func(op, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class ExpressionModel final : public ScalarField::Model {
 public:
  explicit ExpressionModel(Expression e) : e_(std::move(e)) {}
  int order() const override { return ScalarField::kUnbounded; }
  double value(const Point3& x) const override { return e_(x); }
  std::shared_ptr<const Model> derivative(const MultiIndex3& g) const override {
    return std::make_shared<ExpressionModel>(e_.derivative(g));
  }

 private:
  Expression e_;
};

}  // namespace

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

Expression Expression::number(double v) { return Expression(num(v)); }
Expression Expression::variable(int axis) { return Expression(var(axis)); }

double Expression::operator()(const Point3& p) const { return eval(*node_, p); }

Expression Expression::derivative(int axis) const { return Expression(diff(node_, axis)); }

Expression Expression::derivative(const MultiIndex3& gamma) const {
  NodePtr n = node_;
  for (int axis = 0; axis < 3; ++axis)
    for (int r = 0; r < gamma[axis]; ++r) n = diff(n, axis);
  return Expression(n);
}

std::string Expression::to_string() const {
  std::ostringstream os;
  print(node_, os, 0);
  return os.str();
}

Expression operator+(const Expression& a, const Expression& b) { return Expression(add(a.node_, b.node_)); }
Expression operator-(const Expression& a, const Expression& b) { return Expression(sub(a.node_, b.node_)); }
Expression operator*(const Expression& a, const Expression& b) { return Expression(mul(a.node_, b.node_)); }
Expression operator/(const Expression& a, const Expression& b) { return Expression(div(a.node_, b.node_)); }
Expression pow(const Expression& a, const Expression& b) { return Expression(power(a.node_, b.node_)); }
Expression sin(const Expression& a) { return Expression(func(Op::Sin, a.node_)); }
Expression cos(const Expression& a) { return Expression(func(Op::Cos, a.node_)); }
Expression exp(const Expression& a) { return Expression(func(Op::Exp, a.node_)); }
Expression log(const Expression& a) { return Expression(func(Op::Log, a.node_)); }
Expression sqrt(const Expression& a) { return Expression(func(Op::Sqrt, a.node_)); }

ScalarField expression_field(const Expression& e, std::string name) {
  if (name.empty()) name = e.to_string();
  return {std::make_shared<ExpressionModel>(e), std::move(name)};
}

}  // namespace anisotetra
