#include "specmeasure/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <vector>

namespace specmeasure::expr {

namespace {

enum class Op { add, sub, mul, div, pow, neg, sin, cos, exp, sqrt, abs, num, var_x, var_y, pi };

bool is_binary(Op op) {
  return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div || op == Op::pow;
}

// Precedence levels used both by the parser and the printer.
int precedence(Op op) {
  switch (op) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::neg: return 3;
    case Op::pow: return 4;
    default: return 5;
  }
}

}  // namespace

struct Expression::Node {
  Op op;
  double value = 0.0;  // num only
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_num(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::num;
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    auto node = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("expression error at byte " + std::to_string(pos_) + ": " + what, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      if (eat('+')) lhs = make(Op::add, lhs, parse_product());
      else if (eat('-')) lhs = make(Op::sub, lhs, parse_product());
      else return lhs;
    }
  }

  NodePtr parse_product() {
    auto lhs = parse_unary();
    for (;;) {
      if (eat('*')) lhs = make(Op::mul, lhs, parse_unary());
      else if (eat('/')) lhs = make(Op::div, lhs, parse_unary());
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return make(Op::neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_atom();
    if (eat('^')) {
      // right-associative; exponent may carry its own unary sign
      return make(Op::pow, base, parse_unary());
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected operand");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_num(v);
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "x") return make(Op::var_x);
    if (name == "y") return make(Op::var_y);
    if (name == "pi") return make(Op::pi);
    Op fn;
    if (name == "sin") fn = Op::sin;
    else if (name == "cos") fn = Op::cos;
    else if (name == "exp") fn = Op::exp;
    else if (name == "sqrt") fn = Op::sqrt;
    else if (name == "abs") fn = Op::abs;
    else {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    if (!eat('(')) fail("expected '(' after function name");
    auto arg = parse_sum();
    if (!eat(')')) fail("expected ')'");
    return make(fn, arg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double eval_node(const Expression::Node& n, double x, double y) {
  switch (n.op) {
    case Op::num: return n.value;
    case Op::var_x: return x;
    case Op::var_y: return y;
    case Op::pi: return std::numbers::pi;
    case Op::neg: return -eval_node(*n.lhs, x, y);
    case Op::add: return eval_node(*n.lhs, x, y) + eval_node(*n.rhs, x, y);
    case Op::sub: return eval_node(*n.lhs, x, y) - eval_node(*n.rhs, x, y);
    case Op::mul: return eval_node(*n.lhs, x, y) * eval_node(*n.rhs, x, y);
    case Op::div: return eval_node(*n.lhs, x, y) / eval_node(*n.rhs, x, y);
    case Op::pow: return std::pow(eval_node(*n.lhs, x, y), eval_node(*n.rhs, x, y));
    case Op::sin: return std::sin(eval_node(*n.lhs, x, y));
    case Op::cos: return std::cos(eval_node(*n.lhs, x, y));
    case Op::exp: return std::exp(eval_node(*n.lhs, x, y));
    case Op::sqrt: return std::sqrt(eval_node(*n.lhs, x, y));
    case Op::abs: return std::abs(eval_node(*n.lhs, x, y));
  }
  return 0.0;
}

bool node_uses_y(const Expression::Node& n) {
  if (n.op == Op::var_y) return true;
  if (n.lhs && node_uses_y(*n.lhs)) return true;
  if (n.rhs && node_uses_y(*n.rhs)) return true;
  return false;
}

void print_node(const Expression::Node& n, std::ostream& os, int parent_prec, bool rhs_of_binary) {
  const int prec = precedence(n.op);
  // Parenthesize when our precedence is lower, or equal on the right of a
  // left-associative operator (pow is right-associative and handled below).
  bool parens = false;
  if (is_binary(n.op) || n.op == Op::neg) {
    parens = prec < parent_prec || (prec == parent_prec && rhs_of_binary && n.op != Op::pow);
  }
  if (parens) os << '(';
  switch (n.op) {
    case Op::num: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", n.value);
      os << buf;
      break;
    }
    case Op::var_x: os << 'x'; break;
    case Op::var_y: os << 'y'; break;
    case Op::pi: os << "pi"; break;
    case Op::neg:
      os << '-';
      print_node(*n.lhs, os, prec + 1, false);
      break;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow: {
      const char* sym = n.op == Op::add ? "+" : n.op == Op::sub ? "-"
                      : n.op == Op::mul ? "*" : n.op == Op::div ? "/" : "^";
      // pow: right-assoc, so the left child needs parens at equal precedence
      print_node(*n.lhs, os, n.op == Op::pow ? prec + 1 : prec, false);
      os << sym;
      print_node(*n.rhs, os, prec, n.op != Op::pow);
      break;
    }
    case Op::sin: os << "sin("; print_node(*n.lhs, os, 0, false); os << ')'; break;
    case Op::cos: os << "cos("; print_node(*n.lhs, os, 0, false); os << ')'; break;
    case Op::exp: os << "exp("; print_node(*n.lhs, os, 0, false); os << ')'; break;
    case Op::sqrt: os << "sqrt("; print_node(*n.lhs, os, 0, false); os << ')'; break;
    case Op::abs: os << "abs("; print_node(*n.lhs, os, 0, false); os << ')'; break;
  }
  if (parens) os << ')';
}

bool nodes_equal(const Expression::Node& a, const Expression::Node& b) {
  if (a.op != b.op) return false;
  if (a.op == Op::num && a.value != b.value) return false;
  if ((a.lhs == nullptr) != (b.lhs == nullptr)) return false;
  if ((a.rhs == nullptr) != (b.rhs == nullptr)) return false;
  if (a.lhs && !nodes_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !nodes_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  return Expression(Parser(text).run());
}

double Expression::eval(double x, double y) const {
  if (!root_) throw Error("evaluating an empty expression");
  return eval_node(*root_, x, y);
}

bool Expression::uses_y() const { return root_ && node_uses_y(*root_); }

std::string Expression::to_string() const {
  if (!root_) return {};
  std::ostringstream os;
  print_node(*root_, os, 0, false);
  return os.str();
}

bool Expression::same_ast(const Expression& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return nodes_equal(*root_, *other.root_);
}

}  // namespace specmeasure::expr
