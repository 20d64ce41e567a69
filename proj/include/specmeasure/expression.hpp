#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "specmeasure/errors.hpp"

namespace specmeasure::expr {

/// A parsed closed-form expression in the variables x and y.
///
/// Grammar: numbers, x, y, pi, + - * / ^ (right-assoc), unary minus and the
/// functions sin, cos, exp, sqrt, abs. Standard precedence with ^ binding
/// tighter than unary minus. Immutable and cheap to copy.
class Expression {
 public:
  Expression() = default;

  static Expression parse(std::string_view text);  // throws ParseError

  double eval(double x, double y = 0.0) const;
  bool uses_y() const;
  bool empty() const { return root_ == nullptr; }

  /// Canonical text form; parse(to_string()) reproduces the same AST.
  std::string to_string() const;

  bool same_ast(const Expression& other) const;

 public:
  struct Node;

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace specmeasure::expr
