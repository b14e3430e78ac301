#pragma once

// A small closed arithmetic grammar for boundary data and phases:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Functions: sin cos exp abs (one argument), min max (two or more).
// Names: pi and the variables t x y n.

#include <memory>
#include <string>
#include <string_view>

namespace slag {

struct ExprVars {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double n = 0.0;
};

class Expression {
 public:
  struct Node;

  /// Throws InputError with the offending position on malformed input.
  static Expression parse(std::string_view text);

  double operator()(const ExprVars& v) const;
  const std::string& text() const { return text_; }
  /// True if the named variable occurs in the expression.
  bool uses(char variable) const;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

/// Parses and evaluates a constant expression (only n and pi may occur).
double evaluate_constant(std::string_view text, int n);

}  // namespace slag
