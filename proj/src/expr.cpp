#include "slag/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "slag/errors.hpp"

namespace slag {

struct Expression::Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Abs, Min, Max };
  Kind kind;
  double number = 0.0;
  char var = 0;
  std::vector<std::unique_ptr<Node>> args;

  double eval(const ExprVars& v) const {
    switch (kind) {
      case Kind::Number: return number;
      case Kind::Var:
        switch (var) {
          case 't': return v.t;
          case 'x': return v.x;
          case 'y': return v.y;
          default: return v.n;
        }
      case Kind::Neg: return -args[0]->eval(v);
      case Kind::Add: return args[0]->eval(v) + args[1]->eval(v);
      case Kind::Sub: return args[0]->eval(v) - args[1]->eval(v);
      case Kind::Mul: return args[0]->eval(v) * args[1]->eval(v);
      case Kind::Div: return args[0]->eval(v) / args[1]->eval(v);
      case Kind::Pow: return std::pow(args[0]->eval(v), args[1]->eval(v));
      case Kind::Sin: return std::sin(args[0]->eval(v));
      case Kind::Cos: return std::cos(args[0]->eval(v));
      case Kind::Exp: return std::exp(args[0]->eval(v));
      case Kind::Abs: return std::abs(args[0]->eval(v));
      case Kind::Min:
      case Kind::Max: {
        double r = args[0]->eval(v);
        for (std::size_t k = 1; k < args.size(); ++k) {
          const double a = args[k]->eval(v);
          r = kind == Kind::Min ? std::min(r, a) : std::max(r, a);
        }
        return r;
      }
    }
    return 0.0;
  }

  bool uses(char c) const {
    if (kind == Kind::Var && var == c) return true;
    for (const auto& a : args) {
      if (a->uses(c)) return true;
    }
    return false;
  }
};

namespace {

using Node = Expression::Node;
using Kind = Node::Kind;
using NodePtr = std::unique_ptr<Node>;

NodePtr make(Kind k, std::vector<NodePtr> args = {}) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}

NodePtr binary(Kind k, NodePtr a, NodePtr b) {
  std::vector<NodePtr> args;
  args.push_back(std::move(a));
  args.push_back(std::move(b));
  return make(k, std::move(args));
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parseAll() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("expression '" + std::string(s_) + "': " + what + " at position " +
                     std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Kind::Add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = binary(Kind::Sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Kind::Mul, std::move(lhs), unary());
      } else if (accept('/')) {
        lhs = binary(Kind::Div, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      std::vector<NodePtr> a;
      a.push_back(unary());
      return make(Kind::Neg, std::move(a));
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary(Kind::Pow, std::move(base), unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("malformed number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    auto n = make(Kind::Number);
    n->number = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    const std::string id(s_.substr(start, pos_ - start));
    if (id == "pi") {
      auto n = make(Kind::Number);
      n->number = std::numbers::pi;
      return n;
    }
    if (id == "t" || id == "x" || id == "y" || id == "n") {
      auto n = make(Kind::Var);
      n->var = id[0];
      return n;
    }
    Kind k;
    std::size_t minArgs = 1;
    std::size_t maxArgs = 1;
    if (id == "sin") {
      k = Kind::Sin;
    } else if (id == "cos") {
      k = Kind::Cos;
    } else if (id == "exp") {
      k = Kind::Exp;
    } else if (id == "abs") {
      k = Kind::Abs;
    } else if (id == "min" || id == "max") {
      k = id == "min" ? Kind::Min : Kind::Max;
      minArgs = 2;
      maxArgs = static_cast<std::size_t>(-1);
    } else {
      pos_ = start;
      fail("unknown name '" + id + "'");
    }
    if (!accept('(')) fail("expected '(' after " + id);
    std::vector<NodePtr> args;
    args.push_back(expr());
    while (accept(',')) args.push_back(expr());
    if (!accept(')')) fail("expected ')'");
    if (args.size() < minArgs || args.size() > maxArgs) fail("wrong number of arguments to " + id);
    return make(k, std::move(args));
  }
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.root_ = std::shared_ptr<const Node>(Parser(text).parseAll());
  e.text_ = std::string(text);
  return e;
}

double Expression::operator()(const ExprVars& v) const { return root_->eval(v); }

bool Expression::uses(char variable) const { return root_->uses(variable); }

double evaluate_constant(std::string_view text, int n) {
  const Expression e = Expression::parse(text);
  for (char c : {'t', 'x', 'y'}) {
    if (e.uses(c)) {
      throw InputError("expression '" + std::string(text) + "' must be constant (uses '" +
                       std::string(1, c) + "')");
    }
  }
  const double v = e(ExprVars{0.0, 0.0, 0.0, static_cast<double>(n)});
  if (!std::isfinite(v)) throw InputError("expression '" + std::string(text) + "' is not finite");
  return v;
}

}  // namespace slag
