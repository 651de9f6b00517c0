#pragma once

// Profile expression language. Grammar (docs/grammar.md):
//
//   expr     = term { ("+" | "-") term } ;
//   term     = unary { ("*" | "/") unary } ;
//   unary    = "-" unary | power ;
//   power    = primary { "^" exponent } ;
//   exponent = "-" exponent | primary ;          (must not depend on u)
//   primary  = number | "u" | identifier | function "(" expr ")" | "(" expr ")" ;
//
// Identifiers other than `u` and `pi` must be declared constants; their values
// are bound at evaluation time.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "cmc/errors.hpp"
#include "cmc/geometry.hpp"
#include "cmc/jet.hpp"

namespace cmc {

using ConstantMap = std::map<std::string, double, std::less<>>;
using ConstantNames = std::set<std::string, std::less<>>;

enum class NodeKind { Number, Variable, Constant, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Function { Sqrt, Sin, Cos, Sinh, Cosh, Exp, Ln, Abs };

inline constexpr std::array<std::pair<std::string_view, Function>, 8> kFunctions{{
    {"sqrt", Function::Sqrt},
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"sinh", Function::Sinh},
    {"cosh", Function::Cosh},
    {"exp", Function::Exp},
    {"ln", Function::Ln},
    {"abs", Function::Abs},
}};

constexpr std::string_view function_name(Function f) noexcept {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name;
  return "?";
}

inline std::optional<Function> lookup_function(std::string_view name) noexcept {
  for (const auto& [n, fn] : kFunctions)
    if (n == name) return fn;
  return std::nullopt;
}

struct Node {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;
  std::string name;             // Constant
  Function fn = Function::Sqrt; // Call
  std::shared_ptr<const Node> lhs;  // unary operand / call argument / left operand
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

inline bool structurally_equal(const Node* a, const Node* b) noexcept {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Number: return a->number == b->number;
    case NodeKind::Variable: return true;
    case NodeKind::Constant: return a->name == b->name;
    case NodeKind::Call:
      return a->fn == b->fn && structurally_equal(a->lhs.get(), b->lhs.get());
    default:
      return structurally_equal(a->lhs.get(), b->lhs.get()) &&
             structurally_equal(a->rhs.get(), b->rhs.get());
  }
}

namespace detail {

inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline void print_node(const Node& n, std::string& out) {
  auto binary = [&](char op) {
    out += '(';
    print_node(*n.lhs, out);
    out += op;
    print_node(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Number: out += format_number(n.number); break;
    case NodeKind::Variable: out += 'u'; break;
    case NodeKind::Constant: out += n.name; break;
    case NodeKind::Negate:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      break;
    case NodeKind::Add: binary('+'); break;
    case NodeKind::Sub: binary('-'); break;
    case NodeKind::Mul: binary('*'); break;
    case NodeKind::Div: binary('/'); break;
    case NodeKind::Pow: binary('^'); break;
    case NodeKind::Call:
      out += function_name(n.fn);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      break;
  }
}

inline bool depends_on_u(const Node& n) noexcept {
  if (n.kind == NodeKind::Variable) return true;
  return (n.lhs && depends_on_u(*n.lhs)) || (n.rhs && depends_on_u(*n.rhs));
}

}  // namespace detail

/// Immutable parsed expression.
class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const noexcept { return *root_; }
  bool empty() const noexcept { return !root_; }

  /// Canonical fully parenthesised form; parse(to_string()) reproduces the tree.
  std::string to_string() const {
    std::string out;
    if (root_) detail::print_node(*root_, out);
    return out;
  }

  bool depends_on_u() const noexcept { return root_ && detail::depends_on_u(*root_); }

  friend bool operator==(const Expr& a, const Expr& b) noexcept {
    return structurally_equal(a.root_.get(), b.root_.get());
  }

 private:
  NodePtr root_;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, const ConstantNames& constants)
      : text_(text), constants_(constants) {}

  Expr run() {
    skip_ws();
    if (pos_ == text_.size()) throw SyntaxError(pos_, "empty expression");
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return Expr(std::move(root));
  }

 private:
  static std::shared_ptr<Node> make(NodeKind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
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

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size())
        throw SyntaxError(pos_, std::string("expected '") + c + "' before end of input");
      throw SyntaxError(pos_, std::string("expected '") + c + "', found '" + text_[pos_] + "'");
    }
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = make(NodeKind::Add, lhs, parse_term());
      else if (accept('-')) lhs = make(NodeKind::Sub, lhs, parse_term());
      else return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (peek() == '*') {
        ++pos_;
        if (peek() == '*') throw SyntaxError(pos_, "'**' is not an operator; use '^'");
        lhs = make(NodeKind::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make(NodeKind::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(NodeKind::Negate, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    while (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      NodePtr exponent = parse_exponent();
      if (detail::depends_on_u(*exponent))
        throw SyntaxError(at, "exponent must not depend on u");
      base = make(NodeKind::Pow, base, exponent);
    }
    return base;
  }

  NodePtr parse_exponent() {
    if (accept('-')) return make(NodeKind::Negate, parse_exponent());
    return parse_primary();
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError(start, "malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        // Not an exponent after all: "2e" would be a number followed by an identifier.
        pos_ = save;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value))
      throw SyntaxError(start, "malformed number");
    auto n = make(NodeKind::Number);
    n->number = value;
    return n;
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    const bool call = peek() == '(';
    if (call) {
      auto fn = lookup_function(name);
      if (!fn)
        throw Error(ErrorCode::UnknownIdentifier,
                    "unknown function '" + std::string(name) + "' at byte " +
                        std::to_string(start));
      ++pos_;
      NodePtr arg = parse_expr();
      expect(')');
      auto n = make(NodeKind::Call, arg);
      n->fn = *fn;
      return n;
    }
    if (lookup_function(name))
      throw SyntaxError(pos_, "function '" + std::string(name) + "' needs an argument list");
    if (name == "u") return make(NodeKind::Variable);
    if (name == "pi" || constants_.count(name) > 0) {
      auto n = make(NodeKind::Constant);
      n->name = std::string(name);
      return n;
    }
    throw Error(ErrorCode::UnknownIdentifier, "unknown identifier '" + std::string(name) +
                                                  "' at byte " + std::to_string(start));
  }

  std::string_view text_;
  const ConstantNames& constants_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `text`. `constants` lists the names that may appear besides `u` and `pi`.
inline Expr parse(std::string_view text, const ConstantNames& constants = {}) {
  return detail::Parser(text, constants).run();
}

namespace detail {

inline Jet2 eval_node(const Node& n, double u, const ConstantMap& consts) {
  switch (n.kind) {
    case NodeKind::Number: return Jet2{n.number};
    case NodeKind::Variable: return Jet2::variable(u);
    case NodeKind::Constant: {
      if (auto it = consts.find(n.name); it != consts.end()) return Jet2{it->second};
      if (n.name == "pi") return Jet2{std::numbers::pi};
      throw Error(ErrorCode::UnknownIdentifier, "constant '" + n.name + "' is not bound");
    }
    case NodeKind::Negate: return -eval_node(*n.lhs, u, consts);
    case NodeKind::Add: return eval_node(*n.lhs, u, consts) + eval_node(*n.rhs, u, consts);
    case NodeKind::Sub: return eval_node(*n.lhs, u, consts) - eval_node(*n.rhs, u, consts);
    case NodeKind::Mul: return eval_node(*n.lhs, u, consts) * eval_node(*n.rhs, u, consts);
    case NodeKind::Div: {
      const Jet2 num = eval_node(*n.lhs, u, consts);
      const Jet2 den = eval_node(*n.rhs, u, consts);
      if (den.val == 0.0) throw DomainError(u, "division by zero");
      return num / den;
    }
    case NodeKind::Pow: {
      const Jet2 base = eval_node(*n.lhs, u, consts);
      const double p = eval_node(*n.rhs, u, consts).val;
      const bool integral = std::nearbyint(p) == p;
      if (integral) {
        if (base.val == 0.0 && p < 0.0) throw DomainError(u, "zero raised to a negative power");
      } else {
        if (base.val < 0.0) throw DomainError(u, "negative base with non-integer exponent");
        if (base.val == 0.0 && p < 2.0)
          throw DomainError(u, "zero base with non-integer exponent below 2");
      }
      return pow(base, p);
    }
    case NodeKind::Call: {
      const Jet2 x = eval_node(*n.lhs, u, consts);
      switch (n.fn) {
        case Function::Sqrt:
          if (x.val < 0.0) throw DomainError(u, "sqrt of negative argument");
          if (x.val == 0.0) throw DomainError(u, "sqrt is not differentiable at 0");
          return sqrt(x);
        case Function::Ln:
          if (x.val <= 0.0) throw DomainError(u, "ln of non-positive argument");
          return log(x);
        case Function::Abs:
          if (x.val == 0.0) throw DomainError(u, "abs is not differentiable at 0");
          return abs(x);
        case Function::Sin: return sin(x);
        case Function::Cos: return cos(x);
        case Function::Sinh: return sinh(x);
        case Function::Cosh: return cosh(x);
        case Function::Exp: return exp(x);
      }
    }
  }
  return {};
}

}  // namespace detail

/// Value, first and second u-derivative of `expr` at `u`.
inline Jet2 eval_jet(const Expr& expr, double u, const ConstantMap& consts = {}) {
  const Jet2 j = detail::eval_node(expr.root(), u, consts);
  if (!is_finite(j)) throw DomainError(u, "non-finite value or derivative");
  return j;
}

inline ConstantNames names_of(const ConstantMap& consts) {
  ConstantNames names;
  for (const auto& [k, v] : consts) names.insert(k);
  return names;
}

/// A parsed profile u -> r(u) (or f(u)) with bound constants.
class ProfileFunction {
 public:
  ProfileFunction() = default;
  ProfileFunction(Expr expr, ConstantMap consts, Interval domain = Interval::everything())
      : expr_(std::move(expr)), consts_(std::move(consts)), domain_(domain) {}

  static ProfileFunction from_text(std::string_view text, ConstantMap consts = {},
                                   Interval domain = Interval::everything()) {
    Expr e = parse(text, names_of(consts));
    return ProfileFunction(std::move(e), std::move(consts), domain);
  }

  Jet2 operator()(double u) const { return eval_jet(expr_, u, consts_); }

  const Expr& expr() const noexcept { return expr_; }
  const ConstantMap& constants() const noexcept { return consts_; }
  const Interval& domain() const noexcept { return domain_; }

 private:
  Expr expr_;
  ConstantMap consts_;
  Interval domain_;
};

}  // namespace cmc
