#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "axioquad/error.hpp"

namespace axioquad {

enum class NodeKind { constant, variable, negate, add, subtract, multiply, divide, power, call };

// Named functions. `sign` is an extra: the derivative of abs(u) is
// sign(u)*u', and printed derivatives must parse back.
enum class Builtin { sin, cos, tan, exp, ln, sqrt, abs, asin, acos, atan, sign };

[[nodiscard]] std::string_view builtin_name(Builtin f) noexcept;
[[nodiscard]] std::optional<Builtin> builtin_from_name(std::string_view name) noexcept;

struct Node;

// Immutable expression tree in the single variable `x`. Copies share
// structure; a default-constructed Expression is the constant 0.
class Expression {
 public:
  Expression();

  static Expression constant(double value);
  static Expression variable();
  static Expression negate(Expression operand);
  static Expression binary(NodeKind kind, Expression lhs, Expression rhs);
  static Expression call(Builtin function, Expression argument);

  [[nodiscard]] NodeKind kind() const noexcept;
  [[nodiscard]] double value() const noexcept;  // constant payload, 0 otherwise
  [[nodiscard]] Builtin function() const noexcept;
  [[nodiscard]] std::span<const Expression> children() const noexcept;

  [[nodiscard]] bool is_constant() const noexcept { return kind() == NodeKind::constant; }
  [[nodiscard]] bool is_constant(double v) const noexcept { return is_constant() && value() == v; }
  // True when no `x` occurs anywhere in the tree.
  [[nodiscard]] bool is_variable_free() const noexcept;

  [[nodiscard]] const Node* id() const noexcept { return node_.get(); }

 private:
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;
  Builtin function = Builtin::sin;
  std::vector<Expression> children;
  bool variable_free = true;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);

// Syntax error with the byte offset of the offending token and the set of
// tokens that would have been accepted there.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& message);
  [[nodiscard]] std::string_view kind() const noexcept override { return "syntax"; }
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
  [[nodiscard]] const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(std::size_t offset, std::string identifier);
  [[nodiscard]] std::string_view kind() const noexcept override { return "unknown-identifier"; }
  [[nodiscard]] const std::string& identifier() const noexcept { return identifier_; }

 private:
  std::string identifier_;
};

// Evaluation left the domain of an operation (sqrt of a negative, ln of a
// non-positive, division by zero, ...). Carries the printed subexpression.
class DomainError : public Error {
 public:
  DomainError(std::string subexpression, double x, const std::string& what);
  [[nodiscard]] std::string_view kind() const noexcept override { return "domain"; }
  [[nodiscard]] const std::string& subexpression() const noexcept { return subexpression_; }
  [[nodiscard]] double x() const noexcept { return x_; }

 private:
  std::string subexpression_;
  double x_;
};

// An in-domain operation overflowed to inf.
class NonFiniteError : public Error {
 public:
  NonFiniteError(std::string subexpression, double x);
  [[nodiscard]] std::string_view kind() const noexcept override { return "non-finite"; }
  [[nodiscard]] const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

// Grammar:
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := NUMBER | 'x' | IDENT '(' expr ')' | '(' expr ')'
[[nodiscard]] Expression parse(std::string_view source);

// Tree-walking evaluation; the order of operations follows the tree shape.
[[nodiscard]] double evaluate(const Expression& e, double x);

// Symbolic derivative with respect to x, lightly simplified.
[[nodiscard]] Expression differentiate(const Expression& e);

// Prints a string that parses back to the same tree shape (negative
// constants excepted: they come back as negate(constant), which evaluates
// identically).
[[nodiscard]] std::string to_string(const Expression& e);

// Flat postfix program for repeated evaluation. Same arithmetic, same
// error reporting as `evaluate`, without the pointer chasing.
class CompiledExpression {
 public:
  CompiledExpression() = default;
  explicit CompiledExpression(const Expression& e);

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] const Expression& source() const noexcept { return source_; }

 private:
  struct Instruction {
    NodeKind kind;
    Builtin function;
    double value;
    const Node* node;
  };
  [[noreturn]] void fail(const Instruction& ins, double x, double result, bool domain) const;

  Expression source_;
  std::vector<Instruction> program_;
  std::size_t max_depth_ = 0;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  [[nodiscard]] bool contains(double t) const noexcept { return lo <= t && t <= hi; }
  [[nodiscard]] double width() const noexcept { return hi - lo; }
};

// A real function on a closed interval with optional user-supplied
// derivative and antiderivative. Construction checks that the body is
// finite on a sample grid and that a supplied derivative agrees with the
// symbolic one.
class Function {
 public:
  Function(Expression body, Interval domain, std::optional<Expression> derivative = std::nullopt,
           std::optional<Expression> antiderivative = std::nullopt);

  static Function from_source(std::string_view body, Interval domain,
                              std::optional<std::string_view> derivative = std::nullopt,
                              std::optional<std::string_view> antiderivative = std::nullopt);

  [[nodiscard]] double operator()(double x) const { return body_eval_(x); }
  [[nodiscard]] double derivative_at(double x) const { return derivative_eval_(x); }
  [[nodiscard]] double antiderivative_at(double x) const;

  [[nodiscard]] const Expression& body() const noexcept { return body_; }
  // User-supplied derivative when given, otherwise the symbolic one.
  [[nodiscard]] const Expression& derivative() const noexcept { return derivative_; }
  [[nodiscard]] bool derivative_supplied() const noexcept { return derivative_supplied_; }
  [[nodiscard]] const std::optional<Expression>& antiderivative() const noexcept { return antiderivative_; }
  [[nodiscard]] bool has_antiderivative() const noexcept { return antiderivative_.has_value(); }
  [[nodiscard]] const Interval& domain() const noexcept { return domain_; }

  [[nodiscard]] Function with_domain(Interval domain) const;
  [[nodiscard]] Function without_antiderivative() const;

 private:
  Expression body_;
  Expression derivative_;
  bool derivative_supplied_ = false;
  std::optional<Expression> antiderivative_;
  Interval domain_;
  CompiledExpression body_eval_;
  CompiledExpression derivative_eval_;
  std::optional<CompiledExpression> antiderivative_eval_;
};

}  // namespace axioquad
