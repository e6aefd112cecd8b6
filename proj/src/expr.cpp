#include "axioquad/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace axioquad {

namespace {

constexpr std::array<std::pair<std::string_view, Builtin>, 11> kBuiltins{{
    {"sin", Builtin::sin},
    {"cos", Builtin::cos},
    {"tan", Builtin::tan},
    {"exp", Builtin::exp},
    {"ln", Builtin::ln},
    {"sqrt", Builtin::sqrt},
    {"abs", Builtin::abs},
    {"asin", Builtin::asin},
    {"acos", Builtin::acos},
    {"atan", Builtin::atan},
    {"sign", Builtin::sign},
}};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view builtin_name(Builtin f) noexcept {
  for (const auto& [name, id] : kBuiltins)
    if (id == f) return name;
  return "?";
}

std::optional<Builtin> builtin_from_name(std::string_view name) noexcept {
  for (const auto& [n, id] : kBuiltins)
    if (n == name) return id;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Expression

Expression::Expression() : Expression(constant(0.0)) {}

Expression Expression::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::constant;
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::variable() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::variable;
  n->variable_free = false;
  return Expression(std::move(n));
}

Expression Expression::negate(Expression operand) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::negate;
  n->variable_free = operand.is_variable_free();
  n->children.push_back(std::move(operand));
  return Expression(std::move(n));
}

Expression Expression::binary(NodeKind kind, Expression lhs, Expression rhs) {
  if (kind != NodeKind::add && kind != NodeKind::subtract && kind != NodeKind::multiply &&
      kind != NodeKind::divide && kind != NodeKind::power)
    throw PreconditionError("Expression::binary: not a binary operator");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->variable_free = lhs.is_variable_free() && rhs.is_variable_free();
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expression(std::move(n));
}

Expression Expression::call(Builtin function, Expression argument) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::call;
  n->function = function;
  n->variable_free = argument.is_variable_free();
  n->children.push_back(std::move(argument));
  return Expression(std::move(n));
}

NodeKind Expression::kind() const noexcept { return node_->kind; }
double Expression::value() const noexcept { return node_->value; }
Builtin Expression::function() const noexcept { return node_->function; }
std::span<const Expression> Expression::children() const noexcept { return node_->children; }
bool Expression::is_variable_free() const noexcept { return node_->variable_free; }

Expression operator+(const Expression& a, const Expression& b) { return Expression::binary(NodeKind::add, a, b); }
Expression operator-(const Expression& a, const Expression& b) { return Expression::binary(NodeKind::subtract, a, b); }
Expression operator*(const Expression& a, const Expression& b) { return Expression::binary(NodeKind::multiply, a, b); }
Expression operator/(const Expression& a, const Expression& b) { return Expression::binary(NodeKind::divide, a, b); }
Expression operator-(const Expression& a) { return Expression::negate(a); }

// ---------------------------------------------------------------------------
// Errors

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& message)
    : Error(message), offset_(offset), expected_(std::move(expected)) {}

UnknownIdentifierError::UnknownIdentifierError(std::size_t offset, std::string identifier)
    : ParseError(offset, {}, "unknown identifier '" + identifier + "' at offset " + std::to_string(offset)),
      identifier_(std::move(identifier)) {}

DomainError::DomainError(std::string subexpression, double x, const std::string& what)
    : Error(what + " in '" + subexpression + "' at x = " + format_number(x)),
      subexpression_(std::move(subexpression)),
      x_(x) {}

NonFiniteError::NonFiniteError(std::string subexpression, double x)
    : Error("non-finite result of '" + subexpression + "' at x = " + format_number(x)),
      subexpression_(std::move(subexpression)) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok type;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::number: return "number";
    case Tok::ident: return "identifier";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::star: return "'*'";
    case Tok::slash: return "'/'";
    case Tok::caret: return "'^'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::end: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::end, pos_, {}});
        return out;
      }
      const char c = src_[pos_];
      const std::size_t start = pos_;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(number(start));
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          ++pos_;
        out.push_back({Tok::ident, start, src_.substr(start, pos_ - start)});
        continue;
      }
      Tok t;
      switch (c) {
        case '+': t = Tok::plus; break;
        case '-': t = Tok::minus; break;
        case '*': t = Tok::star; break;
        case '/': t = Tok::slash; break;
        case '^': t = Tok::caret; break;
        case '(': t = Tok::lparen; break;
        case ')': t = Tok::rparen; break;
        default:
          throw ParseError(start, {}, "unexpected character '" + std::string(1, c) + "' at offset " +
                                          std::to_string(start));
      }
      ++pos_;
      out.push_back({t, start, src_.substr(start, 1)});
    }
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError(start, {"digit"}, "malformed number at offset " + std::to_string(start));
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // `2e` is the number 2 followed by identifier e
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || !std::isfinite(v))
      throw ParseError(start, {"finite number"}, "number out of range at offset " + std::to_string(start));
    return {Tok::number, start, text, v};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Expression parse_all() {
    Expression e = expr();
    expect_one_of(Tok::end, {Tok::plus, Tok::minus, Tok::star, Tok::slash, Tok::caret, Tok::end});
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::initializer_list<Tok> expected) const {
    std::vector<std::string> names;
    for (Tok t : expected) names.push_back(describe(t));
    const Token& t = peek();
    const std::string found = t.type == Tok::end ? "end of input" : "'" + std::string(t.text) + "'";
    throw ParseError(t.offset, names,
                     "syntax error at offset " + std::to_string(t.offset) + ": found " + found +
                         ", expected one of " + join(names));
  }

  void expect_one_of(Tok want, std::initializer_list<Tok> expected) {
    if (peek().type != want) fail(expected);
    advance();
  }

  Expression expr() {
    Expression lhs = term();
    while (peek().type == Tok::plus || peek().type == Tok::minus) {
      const NodeKind k = advance().type == Tok::plus ? NodeKind::add : NodeKind::subtract;
      lhs = Expression::binary(k, lhs, term());
    }
    return lhs;
  }

  Expression term() {
    Expression lhs = unary();
    while (peek().type == Tok::star || peek().type == Tok::slash) {
      const NodeKind k = advance().type == Tok::star ? NodeKind::multiply : NodeKind::divide;
      lhs = Expression::binary(k, lhs, unary());
    }
    return lhs;
  }

  Expression unary() {
    if (peek().type == Tok::minus) {
      advance();
      return Expression::negate(unary());
    }
    return power();
  }

  Expression power() {
    Expression base = atom();
    if (peek().type == Tok::caret) {
      advance();
      return Expression::binary(NodeKind::power, base, unary());
    }
    return base;
  }

  Expression atom() {
    const Token& t = peek();
    switch (t.type) {
      case Tok::number:
        advance();
        return Expression::constant(t.number);
      case Tok::ident: {
        if (t.text == "x") {
          advance();
          return Expression::variable();
        }
        const auto f = builtin_from_name(t.text);
        if (!f) throw UnknownIdentifierError(t.offset, std::string(t.text));
        advance();
        expect_one_of(Tok::lparen, {Tok::lparen});
        Expression arg = expr();
        expect_one_of(Tok::rparen, {Tok::rparen, Tok::plus, Tok::minus, Tok::star, Tok::slash, Tok::caret});
        return Expression::call(*f, arg);
      }
      case Tok::lparen: {
        advance();
        Expression inner = expr();
        expect_one_of(Tok::rparen, {Tok::rparen, Tok::plus, Tok::minus, Tok::star, Tok::slash, Tok::caret});
        return inner;
      }
      default:
        fail({Tok::number, Tok::ident, Tok::lparen, Tok::minus});
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse(std::string_view source) { return Parser(Lexer(source).run()).parse_all(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

// Applies one operation. Returns false when the operands are outside the
// operation's domain; the result is then unspecified.
inline bool apply_builtin(Builtin f, double u, double& out) {
  switch (f) {
    case Builtin::sin: out = std::sin(u); return true;
    case Builtin::cos: out = std::cos(u); return true;
    case Builtin::tan: out = std::tan(u); return true;
    case Builtin::exp: out = std::exp(u); return true;
    case Builtin::ln: out = std::log(u); return u > 0.0;
    case Builtin::sqrt: out = std::sqrt(u); return u >= 0.0;
    case Builtin::abs: out = std::fabs(u); return true;
    case Builtin::asin: out = std::asin(u); return u >= -1.0 && u <= 1.0;
    case Builtin::acos: out = std::acos(u); return u >= -1.0 && u <= 1.0;
    case Builtin::atan: out = std::atan(u); return true;
    case Builtin::sign: out = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0); return true;
  }
  return false;
}

inline bool apply_binary(NodeKind k, double a, double b, double& out) {
  switch (k) {
    case NodeKind::add: out = a + b; return true;
    case NodeKind::subtract: out = a - b; return true;
    case NodeKind::multiply: out = a * b; return true;
    case NodeKind::divide: out = a / b; return b != 0.0;
    case NodeKind::power:
      out = std::pow(a, b);
      if (a == 0.0 && b < 0.0) return false;
      return !(a < 0.0 && std::isfinite(b) && std::trunc(b) != b);
    default: return false;
  }
}

std::string_view domain_reason(NodeKind k, Builtin f) {
  if (k == NodeKind::divide) return "division by zero";
  if (k == NodeKind::power) return "power outside its domain";
  switch (f) {
    case Builtin::ln: return "logarithm of a non-positive number";
    case Builtin::sqrt: return "square root of a negative number";
    case Builtin::asin:
    case Builtin::acos: return "inverse sine/cosine outside [-1, 1]";
    default: return "domain error";
  }
}

double eval_node(const Expression& e, double x) {
  double out = 0.0;
  bool ok = true;
  switch (e.kind()) {
    case NodeKind::constant: return e.value();
    case NodeKind::variable: return x;
    case NodeKind::negate: out = -eval_node(e.children()[0], x); break;
    case NodeKind::call: ok = apply_builtin(e.function(), eval_node(e.children()[0], x), out); break;
    default: {
      const double a = eval_node(e.children()[0], x);
      const double b = eval_node(e.children()[1], x);
      ok = apply_binary(e.kind(), a, b, out);
    }
  }
  if (!ok) throw DomainError(to_string(e), x, std::string(domain_reason(e.kind(), e.function())));
  if (!std::isfinite(out)) throw NonFiniteError(to_string(e), x);
  return out;
}

}  // namespace

double evaluate(const Expression& e, double x) {
  if (!std::isfinite(x)) throw PreconditionError("evaluate: x must be finite");
  return eval_node(e, x);
}

// ---------------------------------------------------------------------------
// Compiled form

CompiledExpression::CompiledExpression(const Expression& e) : source_(e) {
  std::size_t depth = 0;
  auto emit = [&](auto&& self, const Expression& n) -> void {
    for (const auto& c : n.children()) self(self, c);
    switch (n.kind()) {
      case NodeKind::constant:
      case NodeKind::variable: ++depth; break;
      case NodeKind::negate:
      case NodeKind::call: break;
      default: --depth;
    }
    max_depth_ = std::max(max_depth_, depth);
    program_.push_back({n.kind(), n.function(), n.value(), n.id()});
  };
  emit(emit, e);
}

void CompiledExpression::fail(const Instruction& ins, double x, double result, bool domain) const {
  // Re-locate the node to print it; programs are small and this is the
  // error path.
  std::string text = "?";
  auto find = [&](auto&& self, const Expression& n) -> bool {
    if (n.id() == ins.node) {
      text = to_string(n);
      return true;
    }
    for (const auto& c : n.children())
      if (self(self, c)) return true;
    return false;
  };
  find(find, source_);
  (void)result;
  if (domain) throw DomainError(text, x, std::string(domain_reason(ins.kind, ins.function)));
  throw NonFiniteError(text, x);
}

double CompiledExpression::operator()(double x) const {
  if (!std::isfinite(x)) throw PreconditionError("evaluate: x must be finite");
  constexpr std::size_t kInline = 32;
  double inline_stack[kInline] = {};
  std::vector<double> heap;
  double* stack = inline_stack;
  if (max_depth_ > kInline) {
    heap.resize(max_depth_);
    stack = heap.data();
  }
  std::size_t sp = 0;
  for (const Instruction& ins : program_) {
    double out = 0.0;
    bool ok = true;
    switch (ins.kind) {
      case NodeKind::constant: stack[sp++] = ins.value; continue;
      case NodeKind::variable: stack[sp++] = x; continue;
      case NodeKind::negate: stack[sp - 1] = -stack[sp - 1]; continue;
      case NodeKind::call: ok = apply_builtin(ins.function, stack[sp - 1], out); break;
      default:
        --sp;
        ok = apply_binary(ins.kind, stack[sp - 1], stack[sp], out);
    }
    if (!ok || !std::isfinite(out)) fail(ins, x, out, !ok);
    stack[sp - 1] = out;
  }
  return stack[0];
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Expression& e) {
  switch (e.kind()) {
    case NodeKind::constant: {
      const std::string s = format_number(e.value());
      return e.value() < 0.0 || std::signbit(e.value()) ? "(" + s + ")" : s;
    }
    case NodeKind::variable: return "x";
    case NodeKind::negate: return "(-" + to_string(e.children()[0]) + ")";
    case NodeKind::call:
      return std::string(builtin_name(e.function())) + "(" + to_string(e.children()[0]) + ")";
    default: break;
  }
  const char* op = "?";
  switch (e.kind()) {
    case NodeKind::add: op = "+"; break;
    case NodeKind::subtract: op = "-"; break;
    case NodeKind::multiply: op = "*"; break;
    case NodeKind::divide: op = "/"; break;
    case NodeKind::power: op = "^"; break;
    default: break;
  }
  return "(" + to_string(e.children()[0]) + op + to_string(e.children()[1]) + ")";
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expression fold_or(NodeKind k, const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) {
    double out;
    if (apply_binary(k, a.value(), b.value(), out) && std::isfinite(out)) return Expression::constant(out);
  }
  return Expression::binary(k, a, b);
}

Expression add(const Expression& a, const Expression& b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return fold_or(NodeKind::add, a, b);
}

Expression neg(const Expression& a) {
  if (a.is_constant()) return Expression::constant(-a.value());
  if (a.kind() == NodeKind::negate) return a.children()[0];
  return Expression::negate(a);
}

Expression sub(const Expression& a, const Expression& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return neg(b);
  return fold_or(NodeKind::subtract, a, b);
}

Expression mul(const Expression& a, const Expression& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expression::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return fold_or(NodeKind::multiply, a, b);
}

Expression div(const Expression& a, const Expression& b) {
  if (a.is_constant(0.0)) return Expression::constant(0.0);
  if (b.is_constant(1.0)) return a;
  return fold_or(NodeKind::divide, a, b);
}

Expression pow(const Expression& a, const Expression& b) {
  if (b.is_constant(1.0)) return a;
  if (b.is_constant(0.0)) return Expression::constant(1.0);
  return fold_or(NodeKind::power, a, b);
}

Expression fn(Builtin f, const Expression& u) { return Expression::call(f, u); }

const Expression kOne = Expression::constant(1.0);
const Expression kTwo = Expression::constant(2.0);

Expression d(const Expression& e) {
  if (e.is_variable_free()) return Expression::constant(0.0);
  switch (e.kind()) {
    case NodeKind::constant: return Expression::constant(0.0);
    case NodeKind::variable: return kOne;
    case NodeKind::negate: return neg(d(e.children()[0]));
    default: break;
  }
  if (e.kind() == NodeKind::call) {
    const Expression& u = e.children()[0];
    const Expression du = d(u);
    switch (e.function()) {
      case Builtin::sin: return mul(fn(Builtin::cos, u), du);
      case Builtin::cos: return mul(neg(fn(Builtin::sin, u)), du);
      case Builtin::tan: return div(du, pow(fn(Builtin::cos, u), kTwo));
      case Builtin::exp: return mul(e, du);
      case Builtin::ln: return div(du, u);
      case Builtin::sqrt: return div(du, mul(kTwo, e));
      case Builtin::abs: return mul(fn(Builtin::sign, u), du);
      case Builtin::asin: return div(du, fn(Builtin::sqrt, sub(kOne, pow(u, kTwo))));
      case Builtin::acos: return neg(div(du, fn(Builtin::sqrt, sub(kOne, pow(u, kTwo)))));
      case Builtin::atan: return div(du, add(kOne, pow(u, kTwo)));
      case Builtin::sign: return Expression::constant(0.0);
    }
  }
  const Expression& u = e.children()[0];
  const Expression& v = e.children()[1];
  switch (e.kind()) {
    case NodeKind::add: return add(d(u), d(v));
    case NodeKind::subtract: return sub(d(u), d(v));
    case NodeKind::multiply: return add(mul(d(u), v), mul(u, d(v)));
    case NodeKind::divide: return div(sub(mul(d(u), v), mul(u, d(v))), pow(v, kTwo));
    case NodeKind::power:
      if (v.is_variable_free()) return mul(mul(v, pow(u, sub(v, kOne))), d(u));
      // u^v = exp(v ln u)
      return mul(e, add(mul(d(v), fn(Builtin::ln, u)), div(mul(v, d(u)), u)));
    default: break;
  }
  throw PreconditionError("differentiate: malformed expression");
}

}  // namespace

Expression differentiate(const Expression& e) { return d(e); }

// ---------------------------------------------------------------------------
// Function

namespace {

constexpr int kCheckPoints = 17;

}  // namespace

Function::Function(Expression body, Interval domain, std::optional<Expression> derivative,
                   std::optional<Expression> antiderivative)
    : body_(std::move(body)),
      derivative_supplied_(derivative.has_value()),
      antiderivative_(std::move(antiderivative)),
      domain_(domain) {
  if (!std::isfinite(domain_.lo) || !std::isfinite(domain_.hi) || !(domain_.lo < domain_.hi))
    throw PreconditionError("function domain must be a finite interval [a, b] with a < b");
  derivative_ = derivative_supplied_ ? *derivative : differentiate(body_);
  body_eval_ = CompiledExpression(body_);
  derivative_eval_ = CompiledExpression(derivative_);
  if (antiderivative_) antiderivative_eval_.emplace(*antiderivative_);

  const std::optional<CompiledExpression> symbolic_eval =
      derivative_supplied_ ? std::optional(CompiledExpression(differentiate(body_))) : std::nullopt;
  for (int i = 0; i < kCheckPoints; ++i) {
    const double t = i == kCheckPoints - 1 ? domain_.hi
                                           : domain_.lo + i * (domain_.width() / (kCheckPoints - 1));
    (void)body_eval_(t);  // continuity prerequisite: throws on non-finite
    if (derivative_supplied_) {
      double symbolic;
      try {
        symbolic = (*symbolic_eval)(t);
      } catch (const Error&) {
        continue;
      }
      const double given = derivative_eval_(t);
      if (std::fabs(given - symbolic) > 1e-8 * (1.0 + std::fabs(symbolic)))
        throw PreconditionError("supplied derivative disagrees with the symbolic derivative at x = " +
                                format_number(t));
    }
  }
}

Function Function::from_source(std::string_view body, Interval domain, std::optional<std::string_view> derivative,
                               std::optional<std::string_view> antiderivative) {
  std::optional<Expression> d, r;
  if (derivative) d = parse(*derivative);
  if (antiderivative) r = parse(*antiderivative);
  return Function(parse(body), domain, std::move(d), std::move(r));
}

double Function::antiderivative_at(double x) const {
  if (!antiderivative_eval_) throw PreconditionError("function has no antiderivative");
  return (*antiderivative_eval_)(x);
}

Function Function::with_domain(Interval domain) const {
  return Function(body_, domain, derivative_supplied_ ? std::optional(derivative_) : std::nullopt, antiderivative_);
}

Function Function::without_antiderivative() const {
  return Function(body_, domain_, derivative_supplied_ ? std::optional(derivative_) : std::nullopt, std::nullopt);
}

}  // namespace axioquad
