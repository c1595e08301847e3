#include "cutloc/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <utility>
#include <vector>

#include "cutloc/errors.hpp"

namespace cutloc {

enum class NodeKind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };

struct ExprNode {
  NodeKind kind;
  double number = 0.0;
  int exponent = 0;
  Function function = Function::Exp;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 8> kFunctions{{
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"sqrt", Function::Sqrt},
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"sinh", Function::Sinh},
    {"cosh", Function::Cosh},
    {"tanh", Function::Tanh},
}};

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(NodeKind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

Jet2 evaluate(const ExprNode& n, double t) {
  switch (n.kind) {
    case NodeKind::Number:
      return Jet2::constant(n.number);
    case NodeKind::Variable:
      return Jet2::variable(t);
    case NodeKind::Negate:
      return -evaluate(*n.lhs, t);
    case NodeKind::Add:
      return evaluate(*n.lhs, t) + evaluate(*n.rhs, t);
    case NodeKind::Subtract:
      return evaluate(*n.lhs, t) - evaluate(*n.rhs, t);
    case NodeKind::Multiply:
      return evaluate(*n.lhs, t) * evaluate(*n.rhs, t);
    case NodeKind::Divide: {
      const Jet2 num = evaluate(*n.lhs, t);
      const Jet2 den = evaluate(*n.rhs, t);
      if (den.value == 0.0) throw EvaluationDomainError(t, "division by zero");
      return num / den;
    }
    case NodeKind::Power: {
      const Jet2 base = evaluate(*n.lhs, t);
      if (n.exponent < 0 && base.value == 0.0)
        throw EvaluationDomainError(t, "zero raised to a negative power");
      return pow(base, n.exponent);
    }
    case NodeKind::Call: {
      const Jet2 u = evaluate(*n.lhs, t);
      switch (n.function) {
        case Function::Exp:
          return exp(u);
        case Function::Log:
          if (!(u.value > 0.0)) throw EvaluationDomainError(t, "log of non-positive argument");
          return log(u);
        case Function::Sqrt:
          if (!(u.value > 0.0))
            throw EvaluationDomainError(t, "sqrt of non-positive argument (derivative undefined)");
          return sqrt(u);
        case Function::Sin:
          return sin(u);
        case Function::Cos:
          return cos(u);
        case Function::Sinh:
          return sinh(u);
        case Function::Cosh:
          return cosh(u);
        case Function::Tanh:
          return tanh(u);
      }
    }
  }
  throw EvaluationDomainError(t, "corrupt expression node");
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_infix(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Number:
      out += format_number(n.number);
      return;
    case NodeKind::Variable:
      out += 't';
      return;
    case NodeKind::Negate:
      out += "(-";
      print_infix(*n.lhs, out);
      out += ')';
      return;
    case NodeKind::Add:
    case NodeKind::Subtract:
    case NodeKind::Multiply:
    case NodeKind::Divide: {
      static constexpr char ops[] = {'+', '-', '*', '/'};
      out += '(';
      print_infix(*n.lhs, out);
      out += ops[static_cast<int>(n.kind) - static_cast<int>(NodeKind::Add)];
      print_infix(*n.rhs, out);
      out += ')';
      return;
    }
    case NodeKind::Power:
      out += '(';
      print_infix(*n.lhs, out);
      out += '^';
      if (n.exponent < 0) out += '-';
      out += std::to_string(n.exponent < 0 ? -n.exponent : n.exponent);
      out += ')';
      return;
    case NodeKind::Call:
      out += function_name(n.function);
      out += '(';
      print_infix(*n.lhs, out);
      out += ')';
      return;
  }
}

void print_prefix(const ExprNode& n, std::string& out) {
  auto binary = [&](const char* name) {
    out += name;
    out += '(';
    print_prefix(*n.lhs, out);
    out += ',';
    print_prefix(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Number:
      out += format_number(n.number);
      return;
    case NodeKind::Variable:
      out += 't';
      return;
    case NodeKind::Negate:
      out += "neg(";
      print_prefix(*n.lhs, out);
      out += ')';
      return;
    case NodeKind::Add:
      return binary("add");
    case NodeKind::Subtract:
      return binary("sub");
    case NodeKind::Multiply:
      return binary("mul");
    case NodeKind::Divide:
      return binary("div");
    case NodeKind::Power:
      out += "pow(";
      print_prefix(*n.lhs, out);
      out += ',';
      out += std::to_string(n.exponent);
      out += ')';
      return;
    case NodeKind::Call:
      out += function_name(n.function);
      out += '(';
      print_prefix(*n.lhs, out);
      out += ')';
      return;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    skip_space();
    if (pos_ == src_.size()) throw SyntaxError(pos_, "empty expression");
    NodePtr e = parse_expr();
    skip_space();
    if (pos_ != src_.size()) throw SyntaxError(pos_, std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size())
        throw SyntaxError(pos_, std::string("expected '") + c + "' but reached end of input");
      throw SyntaxError(pos_, std::string("expected '") + c + "'");
    }
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make(NodeKind::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make(NodeKind::Subtract, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = make(NodeKind::Multiply, lhs, parse_factor());
      } else if (accept('/')) {
        lhs = make(NodeKind::Divide, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    if (accept('-')) return make(NodeKind::Negate, parse_factor());
    NodePtr base = parse_atom();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < src_.size() && src_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    int exponent = 0;
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc() || ptr == first) throw SyntaxError(start, "expected integer exponent");
    pos_ += static_cast<std::size_t>(ptr - first);
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
      throw SyntaxError(start, "exponent must be an integer");
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Power;
    n->exponent = negative ? -exponent : exponent;
    n->lhs = std::move(base);
    return n;
  }

  NodePtr parse_atom() {
    skip_space();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (accept('(')) {
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
    if (ec != std::errc() || ptr == first) throw SyntaxError(start, "malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Number;
    n->number = value;
    return n;
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    skip_space();
    const bool is_call = pos_ < src_.size() && src_[pos_] == '(';
    if (!is_call) {
      if (name == "t") return make(NodeKind::Variable);
      throw SyntaxError(start, "unknown identifier '" + std::string(name) + "'");
    }
    const Function* fn = nullptr;
    for (const auto& [fname, f] : kFunctions)
      if (fname == name) fn = &f;
    if (fn == nullptr) throw UnknownFunction(start, std::string(name));

    expect('(');
    std::vector<NodePtr> args;
    if (!accept(')')) {
      args.push_back(parse_expr());
      while (accept(',')) args.push_back(parse_expr());
      expect(')');
    }
    if (args.size() != 1) throw ArityMismatch(start, std::string(name), args.size());
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Call;
    n->function = *fn;
    n->lhs = std::move(args.front());
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view function_name(Function f) {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name;
  return "?";
}

Expression Expression::number(double value) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Number;
  n->number = value;
  return Expression(std::move(n));
}

Expression Expression::variable() { return Expression(make(NodeKind::Variable)); }

Expression Expression::negate(Expression operand) {
  return Expression(make(NodeKind::Negate, std::move(operand.root_)));
}

Expression Expression::add(Expression lhs, Expression rhs) {
  return Expression(make(NodeKind::Add, std::move(lhs.root_), std::move(rhs.root_)));
}

Expression Expression::subtract(Expression lhs, Expression rhs) {
  return Expression(make(NodeKind::Subtract, std::move(lhs.root_), std::move(rhs.root_)));
}

Expression Expression::multiply(Expression lhs, Expression rhs) {
  return Expression(make(NodeKind::Multiply, std::move(lhs.root_), std::move(rhs.root_)));
}

Expression Expression::divide(Expression lhs, Expression rhs) {
  return Expression(make(NodeKind::Divide, std::move(lhs.root_), std::move(rhs.root_)));
}

Expression Expression::power(Expression base, int exponent) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Power;
  n->exponent = exponent;
  n->lhs = std::move(base.root_);
  return Expression(std::move(n));
}

Expression Expression::call(Function f, Expression argument) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Call;
  n->function = f;
  n->lhs = std::move(argument.root_);
  return Expression(std::move(n));
}

Jet2 Expression::eval_jet(double t) const {
  const Jet2 j = evaluate(*root_, t);
  if (!j.finite()) throw NonFiniteResult(t);
  return j;
}

std::string Expression::to_string() const {
  std::string out;
  print_infix(*root_, out);
  return out;
}

std::string Expression::to_sexpr() const {
  std::string out;
  print_prefix(*root_, out);
  return out;
}

Expression parse(std::string_view source) {
  Parser p(source);
  return Expression(p.parse_all());
}

}  // namespace cutloc
