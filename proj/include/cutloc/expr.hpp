#pragma once

// Warping-function expressions in the single variable t.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' integer)? | '-' factor
//   atom   := number | 't' | ident '(' expr ')' | '(' expr ')'
//
// Functions: exp log sqrt sin cos sinh cosh tanh. Evaluation produces a
// Jet2 (value, d/dt, d²/dt²) in one pass.

#include <memory>
#include <string>
#include <string_view>

#include "cutloc/jet.hpp"

namespace cutloc {

enum class Function { Exp, Log, Sqrt, Sin, Cos, Sinh, Cosh, Tanh };

std::string_view function_name(Function f);

struct ExprNode;

/// Immutable expression tree; cheap to copy (shared ownership of nodes).
class Expression {
 public:
  static Expression number(double value);
  static Expression variable();
  static Expression negate(Expression operand);
  static Expression add(Expression lhs, Expression rhs);
  static Expression subtract(Expression lhs, Expression rhs);
  static Expression multiply(Expression lhs, Expression rhs);
  static Expression divide(Expression lhs, Expression rhs);
  static Expression power(Expression base, int exponent);
  static Expression call(Function f, Expression argument);

  /// Value and first two derivatives at t. Throws EvaluationDomainError.
  Jet2 eval_jet(double t) const;
  double eval(double t) const { return eval_jet(t).value; }

  /// Infix form that parses back to an equivalent tree.
  std::string to_string() const;
  /// Prefix form such as exp(neg(pow(t,2))), used for structural checks.
  std::string to_sexpr() const;

 private:
  friend Expression parse(std::string_view source);
  explicit Expression(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}
  std::shared_ptr<const ExprNode> root_;
};

/// Throws SyntaxError (with byte offset), UnknownFunction, ArityMismatch.
Expression parse(std::string_view source);

inline Jet2 eval_jet(const Expression& e, double t) { return e.eval_jet(t); }

}  // namespace cutloc
