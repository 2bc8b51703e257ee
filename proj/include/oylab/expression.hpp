#pragma once

// Recursive-descent parser for scalar expressions in one variable, evaluated
// through second-order forward-mode duals so parsed functions satisfy the
// ScalarFunction1D contract (value plus two exact derivatives) without any
// finite differencing.
//
// Grammar, loosest to tightest binding:
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := ('+' | '-') unary | power
//   power := atom ('^' unary)?          right-associative
//   atom  := number | 't' | 'r' | 'e' | 'pi' | name '(' expr ')'
//          | 'pow' '(' expr ',' expr ')' | '(' expr ')'
// Functions: exp, log, sqrt, sin, cos, sinh, cosh, tanh, and two-argument
// pow (same semantics as '^'). The variable may be written t or r (radial
// profiles read better with r). No implicit multiplication: "2t" is a parse
// error, "2*t" is not.

#include <cstddef>
#include <string>

#include "oylab/errors.hpp"
#include "oylab/scalar_function.hpp"

namespace oylab {

struct ExprParseError : UsageError {
  std::size_t offset;  // byte offset of the offending token
  ExprParseError(const std::string& what, std::size_t off) : UsageError(what), offset(off) {}
};

// Domain violation while evaluating (log of a non-positive number, division
// by zero, non-integer power of a negative base, ...).
struct ExprEvalError : UsageError {
  double at_t;
  ExprEvalError(const std::string& what, double t) : UsageError(what), at_t(t) {}
};

ScalarFunction1D parse_expression(const std::string& source, double domain_max);

}  // namespace oylab
