#pragma once

#include "symvp/func.hpp"

#include <stdexcept>
#include <string>

namespace symvp {

struct ParseError : std::runtime_error {
  ParseError(std::size_t position, const std::string& what)
      : std::runtime_error("at position " + std::to_string(position) + ": " + what),
        position(position) {}
  std::size_t position;  ///< 1-based offset into the expression text
};

/// Parses an objective expression over variables x1..x<dim>.
///
/// Grammar (lowest to highest precedence):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := unary ('^' factor)?            right associative
///   unary  := '-' unary | primary
///   primary:= number | xK | name | name '(' expr (',' expr)* ')' | '(' expr ')'
///
/// Names: abs, sqrt, exp, log, cosh, sinh, tanh (one argument); max, min (two
/// or more); norm1, norm2, norminf (no arguments, norms of the full vector);
/// indicator_ball2(r), indicator_box(r) with a numeric radius (0 inside the
/// closed l2 ball / linf box, +inf outside).
///
/// The gradient is assembled by symbolic differentiation when every node is
/// smooth (polynomials, exp, cosh, ...); expressions containing abs, max,
/// min, norms or indicators evaluate fine but carry no analytic gradient.
ScalarFunction parseObjective(const std::string& text, int dim, FunctionFlags flags = {});

}  // namespace symvp
