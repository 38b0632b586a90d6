#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "iqv/cartan.hpp"
#include "iqv/iqg.hpp"
#include "iqv/ncalg.hpp"

// Expression mini-language shared by the command-line front end and the
// report round-trip tests.
//
// Surface grammar (whitespace insensitive):
//   expression := ['-'] term { ('+' | '-') term }
//   term       := power { ('*' | '/') power }         (* left-associative *)
//   power      := atom [ '^' exponent ]
//   exponent   := ['-'] integer                        (integer power)
//              |  '(' ['-'] integer ')'                (divided-power sugar)
//   atom       := integer | 'q' | generator | '(' expression ')'
//
// Generators: B<i>, k<i> (1-based node indices); k<i>^-1 is the inverse.
// Divided-power sugar: B<i>^(<m>) is the quantum divided power, and
// iB<i>[<parity>]^(<m>) the parity-decorated divided power of a tau-fixed
// node. '^' binds tighter than '*', which binds tighter than '+'/'-'.
// A negative power is legal on scalar subexpressions and on invertible
// generators only; '/' requires a nonzero scalar divisor.
//
// The extended language additionally accepts letters of the double —
// F<i>, E<i>, K<i>, K<i>' with integer powers on the invertible K-letters —
// and the parenthesized scalar serialization literals "(num:[...];den:[...])"
// that canonical prints carry, so every text printed by UElement::to_text
// (with or without spaces) parses back.

namespace iqv {

// Syntax or semantic error in expression text. `position` is the 1-based
// character column of the offending token; `expected` lists the token shapes
// that were legal at that point (empty for semantic errors such as an index
// outside the rank).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& detail,
             std::vector<std::string> expected = {});

  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

// Parses the coideal surface language (B, k, q, integers, divided-power
// sugar). Throws ParseError on malformed text, unknown indices, a negative
// divided-power exponent, or letters of the double.
IExpression parse_expression(const CartanDatum& datum, const std::string& text);

// Parses the extended language into a free polynomial over the double's
// alphabet; coideal generators are expanded through the embedding
// (B_i -> F_i + E_{tau i} K'_i, k_i -> K_i K'_{tau i}). Accepts every text
// parse_expression accepts, plus every canonical UElement print.
NCPoly parse_double_expression(const CartanDatum& datum,
                               const std::string& text);

// Canonical grammar print: deterministic term order, coefficients as
// rational expressions in q, adjacent equal letters collapsed into powers.
// parse_expression inverts it exactly: parse(print(x)) == x.
std::string print_expression(const CartanDatum& datum, const IExpression& x);

// Canonical grammar print of a scalar, always usable as a single factor:
// "(...)" for polynomials in q, "(...)/(...)" otherwise, "0" for zero.
std::string print_scalar(const Scalar& c);

}  // namespace iqv
