#pragma once

// Text grammars for the CLI and config files:
//   polynomial:  sum of terms c*x^k, c integer or p/q; "x" alone is 1*x^1;
//                "0" is the zero polynomial. Example: 1/2*x^2 + 1/2*x
//   set expr:    full | mult(m) | hindman | rand(p/q, seed) | file(path) |
//                union(e,e) | inter(e,e) | compl(e) | shift(t,e) |
//                dilate(n,e) | dilinv(n,e)
//   fragments:   semicolon-separated fragments, comma-separated generators,
//                e.g. "1,2,4; 3,5"

#include <stdexcept>
#include <string>
#include <vector>

#include "ramsey/finset.hpp"
#include "ramsey/poly.hpp"

namespace ramsey {

struct SetExpr;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(msg + " at line " + std::to_string(line) +
                           ", column " + std::to_string(col)),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

Poly parse_poly(const std::string& text, bool allow_zero = false);

/// Semicolon-separated list of polynomials.
std::vector<Poly> parse_poly_list(const std::string& text, bool allow_zero = false);

SetExpr parse_set_expr(const std::string& text);

std::vector<IPFragment> parse_fragments(const std::string& text);

}  // namespace ramsey
