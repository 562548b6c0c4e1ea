#pragma once

// Polynomials with exact rational coefficients and no constant term, the
// one- and multi-variable kinds every witness search evaluates. All values
// are computed exactly.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ramsey/bigint.hpp"

namespace ramsey {

/// A polynomial c_1 x + c_2 x^2 + ... + c_d x^d. The constant term is
/// structurally absent, so every Poly vanishes at 0. The zero polynomial is
/// representable only when constructed with allow_zero.
class Poly {
 public:
  // coeffs[k] is the coefficient of x^{k+1}; trailing zeros are trimmed.
  explicit Poly(std::vector<Rat> coeffs, bool allow_zero = false);

  static Poly zero() { return Poly({}, true); }
  static Poly identity() { return Poly({Rat(1)}); }

  bool is_zero() const { return coeffs_.empty(); }
  bool allow_zero() const { return allow_zero_; }
  // Degree; 0 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()); }

  /// Coefficient of x^k, k >= 1.
  Rat coeff(int k) const;
  const std::vector<Rat>& coeffs() const { return coeffs_; }

  bool integral() const;

  /// Exact decision of "p(x) >= 0 for every integer x >= 1": test all x up
  /// to the Cauchy root bound 1 + max_k |c_k| / c_deg; past the bound the
  /// sign of the leading coefficient decides.
  bool nat_valued() const;

  /// Horner evaluation (the primary path).
  Rat eval(const Int& x) const;
  /// Monomial-summation evaluation; independent of eval() for two-path tests.
  Rat eval_monomial(const Int& x) const;
  /// Integer evaluation; requires integral().
  Int eval_int(const Int& x) const;

  std::string to_string() const;

  bool operator==(const Poly& o) const { return coeffs_ == o.coeffs_; }

 private:
  std::vector<Rat> coeffs_;
  bool allow_zero_ = false;
};

/// y -> p(y+s) - p(s). Integer coefficients, vanishes at 0; the result may
/// take negative values on positive inputs, so it is a plain integer
/// polynomial rather than a nat-valued one.
Poly shift_difference(const Poly& p, const Int& s);

/// Clear denominators: M = lcm of coefficient denominators, and the returned
/// polynomial has b_k * M^k as coefficient of x^k, so result(t) = p(M*t).
std::pair<Poly, Int> scale_rational(const Poly& p);

/// Same scaling with a caller-chosen multiplier M (used when one M must be
/// shared across a whole family).
Poly scale_with(const Poly& p, const Int& m);

struct Monomial {
  Int coef;
  std::vector<unsigned> exps;  // one exponent per variable
};

/// Integer polynomial in `arity` variables with no constant term.
class MultiPoly {
 public:
  MultiPoly(unsigned arity, std::vector<Monomial> monomials);

  unsigned arity() const { return arity_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }

  Int eval(std::span<const Int> xs) const;

  std::string to_string() const;

 private:
  unsigned arity_ = 1;
  std::vector<Monomial> monomials_;
};

/// The arity-l polynomial (x_1..x_l) -> p(x_i). Requires integral p.
MultiPoly restrict_multi(const Poly& p, unsigned i, unsigned l);

}  // namespace ramsey
