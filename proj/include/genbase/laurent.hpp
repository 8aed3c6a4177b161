#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "genbase/rational.hpp"

namespace genbase {

// Thrown by div_exact when no Laurent polynomial quotient exists.
struct NotDivisible : std::runtime_error {
  explicit NotDivisible(const std::string& what) : std::runtime_error(what) {}
};

// Laurent polynomial in variables x1..xn with integer coefficients.
// terms maps exponent vectors (length nvars, entries may be negative) to
// nonzero coefficients; the zero polynomial has an empty map.
struct LaurentPoly {
  int nvars = 0;
  std::map<std::vector<int>, Int> terms;

  bool is_zero() const { return terms.empty(); }
  bool operator==(const LaurentPoly& o) const = default;
};

// Quotient of Laurent polynomials. Kept as an unreduced pair; den is nonzero.
struct FractionExpr {
  LaurentPoly num;
  LaurentPoly den;
};

LaurentPoly lp_zero(int nvars);
LaurentPoly lp_const(int nvars, const Int& c);
LaurentPoly lp_monomial(int nvars, const std::vector<int>& exp, const Int& c);
LaurentPoly lp_var(int nvars, int i); // x_{i+1}, i.e. 0-indexed variable i

LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly sub(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly neg(const LaurentPoly& a);
LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly mul_scalar(const LaurentPoly& a, const Int& c);
LaurentPoly pow(const LaurentPoly& a, int k); // k >= 0

// Exact division in the Laurent ring: returns q with a = b*q, or nullopt when
// no integer-coefficient Laurent quotient exists. Monomial factors are pulled
// out of both arguments first, then ordinary multivariate polynomial division
// runs in graded-lex order with a zero remainder required.
std::optional<LaurentPoly> try_div_exact(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly div_exact(const LaurentPoly& a, const LaurentPoly& b); // throws NotDivisible

// Substitutes images[i] for variable i. The result is a quotient whose
// denominator is the product of image denominator/numerator powers demanded by
// the exponents; no cancellation is attempted.
FractionExpr substitute(const LaurentPoly& p, const std::vector<FractionExpr>& images);

FractionExpr frac_of(const LaurentPoly& p);
FractionExpr frac_add(const FractionExpr& a, const FractionExpr& b);
FractionExpr frac_mul(const FractionExpr& a, const FractionExpr& b);
FractionExpr frac_inv(const FractionExpr& a); // throws invalid_argument on zero
// Equality as field elements: cross-multiplication.
bool frac_eq(const FractionExpr& a, const FractionExpr& b);
// Collapses num/den to (quotient, 1) when the division is exact.
FractionExpr frac_normalize(const FractionExpr& a);

// Canonical text form, e.g. "x1^2*x3^-1 + 2*x2". Terms are sorted by the
// division order (graded-lex, leading term first); parse round-trips exactly.
std::string to_string(const LaurentPoly& p);
LaurentPoly parse_laurent(const std::string& text, int nvars);

} // namespace genbase
