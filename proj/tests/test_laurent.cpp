#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "genbase/laurent.hpp"

using namespace genbase;

namespace {

LaurentPoly lp(const std::string& s, int nvars) { return parse_laurent(s, nvars); }

// Deterministic random Laurent polynomial: up to max_terms terms, exponents in
// [-3,3], coefficients in [-9,9].
LaurentPoly random_poly(std::mt19937_64& rng, int nvars, int max_terms) {
  LaurentPoly p = lp_zero(nvars);
  int nterms = static_cast<int>(rng() % (max_terms + 1));
  for (int t = 0; t < nterms; ++t) {
    std::vector<int> e(nvars);
    for (int i = 0; i < nvars; ++i) e[i] = static_cast<int>(rng() % 7) - 3;
    Int c = static_cast<int>(rng() % 19) - 9;
    p = add(p, lp_monomial(nvars, e, c));
  }
  return p;
}

} // namespace

TEST_CASE("arithmetic on fixed examples") {
  LaurentPoly a = lp("x1 + x2", 2);
  LaurentPoly b = lp("x1 - x2", 2);
  CHECK(add(a, b) == lp("2*x1", 2));
  CHECK(mul(a, b) == lp("x1^2 - x2^2", 2));
  CHECK(sub(a, a) == lp_zero(2));
  CHECK(div_exact(lp("x1^2 - x2^2", 2), b) == a);
}

TEST_CASE("division peels monomial units") {
  CHECK(div_exact(lp("x1^2*x2^-1 + x1", 2), lp("x1", 2)) == lp("x1*x2^-1 + 1", 2));

  // Monomials are invertible, so x1*x2 divides everything.
  LaurentPoly num = lp("x1^2 + x2^2 + x3^2", 3);
  LaurentPoly q = div_exact(num, lp("x1*x2", 3));
  CHECK(q == lp("x1*x2^-1 + x1^-1*x2 + x1^-1*x2^-1*x3^2", 3));
  CHECK(mul(q, lp("x1*x2", 3)) == num);
}

TEST_CASE("genuine non-divisibility") {
  // (x1*x2 + x1 + 1)/(x2 + 1) has no Laurent quotient: substitute x2 = -1.
  CHECK(!try_div_exact(lp("x1*x2 + x1 + 1", 2), lp("x2 + 1", 2)).has_value());
  CHECK_THROWS_AS(div_exact(lp("x1*x2 + x1 + 1", 2), lp("x2 + 1", 2)), NotDivisible);
  // Integer coefficients are required, not just monomial support.
  CHECK(!try_div_exact(lp("3*x1", 2), lp("2", 2)).has_value());
  CHECK_THROWS_AS(div_exact(lp_zero(2), lp_zero(2)), std::invalid_argument);
}

TEST_CASE("substitution") {
  LaurentPoly p = lp("x1 + x2", 2);
  std::vector<FractionExpr> images = {
      {lp("x2 + 1", 2), lp("x1", 2)},
      frac_of(lp("x2", 2)),
  };
  FractionExpr r = substitute(p, images);
  CHECK(frac_eq(r, FractionExpr{lp("x1*x2 + x2 + 1", 2), lp("x1", 2)}));

  std::vector<FractionExpr> identity = {frac_of(lp("x1", 2)), frac_of(lp("x2", 2))};
  CHECK(frac_eq(substitute(p, identity), frac_of(p)));

  CHECK_THROWS_AS(substitute(p, std::vector<FractionExpr>{frac_of(lp("x1", 2))}),
                  std::invalid_argument);
}

TEST_CASE("canonical text form") {
  LaurentPoly p = lp_zero(3);
  p = add(p, lp_monomial(3, {0, 1, 0}, 2));
  p = add(p, lp_monomial(3, {2, 0, -1}, 1));
  CHECK(to_string(p) == "x1^2*x3^-1 + 2*x2");
  CHECK(parse_laurent(to_string(p), 3) == p);

  CHECK(to_string(lp_zero(2)) == "0");
  CHECK(parse_laurent("0", 2) == lp_zero(2));
  CHECK(to_string(lp("-x1 - 1", 2)) == "-x1 - 1");
  CHECK(parse_laurent("-x1 - 1", 2) == lp("-1 - x1", 2));
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse_laurent("", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_laurent("x9", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_laurent("x1 +", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_laurent("2*", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_laurent("x1 x2", 2), std::invalid_argument);
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(20240817);
  int divisions = 0;
  for (int iter = 0; iter < 1100; ++iter) {
    int nvars = 1 + static_cast<int>(rng() % 3);
    LaurentPoly a = random_poly(rng, nvars, 4);
    LaurentPoly b = random_poly(rng, nvars, 4);
    LaurentPoly c = random_poly(rng, nvars, 4);
    REQUIRE(add(add(a, b), c) == add(a, add(b, c)));
    REQUIRE(add(a, b) == add(b, a));
    REQUIRE(mul(a, b) == mul(b, a));
    REQUIRE(mul(mul(a, b), c) == mul(a, mul(b, c)));
    REQUIRE(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
    REQUIRE(add(a, lp_zero(nvars)) == a);
    REQUIRE(mul(a, lp_const(nvars, 1)) == a);
    REQUIRE(add(a, neg(a)) == lp_zero(nvars));
    if (!b.is_zero()) {
      REQUIRE(div_exact(mul(a, b), b) == a);
      ++divisions;
    }
  }
  REQUIRE(divisions > 700);
}

TEST_CASE("print-parse round trip on random polynomials") {
  std::mt19937_64 rng(777);
  for (int iter = 0; iter < 500; ++iter) {
    int nvars = 1 + static_cast<int>(rng() % 4);
    LaurentPoly p = random_poly(rng, nvars, 5);
    REQUIRE(parse_laurent(to_string(p), nvars) == p);
    REQUIRE(to_string(parse_laurent(to_string(p), nvars)) == to_string(p));
  }
}
