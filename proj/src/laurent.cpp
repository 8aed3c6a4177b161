#include "genbase/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace genbase {

namespace {

void check_arity(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.nvars != b.nvars)
    throw std::invalid_argument("laurent: mixed variable counts " +
                                std::to_string(a.nvars) + " vs " + std::to_string(b.nvars));
}

int total_degree(const std::vector<int>& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

// Graded-lex: larger total degree wins, ties break toward the lexicographically
// larger exponent vector. Returns true when a precedes b (a is "larger").
bool grlex_greater(const std::vector<int>& a, const std::vector<int>& b) {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return a > b;
}

std::vector<int> exp_add(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

std::vector<int> exp_sub(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// Leading exponent in the division order.
const std::vector<int>* leading_exp(const LaurentPoly& p) {
  const std::vector<int>* best = nullptr;
  for (const auto& [e, c] : p.terms)
    if (!best || grlex_greater(e, *best)) best = &e;
  return best;
}

void add_term(LaurentPoly& p, const std::vector<int>& e, const Int& c) {
  if (c == 0) return;
  auto it = p.terms.find(e);
  if (it == p.terms.end()) {
    p.terms.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) p.terms.erase(it);
  }
}

// Componentwise minimum exponent over the support (the monomial content).
std::vector<int> min_exponent(const LaurentPoly& p) {
  std::vector<int> m(p.nvars, 0);
  bool first = true;
  for (const auto& [e, c] : p.terms) {
    if (first) {
      m = e;
      first = false;
    } else {
      for (int i = 0; i < p.nvars; ++i) m[i] = std::min(m[i], e[i]);
    }
  }
  return m;
}

LaurentPoly shift_exponents(const LaurentPoly& p, const std::vector<int>& by) {
  LaurentPoly r;
  r.nvars = p.nvars;
  for (const auto& [e, c] : p.terms) r.terms.emplace(exp_add(e, by), c);
  return r;
}

} // namespace

LaurentPoly lp_zero(int nvars) {
  LaurentPoly p;
  p.nvars = nvars;
  return p;
}

LaurentPoly lp_const(int nvars, const Int& c) {
  LaurentPoly p = lp_zero(nvars);
  if (c != 0) p.terms.emplace(std::vector<int>(nvars, 0), c);
  return p;
}

LaurentPoly lp_monomial(int nvars, const std::vector<int>& exp, const Int& c) {
  if (static_cast<int>(exp.size()) != nvars)
    throw std::invalid_argument("laurent: exponent vector length mismatch");
  LaurentPoly p = lp_zero(nvars);
  if (c != 0) p.terms.emplace(exp, c);
  return p;
}

LaurentPoly lp_var(int nvars, int i) {
  if (i < 0 || i >= nvars) throw std::invalid_argument("laurent: variable index out of range");
  std::vector<int> e(nvars, 0);
  e[i] = 1;
  return lp_monomial(nvars, e, 1);
}

LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b) {
  check_arity(a, b);
  LaurentPoly r = a;
  for (const auto& [e, c] : b.terms) add_term(r, e, c);
  return r;
}

LaurentPoly sub(const LaurentPoly& a, const LaurentPoly& b) { return add(a, neg(b)); }

LaurentPoly neg(const LaurentPoly& a) {
  LaurentPoly r = a;
  for (auto& [e, c] : r.terms) c = -c;
  return r;
}

LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b) {
  check_arity(a, b);
  LaurentPoly r = lp_zero(a.nvars);
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) add_term(r, exp_add(ea, eb), ca * cb);
  return r;
}

LaurentPoly mul_scalar(const LaurentPoly& a, const Int& c) {
  LaurentPoly r = lp_zero(a.nvars);
  if (c == 0) return r;
  for (const auto& [e, k] : a.terms) r.terms.emplace(e, k * c);
  return r;
}

LaurentPoly pow(const LaurentPoly& a, int k) {
  if (k < 0) throw std::invalid_argument("laurent: pow wants k >= 0");
  LaurentPoly r = lp_const(a.nvars, 1);
  for (int i = 0; i < k; ++i) r = mul(r, a);
  return r;
}

std::optional<LaurentPoly> try_div_exact(const LaurentPoly& a, const LaurentPoly& b) {
  check_arity(a, b);
  if (b.is_zero()) throw std::invalid_argument("laurent: division by zero");
  if (a.is_zero()) return lp_zero(a.nvars);

  // Pull the monomial content out of both sides; monomials are units, so only
  // the polynomial parts decide divisibility.
  std::vector<int> ma = min_exponent(a), mb = min_exponent(b);
  LaurentPoly rem = shift_exponents(a, exp_sub(std::vector<int>(a.nvars, 0), ma));
  LaurentPoly den = shift_exponents(b, exp_sub(std::vector<int>(b.nvars, 0), mb));

  const std::vector<int>* lead_den = leading_exp(den);
  const Int& lead_coeff = den.terms.at(*lead_den);
  LaurentPoly q = lp_zero(a.nvars);
  while (!rem.is_zero()) {
    const std::vector<int>* lead_rem = leading_exp(rem);
    std::vector<int> de = exp_sub(*lead_rem, *lead_den);
    for (int x : de)
      if (x < 0) return std::nullopt;
    Int c = rem.terms.at(*lead_rem);
    if (c % lead_coeff != 0) return std::nullopt;
    c /= lead_coeff;
    add_term(q, de, c);
    rem = sub(rem, mul(den, lp_monomial(a.nvars, de, c)));
  }
  return shift_exponents(q, exp_sub(ma, mb));
}

LaurentPoly div_exact(const LaurentPoly& a, const LaurentPoly& b) {
  auto q = try_div_exact(a, b);
  if (!q) throw NotDivisible("div_exact: " + to_string(a) + " is not divisible by " + to_string(b));
  return *q;
}

FractionExpr frac_of(const LaurentPoly& p) { return {p, lp_const(p.nvars, 1)}; }

FractionExpr frac_add(const FractionExpr& a, const FractionExpr& b) {
  return {add(mul(a.num, b.den), mul(b.num, a.den)), mul(a.den, b.den)};
}

FractionExpr frac_mul(const FractionExpr& a, const FractionExpr& b) {
  return {mul(a.num, b.num), mul(a.den, b.den)};
}

FractionExpr frac_inv(const FractionExpr& a) {
  if (a.num.is_zero()) throw std::invalid_argument("laurent: inverting the zero fraction");
  return {a.den, a.num};
}

bool frac_eq(const FractionExpr& a, const FractionExpr& b) {
  return mul(a.num, b.den) == mul(b.num, a.den);
}

FractionExpr frac_normalize(const FractionExpr& a) {
  auto q = try_div_exact(a.num, a.den);
  if (q) return frac_of(*q);
  return a;
}

FractionExpr substitute(const LaurentPoly& p, const std::vector<FractionExpr>& images) {
  if (static_cast<int>(images.size()) != p.nvars)
    throw std::invalid_argument("laurent: substitute wants one image per variable");
  for (const auto& f : images)
    if (f.den.is_zero()) throw std::invalid_argument("laurent: substitute image has zero denominator");
  int out_vars = images.empty() ? 0 : images[0].num.nvars;
  for (const auto& f : images)
    if (f.num.nvars != out_vars || f.den.nvars != out_vars)
      throw std::invalid_argument("laurent: substitute images disagree on variable count");

  FractionExpr acc = frac_of(lp_zero(out_vars));
  for (const auto& [e, c] : p.terms) {
    FractionExpr term = frac_of(lp_const(out_vars, c));
    for (int i = 0; i < p.nvars; ++i) {
      if (e[i] == 0) continue;
      FractionExpr base = e[i] > 0 ? images[i] : frac_inv(images[i]);
      int k = std::abs(e[i]);
      for (int j = 0; j < k; ++j) term = frac_mul(term, base);
    }
    acc = frac_add(acc, term);
  }
  return acc;
}

std::string to_string(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::vector<const std::pair<const std::vector<int>, Int>*> order;
  order.reserve(p.terms.size());
  for (const auto& t : p.terms) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [](auto* x, auto* y) { return grlex_greater(x->first, y->first); });

  std::ostringstream out;
  bool first = true;
  for (auto* t : order) {
    const auto& [e, c] = *t;
    Int a = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) out << "-";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    std::string vars;
    for (int i = 0; i < p.nvars; ++i) {
      if (e[i] == 0) continue;
      if (!vars.empty()) vars += "*";
      vars += "x" + std::to_string(i + 1);
      if (e[i] != 1) vars += "^" + std::to_string(e[i]);
    }
    if (vars.empty()) {
      out << a.str();
    } else {
      if (a != 1) out << a.str() << "*";
      out << vars;
    }
  }
  return out.str();
}

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;
  int nvars;

  explicit Parser(const std::string& text, int n) : s(text), nvars(n) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= s.size();
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("laurent parse error at position " + std::to_string(pos) + ": " + msg);
  }

  Int parse_integer() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    size_t digits = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == digits) fail("expected integer");
    return Int(s.substr(start, pos - start));
  }

  int parse_small_int() {
    Int v = parse_integer();
    if (v > 1000000 || v < -1000000) fail("exponent or index out of range");
    return static_cast<int>(v);
  }

  // term := integer | [integer '*'] factor ('*' factor)*
  // factor := x<k> ['^' integer]
  LaurentPoly parse_term() {
    skip_ws();
    Int coeff = 1;
    std::vector<int> e(nvars, 0);
    bool saw_factor = false;
    bool expect_factor = false;
    if (peek() != 'x') {
      coeff = parse_integer();
      skip_ws();
      if (peek() == '*') {
        ++pos;
        expect_factor = true;
      } else {
        return lp_const(nvars, coeff);
      }
    }
    while (true) {
      skip_ws();
      if (peek() != 'x') {
        if (expect_factor) fail("expected variable after '*'");
        break;
      }
      ++pos;
      int idx = parse_small_int();
      if (idx < 1 || idx > nvars) fail("variable index out of range");
      int ex = 1;
      skip_ws();
      if (peek() == '^') {
        ++pos;
        ex = parse_small_int();
      }
      e[idx - 1] += ex;
      saw_factor = true;
      expect_factor = false;
      skip_ws();
      if (peek() == '*') {
        ++pos;
        expect_factor = true;
      } else {
        break;
      }
    }
    if (!saw_factor) fail("expected term");
    return lp_monomial(nvars, e, coeff);
  }

  LaurentPoly parse_expr() {
    LaurentPoly acc = lp_zero(nvars);
    bool first = true;
    while (!eof()) {
      int sign = 1;
      char c = peek();
      if (c == '+' || c == '-') {
        sign = c == '-' ? -1 : 1;
        ++pos;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      LaurentPoly t = parse_term();
      acc = sign < 0 ? sub(acc, t) : add(acc, t);
      first = false;
    }
    if (first) fail("expected term");
    return acc;
  }
};

} // namespace

LaurentPoly parse_laurent(const std::string& text, int nvars) {
  Parser p(text, nvars);
  if (p.eof()) throw std::invalid_argument("laurent parse error: empty input");
  return p.parse_expr();
}

} // namespace genbase
