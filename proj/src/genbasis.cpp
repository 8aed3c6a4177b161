#include "genbase/genbasis.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "genbase/seed.hpp"

namespace genbase {

namespace {

constexpr long long kTupleBudget = 4000000;

// All e-dimensional subspaces of F_p^d as reduced row-echelon bases.
struct Subspace {
  std::vector<int> pivots;
  std::vector<std::vector<uint32_t>> rows; // each of length d
};

void enumerate_pivot_sets(int d, int e, int from, std::vector<int>& cur,
                          std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == e) {
    out.push_back(cur);
    return;
  }
  for (int c = from; c <= d - (e - static_cast<int>(cur.size())); ++c) {
    cur.push_back(c);
    enumerate_pivot_sets(d, e, c + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<Subspace> enumerate_subspaces(int d, int e, uint32_t p) {
  std::vector<Subspace> out;
  if (e == 0) {
    out.push_back({{}, {}});
    return out;
  }
  std::vector<std::vector<int>> pivot_sets;
  std::vector<int> cur;
  enumerate_pivot_sets(d, e, 0, cur, pivot_sets);
  for (const std::vector<int>& piv : pivot_sets) {
    std::vector<char> is_pivot(static_cast<size_t>(d), 0);
    for (int c : piv) is_pivot[static_cast<size_t>(c)] = 1;
    // free cells: in row k, the non-pivot columns right of the pivot
    std::vector<std::pair<int, int>> cells;
    for (int k = 0; k < e; ++k)
      for (int c = piv[static_cast<size_t>(k)] + 1; c < d; ++c)
        if (!is_pivot[static_cast<size_t>(c)]) cells.push_back({k, c});
    std::vector<uint32_t> vals(cells.size(), 0);
    for (;;) {
      Subspace s;
      s.pivots = piv;
      s.rows.assign(static_cast<size_t>(e), std::vector<uint32_t>(static_cast<size_t>(d), 0));
      for (int k = 0; k < e; ++k)
        s.rows[static_cast<size_t>(k)][static_cast<size_t>(piv[static_cast<size_t>(k)])] = 1;
      for (size_t i = 0; i < cells.size(); ++i)
        s.rows[static_cast<size_t>(cells[i].first)][static_cast<size_t>(cells[i].second)] =
            vals[i];
      out.push_back(std::move(s));
      size_t i = 0;
      while (i < vals.size() && vals[i] == p - 1) vals[i++] = 0;
      if (i == vals.size()) break;
      ++vals[i];
    }
  }
  return out;
}

// Reduces v by the echelon rows of s in place; true when v lies in the span.
bool in_span(const Subspace& s, std::vector<uint32_t>& v, uint32_t p) {
  for (size_t k = 0; k < s.pivots.size(); ++k) {
    uint32_t c = v[static_cast<size_t>(s.pivots[k])];
    if (c == 0) continue;
    const std::vector<uint32_t>& row = s.rows[k];
    for (size_t j = 0; j < v.size(); ++j)
      v[j] = (v[j] + static_cast<uint64_t>(p - c) * row[j]) % p;
  }
  for (uint32_t x : v)
    if (x != 0) return false;
  return true;
}

} // namespace

Int grassmann_count(const ModuleP& m, const std::vector<int>& e) {
  if (!m.alg) throw std::invalid_argument("grassmann_count: module without an algebra");
  if (e.size() != m.dims.size())
    throw std::invalid_argument("grassmann_count: dimension vector length mismatch");
  uint32_t p = m.zero.p;
  if (p < 2) throw std::invalid_argument("grassmann_count: module carries no prime modulus");
  for (size_t v = 0; v < e.size(); ++v)
    if (e[v] < 0 || e[v] > m.dims[v])
      throw std::invalid_argument("grassmann_count: dimension vector out of range");
  std::vector<std::vector<Subspace>> cand(e.size());
  long long tuples = 1;
  for (size_t v = 0; v < e.size(); ++v) {
    cand[v] = enumerate_subspaces(m.dims[v], e[v], p);
    tuples *= static_cast<long long>(cand[v].size());
    if (tuples > kTupleBudget)
      throw std::runtime_error("grassmann_count: enumeration budget exceeded");
  }
  const IceQuiver& q = m.alg->quiver;
  std::vector<size_t> pick(e.size(), 0);
  Int count = 0;
  for (;;) {
    bool closed = true;
    for (size_t k = 0; k < q.arrows.size() && closed; ++k) {
      // the arrow i -> j acts from the vertex-j component to the vertex-i one
      int i = q.arrows[k].src, j = q.arrows[k].tgt;
      const Subspace& uj = cand[static_cast<size_t>(j) - 1][pick[static_cast<size_t>(j) - 1]];
      const Subspace& ui = cand[static_cast<size_t>(i) - 1][pick[static_cast<size_t>(i) - 1]];
      const Mat<Fp>& a = m.action[k];
      for (const std::vector<uint32_t>& u : uj.rows) {
        std::vector<uint32_t> w(static_cast<size_t>(a.nr), 0);
        for (int r = 0; r < a.nr; ++r) {
          uint64_t acc = 0;
          for (int c = 0; c < a.nc; ++c)
            acc += static_cast<uint64_t>(a.at(r, c).v) * u[static_cast<size_t>(c)];
          w[static_cast<size_t>(r)] = static_cast<uint32_t>(acc % p);
        }
        if (!in_span(ui, w, p)) {
          closed = false;
          break;
        }
      }
    }
    if (closed) count += 1;
    size_t v = 0;
    while (v < pick.size() && pick[v] + 1 == cand[v].size()) pick[v++] = 0;
    if (v == pick.size()) break;
    ++pick[v];
  }
  return count;
}

Int euler_char(const Module& m, const std::vector<int>& e) {
  if (e.size() != m.dims.size())
    throw std::invalid_argument("euler_char: dimension vector length mismatch");
  int degree = 0;
  for (size_t v = 0; v < e.size(); ++v) {
    if (e[v] < 0 || e[v] > m.dims[v])
      throw std::invalid_argument("euler_char: dimension vector out of range");
    degree += e[v] * (m.dims[v] - e[v]);
  }
  int needed = degree + 2; // interpolation points plus one verification prime
  Module mi = integral_form(m);
  std::vector<long long> primes;
  std::vector<Int> counts;
  for (long long p = 2; static_cast<int>(primes.size()) < needed; ++p) {
    if (p > 1000)
      throw std::runtime_error("euler_char: ran out of usable primes below 1000");
    bool prime = p >= 2;
    for (long long f = 2; f * f <= p; ++f)
      if (p % f == 0) {
        prime = false;
        break;
      }
    if (!prime) continue;
    std::optional<ModuleP> mp = module_mod_p(mi, static_cast<uint32_t>(p));
    if (!mp) continue; // rank drop mod p: not a generic reduction
    primes.push_back(p);
    counts.push_back(grassmann_count(*mp, e));
  }
  // Lagrange evaluation of the interpolant through the first degree+1 points
  auto interpolate_at = [&](const Rat& x) {
    Rat total = 0;
    for (int k = 0; k <= degree; ++k) {
      Rat term = Rat(counts[static_cast<size_t>(k)]);
      for (int j = 0; j <= degree; ++j) {
        if (j == k) continue;
        term *= (x - Rat(primes[static_cast<size_t>(j)])) /
                Rat(primes[static_cast<size_t>(k)] - primes[static_cast<size_t>(j)]);
      }
      total += term;
    }
    return total;
  };
  Rat check = interpolate_at(Rat(primes[static_cast<size_t>(degree + 1)]));
  if (check != Rat(counts[static_cast<size_t>(degree + 1)]))
    throw std::runtime_error(
        "euler_char: point counts are not polynomial across the sampled primes");
  Rat at_one = interpolate_at(Rat(1));
  if (denominator(at_one) != 1)
    throw std::runtime_error("euler_char: interpolant is not integral at 1");
  return numerator(at_one);
}

GrassmannProfile grassmann_profile(const Module& m) {
  GrassmannProfile out;
  out.dims = m.dims;
  std::vector<int> e(m.dims.size(), 0);
  for (;;) {
    out.chi.emplace(e, euler_char(m, e));
    size_t v = 0;
    while (v < e.size() && e[v] == m.dims[v]) e[v++] = 0;
    if (v == e.size()) break;
    ++e[v];
  }
  return out;
}

namespace {

int exponent_of(const Int& x) {
  if (x > 1000000 || x < -1000000)
    throw std::invalid_argument("cluster_character: index entry too large for an exponent");
  return static_cast<int>(x);
}

} // namespace

LaurentPoly cluster_character(const Module& m, const DeltaVector& ind, const IceQuiver& q) {
  if (static_cast<int>(m.dims.size()) != q.n)
    throw std::invalid_argument("cluster_character: module does not live on the quiver");
  if (static_cast<int>(ind.g.size()) != q.n)
    throw std::invalid_argument("cluster_character: index length mismatch");
  std::vector<int> base(static_cast<size_t>(q.n));
  for (int v = 0; v < q.n; ++v) base[static_cast<size_t>(v)] = exponent_of(ind.g[static_cast<size_t>(v)]);
  std::vector<LaurentPoly> yh = yhat(q);
  GrassmannProfile profile = grassmann_profile(m);
  LaurentPoly total = lp_zero(q.n);
  for (const auto& [e, chi] : profile.chi) {
    if (chi == 0) continue;
    LaurentPoly term = lp_monomial(q.n, base, chi);
    for (size_t j = 0; j < e.size(); ++j)
      if (e[j] > 0) term = mul(term, pow(yh[j], e[j]));
    total = add(total, term);
  }
  return total;
}

LaurentPoly generic_basis_element(const AlgebraPtr& alg, const DeltaVector& d, int trials,
                                  uint64_t seed, GenericStats* stats, int height) {
  auto [c, st] = generic_sample(alg, d, trials, seed, height);
  Module m = kernel(nu_morphism(c)).first;
  if (stats) *stats = st;
  return cluster_character(m, d, alg->quiver);
}

bool linear_independence_check(const std::vector<LaurentPoly>& values) {
  if (values.empty()) return true;
  int nvars = values.front().nvars;
  std::map<std::vector<int>, int> cols;
  for (const LaurentPoly& v : values) {
    if (v.nvars != nvars)
      throw std::invalid_argument("linear_independence_check: mixed variable counts");
    for (const auto& [exp, coeff] : v.terms) cols.emplace(exp, 0);
  }
  int next = 0;
  for (auto& [exp, idx] : cols) idx = next++;
  Mat<Rat> z = rat_mat(static_cast<int>(values.size()), next);
  for (size_t r = 0; r < values.size(); ++r)
    for (const auto& [exp, coeff] : values[r].terms)
      z.at(static_cast<int>(r), cols[exp]) = Rat(coeff);
  return mat_rank(z) == static_cast<int>(values.size());
}

} // namespace genbase
