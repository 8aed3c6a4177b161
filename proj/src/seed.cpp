#include "genbase/seed.hpp"

#include <algorithm>
#include <deque>

namespace genbase {

namespace {

// Exchange polynomial at k: product over arrows out of k plus product over
// arrows into k, evaluated on the given variable family.
LaurentPoly exchange_sum(const IceQuiver& q, int k, const std::vector<LaurentPoly>& vars) {
  int n = q.n;
  LaurentPoly out = lp_const(vars.empty() ? n : vars[0].nvars, 1);
  LaurentPoly in = out;
  for (const Arrow& a : q.arrows) {
    if (a.src == k) out = mul(out, vars[a.tgt - 1]);
    if (a.tgt == k) in = mul(in, vars[a.src - 1]);
  }
  return add(out, in);
}

} // namespace

Seed initial_seed(const IceQuiver& q) {
  Seed s;
  s.quiver = q;
  for (int i = 0; i < q.n; ++i) s.vars.push_back(lp_var(q.n, i));
  return s;
}

std::vector<LaurentPoly> yhat(const IceQuiver& q) {
  std::vector<LaurentPoly> ys;
  for (int j = 1; j <= q.n; ++j) {
    std::vector<int> e(q.n, 0);
    for (const Arrow& a : q.arrows) {
      if (a.tgt == j) e[a.src - 1] += 1;
      if (a.src == j) e[a.tgt - 1] -= 1;
    }
    ys.push_back(lp_monomial(q.n, e, 1));
  }
  return ys;
}

Seed mutate_seed(const Seed& s, int k) {
  if (k < 1 || k > s.quiver.m) throw std::invalid_argument("seed: mutation vertex must be mutable");
  Seed t;
  t.quiver = mutate(s.quiver, k);
  t.vars = s.vars;
  LaurentPoly num = exchange_sum(s.quiver, k, s.vars);
  auto quotient = try_div_exact(num, s.vars[k - 1]);
  if (!quotient)
    throw std::logic_error("seed: exchange relation produced a non-Laurent variable (internal inconsistency)");
  t.vars[k - 1] = *quotient;
  t.history = s.history;
  t.history.push_back(k);
  return t;
}

ClusterEnumeration enumerate_clusters(const IceQuiver& q, int max_seeds) {
  ClusterEnumeration result;
  Seed start = initial_seed(q);

  auto key_of = [](const Seed& s) {
    std::vector<std::string> key;
    for (const LaurentPoly& v : s.vars) key.push_back(to_string(v));
    std::sort(key.begin(), key.end());
    return key;
  };

  std::deque<Seed> queue;
  queue.push_back(start);
  result.clusters.insert(key_of(start));
  for (int i = 1; i <= q.m; ++i) result.variables.insert(to_string(start.vars[i - 1]));

  while (!queue.empty()) {
    Seed s = std::move(queue.front());
    queue.pop_front();
    for (int k = 1; k <= q.m; ++k) {
      Seed t = mutate_seed(s, k);
      auto key = key_of(t);
      if (result.clusters.count(key)) continue;
      if (static_cast<int>(result.clusters.size()) >= max_seeds) {
        result.truncated = true;
        continue;
      }
      result.clusters.insert(key);
      for (int i = 1; i <= q.m; ++i) result.variables.insert(to_string(t.vars[i - 1]));
      queue.push_back(t);
    }
  }
  return result;
}

std::vector<FractionExpr> initial_in_cluster(const Seed& s) {
  // Recover the initial quiver by undoing the history, then replay forward,
  // rewriting "initial variable in current cluster" across each mutation.
  IceQuiver q = s.quiver;
  for (auto it = s.history.rbegin(); it != s.history.rend(); ++it) q = mutate(q, *it);

  int n = q.n;
  std::vector<FractionExpr> exprs;
  for (int i = 0; i < n; ++i) exprs.push_back(frac_of(lp_var(n, i)));

  for (int k : s.history) {
    // Before the mutation the cluster is u_1..u_n; afterwards u_k is replaced
    // by u'_k with u_k = (prod_out + prod_in)/u'_k, products taken in the
    // pre-mutation quiver (they avoid u_k, so they read the same either way).
    std::vector<FractionExpr> images;
    for (int i = 0; i < n; ++i) images.push_back(frac_of(lp_var(n, i)));
    std::vector<LaurentPoly> fresh;
    for (int i = 0; i < n; ++i) fresh.push_back(lp_var(n, i));
    LaurentPoly num = exchange_sum(q, k, fresh);
    images[k - 1] = frac_mul(frac_of(num), frac_inv(frac_of(lp_var(n, k - 1))));

    for (FractionExpr& e : exprs) {
      FractionExpr num_part = substitute(e.num, images);
      FractionExpr den_part = substitute(e.den, images);
      e = frac_normalize(frac_mul(num_part, frac_inv(den_part)));
    }
    q = mutate(q, k);
  }
  return exprs;
}

bool is_laurent_in_cluster(const LaurentPoly& p, const Seed& s) {
  std::vector<FractionExpr> images = initial_in_cluster(s);
  FractionExpr value = substitute(p, images);
  return try_div_exact(value.num, value.den).has_value();
}

nlohmann::json seed_to_json(const Seed& s) {
  nlohmann::json vars = nlohmann::json::array();
  for (const LaurentPoly& v : s.vars) vars.push_back(to_string(v));
  return {{"quiver", quiver_to_json(s.quiver)}, {"vars", vars}, {"history", s.history}};
}

Seed seed_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("quiver") || !j.contains("vars") || !j.contains("history"))
    throw std::invalid_argument("seed: JSON wants fields quiver, vars, history");
  Seed s;
  s.quiver = quiver_from_json(j.at("quiver"));
  for (const auto& v : j.at("vars")) s.vars.push_back(parse_laurent(v.get<std::string>(), s.quiver.n));
  s.history = j.at("history").get<std::vector<int>>();
  if (static_cast<int>(s.vars.size()) != s.quiver.n)
    throw std::invalid_argument("seed: variable count must match vertex count");
  return s;
}

} // namespace genbase
