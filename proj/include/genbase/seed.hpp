#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "genbase/laurent.hpp"
#include "genbase/quiver.hpp"

namespace genbase {

// Seed of the cluster pattern: current quiver, cluster variables written as
// Laurent polynomials in the initial variables, and the mutation history that
// produced it from the initial seed.
struct Seed {
  IceQuiver quiver;
  std::vector<LaurentPoly> vars;
  std::vector<int> history;
};

Seed initial_seed(const IceQuiver& q);

// One monomial per vertex j: yhat_j = prod_i x_i^{#(i->j) - #(j->i)}.
std::vector<LaurentPoly> yhat(const IceQuiver& q);

// Exchange relation at mutable vertex k, normalized through div_exact. A
// failed division means the Laurent phenomenon was violated, which can only
// be an internal inconsistency, and throws logic_error.
Seed mutate_seed(const Seed& s, int k);

struct ClusterEnumeration {
  std::set<std::vector<std::string>> clusters; // sorted canonical variable strings
  std::set<std::string> variables;             // distinct variables at mutable positions
  bool truncated = false;
};

// Breadth-first walk of the exchange graph, deduplicating seeds by their
// unordered cluster; stops after max_seeds distinct clusters.
ClusterEnumeration enumerate_clusters(const IceQuiver& q, int max_seeds);

// Whether p (written in the initial variables) is a Laurent polynomial in the
// cluster of s. Replays s.history to express the initial variables in the
// cluster of s, substitutes, and tests div_exact.
bool is_laurent_in_cluster(const LaurentPoly& p, const Seed& s);

// Initial variables written in the cluster of s (inverse change of variables).
std::vector<FractionExpr> initial_in_cluster(const Seed& s);

nlohmann::json seed_to_json(const Seed& s);
Seed seed_from_json(const nlohmann::json& j);

} // namespace genbase
