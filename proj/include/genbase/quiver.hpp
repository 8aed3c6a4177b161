#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "genbase/linalg.hpp"

namespace genbase {

// Quiver arrow. `gen` counts how often the arrow has been reversed by
// mutation; it is rendered as "id~gen" when positive so repeatedly mutated
// quivers keep distinguishable arrow identities.
struct Arrow {
  std::string id;
  int gen = 0;
  int src = 0; // vertices are 1-based
  int tgt = 0;

  std::string display_id() const { return gen > 0 ? id + "~" + std::to_string(gen) : id; }
  bool operator==(const Arrow&) const = default;
};

// Quiver with n vertices of which 1..m are mutable and m+1..n frozen.
// No loops and no 2-cycles (enforced on construction and after mutation).
struct IceQuiver {
  int n = 0;
  int m = 0;
  std::vector<Arrow> arrows;

  bool is_frozen(int v) const { return v > m; }
};

// Validates vertex ranges, loop-freeness, 2-cycle-freeness and id uniqueness.
IceQuiver make_quiver(int n, int m, std::vector<Arrow> arrows);

// Fomin-Zelevinsky mutation at mutable vertex k: composites around k first,
// then reversal of the arrows at k, then maximal 2-cycle cancellation pairing
// arrows in id order. Composite arrows receive fresh ids p1, p2, ...
IceQuiver mutate(const IceQuiver& q, int k);

// Skew-symmetric matrix with entry (i,j) = #(i->j) - #(j->i), n x n.
Mat<Rat> exchange_matrix(const IceQuiver& q);

int matrix_rank(const Mat<Rat>& m);

// Number of arrows i -> j.
int arrow_count(const IceQuiver& q, int i, int j);

nlohmann::json quiver_to_json(const IceQuiver& q);
IceQuiver quiver_from_json(const nlohmann::json& j);

} // namespace genbase
