#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "genbase/quiver.hpp"
#include "genbase/rational.hpp"

namespace genbase {

// Words are sequences of arrow ids written left to right the way paths are
// composed: in "c1 b1 a1" the arrow a1 is traversed first, so consecutive
// entries satisfy src(w[p]) == tgt(w[p+1]). The walk starts at the source of
// the last entry (wstart) and ends at the target of the first (wend).
int word_start(const IceQuiver& q, const std::vector<std::string>& word);
int word_end(const IceQuiver& q, const std::vector<std::string>& word);
bool word_composable(const IceQuiver& q, const std::vector<std::string>& word);

// Formal linear combination of parallel paths (all terms share wstart and
// wend). Used for relations; cyclic derivatives produce these.
struct PathCombination {
  std::vector<std::pair<Rat, std::vector<std::string>>> terms;

  bool operator==(const PathCombination&) const = default;
};

// Formal integer combination of oriented cycles. Each cycle is stored in its
// canonical rotation (lexicographically least arrow-id sequence) and like
// terms are merged, so equal potentials compare equal.
struct Potential {
  std::vector<std::pair<Int, std::vector<std::string>>> terms;

  bool operator==(const Potential&) const = default;
};

// Validates every cycle against q (composable, closed, length >= 3) and
// canonicalizes. Throws std::invalid_argument on malformed input.
Potential make_potential(const IceQuiver& q,
                         const std::vector<std::pair<Int, std::vector<std::string>>>& terms);

Potential zero_potential();

// Validates a relation against q: nonempty composable terms of length >= 2
// sharing endpoints. Throws std::invalid_argument otherwise.
PathCombination make_path_combination(
    const IceQuiver& q, const std::vector<std::pair<Rat, std::vector<std::string>>>& terms);

// d/d(arrow) of the potential: every occurrence of the arrow in every cycle
// (all rotations) contributes the complementary path. Terms of the result run
// from tgt(arrow) to src(arrow). Throws std::invalid_argument on an unknown
// arrow id.
PathCombination cyclic_derivative(const IceQuiver& q, const Potential& w,
                                  const std::string& arrow_id);

nlohmann::json potential_to_json(const Potential& w);
Potential potential_from_json(const IceQuiver& q, const nlohmann::json& j);

nlohmann::json path_combination_to_json(const PathCombination& r);
PathCombination path_combination_from_json(const IceQuiver& q, const nlohmann::json& j);

} // namespace genbase
