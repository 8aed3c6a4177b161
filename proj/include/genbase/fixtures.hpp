#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "genbase/fdalg.hpp"

namespace genbase {

// A shipped quiver together with the data needed to present its algebra: an
// optional potential, an optional explicit relation list (when both are given
// they must present the same algebra), and a path length bound for the
// truncated quotient construction.
struct Fixture {
  std::string name;
  IceQuiver quiver;
  std::optional<Potential> potential;
  std::optional<std::vector<PathCombination>> relations;
  int bound = 1;
  std::string notes;
};

// Names of the built-in fixtures, in registry order.
std::vector<std::string> fixture_names();

// Built-in fixture by name; throws std::invalid_argument on unknown names.
Fixture builtin_fixture(const std::string& name);

nlohmann::json fixture_to_json(const Fixture& f);
Fixture fixture_from_json(const nlohmann::json& j);

// Parses a fixture file. A bare quiver object (fields n, m, arrows) is also
// accepted and wrapped into a fixture without potential or relations.
Fixture load_fixture(const std::string& path);

// A built-in fixture when the argument names one, otherwise a fixture file.
Fixture resolve_fixture(const std::string& name_or_path);

// The algebra the fixture presents: the Jacobian algebra of the potential
// when one is given, otherwise the quotient by the explicit relations (the
// path algebra when neither is given).
AlgebraPtr fixture_algebra(const Fixture& f);

// The same algebra built from the explicit relation list, ignoring the
// potential; throws std::invalid_argument when no relations are given.
AlgebraPtr fixture_algebra_relations(const Fixture& f);

} // namespace genbase
