#include "genbase/fixtures.hpp"

#include <fstream>
#include <stdexcept>

namespace genbase {

namespace {

Fixture make_a2() {
  Fixture f;
  f.name = "a2";
  f.quiver = make_quiver(2, 2, {{"a1", 0, 1, 2}});
  f.bound = 1;
  f.notes = "Linear quiver 1 -> 2 with no relations.";
  return f;
}

Fixture make_a3() {
  Fixture f;
  f.name = "a3";
  f.quiver = make_quiver(3, 3, {{"a1", 0, 1, 2}, {"a2", 0, 2, 3}});
  f.bound = 2;
  f.notes = "Linear quiver 1 -> 2 -> 3 with no relations.";
  return f;
}

Fixture make_labardini() {
  Fixture f;
  f.name = "labardini";
  f.quiver = make_quiver(3, 3,
                         {{"a1", 0, 1, 2},
                          {"a2", 0, 1, 2},
                          {"b1", 0, 2, 3},
                          {"b2", 0, 2, 3},
                          {"c1", 0, 3, 1},
                          {"c2", 0, 3, 1}});
  f.potential = make_potential(f.quiver, {{1, {"c1", "b1", "a1"}},
                                          {1, {"c2", "b2", "a2"}},
                                          {-1, {"c1", "b2", "a1", "c2", "b1", "a2"}}});
  // The cyclic derivatives written out by hand, one per arrow, as an
  // alternative backend to the potential.
  std::vector<std::vector<std::pair<Rat, std::vector<std::string>>>> rels = {
      {{1, {"c1", "b1"}}, {-1, {"c2", "b1", "a2", "c1", "b2"}}},
      {{1, {"c2", "b2"}}, {-1, {"c1", "b2", "a1", "c2", "b1"}}},
      {{1, {"a1", "c1"}}, {-1, {"a2", "c1", "b2", "a1", "c2"}}},
      {{1, {"a2", "c2"}}, {-1, {"a1", "c2", "b1", "a2", "c1"}}},
      {{1, {"b1", "a1"}}, {-1, {"b2", "a1", "c2", "b1", "a2"}}},
      {{1, {"b2", "a2"}}, {-1, {"b1", "a2", "c1", "b2", "a1"}}},
  };
  f.relations.emplace();
  for (const auto& r : rels) f.relations->push_back(make_path_combination(f.quiver, r));
  f.bound = 8;
  f.notes = "Double arrows around a 3-cycle with the standard potential; "
            "self-injective of total dimension 36.";
  return f;
}

Fixture make_a2_frozen() {
  Fixture f;
  f.name = "a2-frozen";
  f.quiver = make_quiver(2, 1, {{"a1", 0, 1, 2}});
  f.bound = 1;
  f.notes = "Linear quiver 1 -> 2 with vertex 2 frozen.";
  return f;
}

} // namespace

std::vector<std::string> fixture_names() { return {"a2", "a3", "labardini", "a2-frozen"}; }

Fixture builtin_fixture(const std::string& name) {
  if (name == "a2") return make_a2();
  if (name == "a3") return make_a3();
  if (name == "labardini") return make_labardini();
  if (name == "a2-frozen") return make_a2_frozen();
  throw std::invalid_argument("fixture: unknown name: " + name);
}

nlohmann::json fixture_to_json(const Fixture& f) {
  nlohmann::json j;
  j["name"] = f.name;
  j["quiver"] = quiver_to_json(f.quiver);
  j["bound"] = f.bound;
  j["notes"] = f.notes;
  if (f.potential) j["potential"] = potential_to_json(*f.potential);
  if (f.relations) {
    nlohmann::json rels = nlohmann::json::array();
    for (const PathCombination& r : *f.relations) rels.push_back(path_combination_to_json(r));
    j["relations"] = rels;
  }
  return j;
}

Fixture fixture_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("fixture: JSON wants an object");
  Fixture f;
  if (!j.contains("quiver")) {
    // bare quiver object
    f.quiver = quiver_from_json(j);
    return f;
  }
  f.quiver = quiver_from_json(j.at("quiver"));
  if (j.contains("name")) f.name = j.at("name").get<std::string>();
  if (j.contains("notes")) f.notes = j.at("notes").get<std::string>();
  if (j.contains("bound")) f.bound = j.at("bound").get<int>();
  if (j.contains("potential")) f.potential = potential_from_json(f.quiver, j.at("potential"));
  if (j.contains("relations")) {
    if (!j.at("relations").is_array())
      throw std::invalid_argument("fixture: relations wants an array");
    f.relations.emplace();
    for (const auto& r : j.at("relations"))
      f.relations->push_back(path_combination_from_json(f.quiver, r));
  }
  return f;
}

Fixture load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("fixture: cannot open file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  return fixture_from_json(j);
}

Fixture resolve_fixture(const std::string& name_or_path) {
  for (const std::string& name : fixture_names())
    if (name == name_or_path) return builtin_fixture(name);
  return load_fixture(name_or_path);
}

AlgebraPtr fixture_algebra(const Fixture& f) {
  if (f.potential) return jacobian_algebra(f.quiver, *f.potential, f.bound);
  if (f.relations) return from_relations(f.quiver, *f.relations, f.bound);
  return from_relations(f.quiver, {}, f.bound);
}

AlgebraPtr fixture_algebra_relations(const Fixture& f) {
  if (!f.relations) throw std::invalid_argument("fixture: no explicit relation list");
  return from_relations(f.quiver, *f.relations, f.bound);
}

} // namespace genbase
