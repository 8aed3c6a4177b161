#include "genbase/potential.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace genbase {

namespace {

std::map<std::string, int> arrow_index(const IceQuiver& q) {
  std::map<std::string, int> idx;
  for (int i = 0; i < static_cast<int>(q.arrows.size()); ++i) {
    idx[q.arrows[i].display_id()] = i;
  }
  return idx;
}

std::string word_str(const std::vector<std::string>& word) {
  std::string s;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i) s += "*";
    s += word[i];
  }
  return s.empty() ? "(empty)" : s;
}

const Arrow& arrow_of(const IceQuiver& q, const std::map<std::string, int>& idx,
                      const std::string& id) {
  auto it = idx.find(id);
  if (it == idx.end()) throw std::invalid_argument("unknown arrow id: " + id);
  return q.arrows[it->second];
}

// Comparison order for words: shorter first, then lexicographic by arrow id.
bool word_less(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

} // namespace

int word_start(const IceQuiver& q, const std::vector<std::string>& word) {
  if (word.empty()) throw std::invalid_argument("empty word has no start vertex");
  return arrow_of(q, arrow_index(q), word.back()).src;
}

int word_end(const IceQuiver& q, const std::vector<std::string>& word) {
  if (word.empty()) throw std::invalid_argument("empty word has no end vertex");
  return arrow_of(q, arrow_index(q), word.front()).tgt;
}

bool word_composable(const IceQuiver& q, const std::vector<std::string>& word) {
  std::map<std::string, int> idx = arrow_index(q);
  for (const std::string& id : word) {
    if (idx.find(id) == idx.end()) return false;
  }
  for (size_t p = 0; p + 1 < word.size(); ++p) {
    if (arrow_of(q, idx, word[p]).src != arrow_of(q, idx, word[p + 1]).tgt) return false;
  }
  return true;
}

Potential make_potential(const IceQuiver& q,
                         const std::vector<std::pair<Int, std::vector<std::string>>>& terms) {
  std::map<std::string, int> idx = arrow_index(q);
  std::map<std::vector<std::string>, Int> merged;
  for (const auto& [coef, cycle] : terms) {
    if (cycle.empty()) throw std::invalid_argument("potential cycle is empty");
    for (const std::string& id : cycle) arrow_of(q, idx, id);
    if (!word_composable(q, cycle)) {
      throw std::invalid_argument("potential cycle is not composable: " + word_str(cycle));
    }
    if (arrow_of(q, idx, cycle.back()).src != arrow_of(q, idx, cycle.front()).tgt) {
      throw std::invalid_argument("potential cycle is not closed: " + word_str(cycle));
    }
    // Canonical rotation: lexicographically least among all rotations.
    std::vector<std::string> best = cycle;
    std::vector<std::string> rot = cycle;
    for (size_t r = 1; r < cycle.size(); ++r) {
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
      if (rot < best) best = rot;
    }
    merged[best] += coef;
  }
  Potential w;
  for (const auto& [cycle, coef] : merged) {
    if (coef != 0) w.terms.emplace_back(coef, cycle);
  }
  std::sort(w.terms.begin(), w.terms.end(),
            [](const auto& a, const auto& b) { return word_less(a.second, b.second); });
  return w;
}

Potential zero_potential() { return Potential{}; }

PathCombination make_path_combination(
    const IceQuiver& q, const std::vector<std::pair<Rat, std::vector<std::string>>>& terms) {
  if (terms.empty()) throw std::invalid_argument("relation has no terms");
  std::map<std::vector<std::string>, Rat> merged;
  int start = -1;
  int end = -1;
  for (const auto& [coef, path] : terms) {
    if (path.size() < 2) {
      throw std::invalid_argument("relation term must have length >= 2: " + word_str(path));
    }
    if (!word_composable(q, path)) {
      throw std::invalid_argument("relation term is not composable: " + word_str(path));
    }
    int s = word_start(q, path);
    int e = word_end(q, path);
    if (start == -1) {
      start = s;
      end = e;
    } else if (s != start || e != end) {
      throw std::invalid_argument("relation terms do not share endpoints: " + word_str(path));
    }
    merged[path] += coef;
  }
  PathCombination r;
  for (const auto& [path, coef] : merged) {
    if (!is_zero(coef)) r.terms.emplace_back(coef, path);
  }
  std::sort(r.terms.begin(), r.terms.end(),
            [](const auto& a, const auto& b) { return word_less(a.second, b.second); });
  return r;
}

PathCombination cyclic_derivative(const IceQuiver& q, const Potential& w,
                                  const std::string& arrow_id) {
  std::map<std::string, int> idx = arrow_index(q);
  arrow_of(q, idx, arrow_id);
  std::map<std::vector<std::string>, Rat> merged;
  for (const auto& [coef, cycle] : w.terms) {
    for (size_t p = 0; p < cycle.size(); ++p) {
      if (cycle[p] != arrow_id) continue;
      std::vector<std::string> comp(cycle.begin() + p + 1, cycle.end());
      comp.insert(comp.end(), cycle.begin(), cycle.begin() + p);
      merged[comp] += Rat(coef);
    }
  }
  PathCombination r;
  for (const auto& [path, coef] : merged) {
    if (!is_zero(coef)) r.terms.emplace_back(coef, path);
  }
  std::sort(r.terms.begin(), r.terms.end(),
            [](const auto& a, const auto& b) { return word_less(a.second, b.second); });
  return r;
}

namespace {

nlohmann::json coef_to_json(const Rat& c) {
  Int num = boost::multiprecision::numerator(c);
  Int den = boost::multiprecision::denominator(c);
  if (den == 1 && num >= std::numeric_limits<int64_t>::min() &&
      num <= std::numeric_limits<int64_t>::max()) {
    return static_cast<int64_t>(num);
  }
  return c.str();
}

Rat coef_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rat(j.get<int64_t>());
  if (j.is_string()) return Rat(j.get<std::string>());
  throw std::invalid_argument("coefficient must be an integer or a rational string");
}

std::vector<std::string> word_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("path must be an array of arrow ids");
  std::vector<std::string> word;
  for (const auto& e : j) {
    if (!e.is_string()) throw std::invalid_argument("arrow id must be a string");
    word.push_back(e.get<std::string>());
  }
  return word;
}

} // namespace

nlohmann::json potential_to_json(const Potential& w) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [coef, cycle] : w.terms) {
    terms.push_back(nlohmann::json::array({coef_to_json(Rat(coef)), cycle}));
  }
  return nlohmann::json{{"terms", terms}};
}

Potential potential_from_json(const IceQuiver& q, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) {
    throw std::invalid_argument("potential JSON must be {\"terms\": [...]}");
  }
  std::vector<std::pair<Int, std::vector<std::string>>> terms;
  for (const auto& t : j["terms"]) {
    if (!t.is_array() || t.size() != 2) {
      throw std::invalid_argument("potential term must be [coefficient, cycle]");
    }
    Rat c = coef_from_json(t[0]);
    if (boost::multiprecision::denominator(c) != 1) {
      throw std::invalid_argument("potential coefficients must be integers");
    }
    terms.emplace_back(boost::multiprecision::numerator(c), word_from_json(t[1]));
  }
  return make_potential(q, terms);
}

nlohmann::json path_combination_to_json(const PathCombination& r) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [coef, path] : r.terms) {
    terms.push_back(nlohmann::json::array({coef_to_json(coef), path}));
  }
  return nlohmann::json{{"terms", terms}};
}

PathCombination path_combination_from_json(const IceQuiver& q, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) {
    throw std::invalid_argument("relation JSON must be {\"terms\": [...]}");
  }
  std::vector<std::pair<Rat, std::vector<std::string>>> terms;
  for (const auto& t : j["terms"]) {
    if (!t.is_array() || t.size() != 2) {
      throw std::invalid_argument("relation term must be [coefficient, path]");
    }
    terms.emplace_back(coef_from_json(t[0]), word_from_json(t[1]));
  }
  return make_path_combination(q, terms);
}

} // namespace genbase
