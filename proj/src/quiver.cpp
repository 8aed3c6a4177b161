#include "genbase/quiver.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace genbase {

namespace {

void validate(const IceQuiver& q) {
  if (q.n < 0 || q.m < 0 || q.m > q.n)
    throw std::invalid_argument("quiver: need 0 <= m <= n");
  std::set<std::string> ids;
  for (const Arrow& a : q.arrows) {
    if (a.src < 1 || a.src > q.n || a.tgt < 1 || a.tgt > q.n)
      throw std::invalid_argument("quiver: arrow endpoint out of range for arrow " + a.id);
    if (a.src == a.tgt) throw std::invalid_argument("quiver: loop at vertex " + std::to_string(a.src));
    if (!ids.insert(a.display_id()).second)
      throw std::invalid_argument("quiver: duplicate arrow id " + a.display_id());
  }
  for (const Arrow& a : q.arrows)
    for (const Arrow& b : q.arrows)
      if (a.src == b.tgt && a.tgt == b.src)
        throw std::invalid_argument("quiver: 2-cycle between " + std::to_string(a.src) + " and " +
                                    std::to_string(a.tgt));
}

bool id_less(const Arrow& a, const Arrow& b) {
  if (a.id != b.id) return a.id < b.id;
  return a.gen < b.gen;
}

} // namespace

IceQuiver make_quiver(int n, int m, std::vector<Arrow> arrows) {
  IceQuiver q{n, m, std::move(arrows)};
  validate(q);
  return q;
}

IceQuiver mutate(const IceQuiver& q, int k) {
  if (k < 1 || k > q.m) throw std::invalid_argument("quiver: mutation vertex must be mutable");

  std::vector<Arrow> incoming, outgoing, rest;
  for (const Arrow& a : q.arrows) {
    if (a.tgt == k)
      incoming.push_back(a);
    else if (a.src == k)
      outgoing.push_back(a);
    else
      rest.push_back(a);
  }
  std::sort(incoming.begin(), incoming.end(), id_less);
  std::sort(outgoing.begin(), outgoing.end(), id_less);

  std::set<std::string> used;
  for (const Arrow& a : q.arrows) used.insert(a.display_id());

  std::vector<Arrow> result = rest;
  int fresh = 1;
  for (const Arrow& a : incoming) {
    for (const Arrow& b : outgoing) {
      std::string id;
      do {
        id = "p" + std::to_string(fresh++);
      } while (used.count(id));
      used.insert(id);
      result.push_back(Arrow{id, 0, a.src, b.tgt});
    }
  }
  for (Arrow a : incoming) {
    std::swap(a.src, a.tgt);
    a.gen += 1;
    result.push_back(a);
  }
  for (Arrow a : outgoing) {
    std::swap(a.src, a.tgt);
    a.gen += 1;
    result.push_back(a);
  }

  // Maximal 2-cycle cancellation, pairing arrows in id order on each side.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < result.size() && !changed; ++i) {
      for (size_t j = 0; j < result.size() && !changed; ++j) {
        if (result[i].src == result[j].tgt && result[i].tgt == result[j].src) {
          int u = result[i].src, v = result[i].tgt;
          std::vector<Arrow> fwd, bwd, keep;
          for (const Arrow& a : result) {
            if (a.src == u && a.tgt == v)
              fwd.push_back(a);
            else if (a.src == v && a.tgt == u)
              bwd.push_back(a);
            else
              keep.push_back(a);
          }
          std::sort(fwd.begin(), fwd.end(), id_less);
          std::sort(bwd.begin(), bwd.end(), id_less);
          size_t cancel = std::min(fwd.size(), bwd.size());
          for (size_t t = cancel; t < fwd.size(); ++t) keep.push_back(fwd[t]);
          for (size_t t = cancel; t < bwd.size(); ++t) keep.push_back(bwd[t]);
          result = std::move(keep);
          changed = true;
        }
      }
    }
  }

  IceQuiver out{q.n, q.m, std::move(result)};
  validate(out);
  return out;
}

Mat<Rat> exchange_matrix(const IceQuiver& q) {
  Mat<Rat> b = rat_mat(q.n, q.n);
  for (const Arrow& a : q.arrows) {
    b.at(a.src - 1, a.tgt - 1) += 1;
    b.at(a.tgt - 1, a.src - 1) -= 1;
  }
  return b;
}

int matrix_rank(const Mat<Rat>& m) { return mat_rank(m); }

int arrow_count(const IceQuiver& q, int i, int j) {
  int c = 0;
  for (const Arrow& a : q.arrows)
    if (a.src == i && a.tgt == j) ++c;
  return c;
}

nlohmann::json quiver_to_json(const IceQuiver& q) {
  nlohmann::json arrows = nlohmann::json::array();
  for (const Arrow& a : q.arrows) arrows.push_back({a.display_id(), a.src, a.tgt});
  return {{"n", q.n}, {"m", q.m}, {"arrows", arrows}};
}

IceQuiver quiver_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("m") || !j.contains("arrows"))
    throw std::invalid_argument("quiver: JSON wants fields n, m, arrows");
  std::vector<Arrow> arrows;
  for (const auto& entry : j.at("arrows")) {
    if (!entry.is_array() || entry.size() != 3)
      throw std::invalid_argument("quiver: arrow entries are [id, src, tgt]");
    Arrow a;
    std::string id = entry.at(0).get<std::string>();
    size_t tilde = id.rfind('~');
    if (tilde != std::string::npos && tilde + 1 < id.size() &&
        id.find_first_not_of("0123456789", tilde + 1) == std::string::npos) {
      a.id = id.substr(0, tilde);
      a.gen = std::stoi(id.substr(tilde + 1));
    } else {
      a.id = id;
    }
    a.src = entry.at(1).get<int>();
    a.tgt = entry.at(2).get<int>();
    arrows.push_back(a);
  }
  return make_quiver(j.at("n").get<int>(), j.at("m").get<int>(), std::move(arrows));
}

} // namespace genbase
