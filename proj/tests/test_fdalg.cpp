#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "genbase/fdalg.hpp"

using namespace genbase;

namespace {

IceQuiver a2_quiver() { return make_quiver(2, 2, {{"a1", 0, 1, 2}}); }

IceQuiver a3_quiver() {
  return make_quiver(3, 3, {{"a1", 0, 1, 2}, {"a2", 0, 2, 3}});
}

IceQuiver labardini_quiver() {
  return make_quiver(3, 3,
                     {{"a1", 0, 1, 2},
                      {"a2", 0, 1, 2},
                      {"b1", 0, 2, 3},
                      {"b2", 0, 2, 3},
                      {"c1", 0, 3, 1},
                      {"c2", 0, 3, 1}});
}

Potential labardini_potential(const IceQuiver& q) {
  return make_potential(q, {{1, {"c1", "b1", "a1"}},
                            {1, {"c2", "b2", "a2"}},
                            {-1, {"c1", "b2", "a1", "c2", "b1", "a2"}}});
}

int index_of_label(const FDAlgebra& alg, const std::string& label) {
  for (int i = 0; i < alg.dim(); ++i) {
    if (alg.basis[i].label == label) return i;
  }
  return -1;
}

std::set<std::string> labels_of(const FDAlgebra& alg, const std::vector<int>& idxs) {
  std::set<std::string> out;
  for (int i : idxs) out.insert(alg.basis[i].label);
  return out;
}

bool is_zero_vec(const std::vector<Rat>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return is_zero(x); });
}

bool is_unit_at(const std::vector<Rat>& v, int k) {
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    if (i == k ? v[i] != 1 : !is_zero(v[i])) return false;
  }
  return true;
}

// All composable words of the given length, as id sequences.
std::vector<std::vector<std::string>> composable_words(const IceQuiver& q, int len) {
  std::vector<std::vector<int>> cur;
  for (int i = 0; i < static_cast<int>(q.arrows.size()); ++i) cur.push_back({i});
  for (int l = 1; l < len; ++l) {
    std::vector<std::vector<int>> nxt;
    for (const auto& w : cur) {
      for (int a = 0; a < static_cast<int>(q.arrows.size()); ++a) {
        if (q.arrows[a].tgt == q.arrows[w.back()].src) {
          auto w2 = w;
          w2.push_back(a);
          nxt.push_back(std::move(w2));
        }
      }
    }
    cur = std::move(nxt);
  }
  std::vector<std::vector<std::string>> out;
  for (const auto& w : cur) {
    std::vector<std::string> ids;
    for (int a : w) ids.push_back(q.arrows[a].display_id());
    out.push_back(std::move(ids));
  }
  return out;
}

} // namespace

TEST_CASE("a2 path algebra") {
  IceQuiver q = a2_quiver();
  AlgebraPtr alg = jacobian_algebra(q, zero_potential(), 5);
  CHECK(alg->dim() == 3);
  CHECK(alg->basis[0].label == "e1");
  CHECK(alg->basis[1].label == "e2");
  CHECK(alg->basis[2].label == "a1");
  CHECK(alg->idempotent_index(2) == 1);
  CHECK(alg->max_basis_length == 1);
  CHECK(alg->arrow_elem == std::vector<int>{2});

  CHECK(alg->block(1, 1) == std::vector<int>{0});
  CHECK(alg->block(2, 1) == std::vector<int>{2});
  CHECK(alg->block(2, 2) == std::vector<int>{1});
  CHECK(alg->block(1, 2).empty());

  CHECK(alg->mult(2, 0) == std::map<int, Rat>{{2, 1}}); // a1 * e1
  CHECK(alg->mult(1, 2) == std::map<int, Rat>{{2, 1}}); // e2 * a1
  CHECK(alg->mult(0, 2).empty());                       // incompatible vertices
  CHECK(alg->mult(2, 2).empty());

  CHECK(is_unit_at(alg->reduce_path({"a1"}), 2));
  CHECK_THROWS_AS(alg->reduce_path({}), std::invalid_argument);
  CHECK_THROWS_AS(alg->reduce_path({"zz"}), std::invalid_argument);
  CHECK_THROWS_AS(alg->reduce_path({"a1", "a1"}), std::invalid_argument);
}

TEST_CASE("a3 path algebra and monomial relation") {
  IceQuiver q = a3_quiver();
  AlgebraPtr path = from_relations(q, {}, 5);
  CHECK(path->dim() == 6);
  CHECK(index_of_label(*path, "a2*a1") >= 0);
  int i21 = index_of_label(*path, "a2*a1");
  int ia1 = path->arrow_elem[0];
  int ia2 = path->arrow_elem[1];
  CHECK(path->mult(ia2, ia1) == std::map<int, Rat>{{i21, 1}});
  CHECK(path->basis[i21].wstart == 1);
  CHECK(path->basis[i21].wend == 3);
  CHECK(check_relations(*path, zero_potential()));

  PathCombination rel = make_path_combination(q, {{Rat(1), {"a2", "a1"}}});
  AlgebraPtr quot = from_relations(q, {rel}, 5);
  CHECK(quot->dim() == 5);
  CHECK(index_of_label(*quot, "a2*a1") == -1);
  CHECK(quot->mult(quot->arrow_elem[1], quot->arrow_elem[0]).empty());
  CHECK(is_zero_vec(quot->reduce_path({"a2", "a1"})));

  // The monomial quotient is already exact at bound 1.
  AlgebraPtr tight = from_relations(q, {rel}, 1);
  CHECK(tight->dim() == 5);
}

TEST_CASE("stabilization failures") {
  IceQuiver q3 = a3_quiver();
  CHECK_THROWS_AS(from_relations(q3, {}, 1), StabilizationError);
  IceQuiver ql = labardini_quiver();
  CHECK_THROWS_AS(from_relations(ql, {}, 6), StabilizationError);
  CHECK_THROWS_AS(jacobian_algebra(ql, zero_potential(), 4), StabilizationError);
  CHECK_THROWS_AS(from_relations(q3, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(from_relations(q3, {}, -2), std::invalid_argument);
}

TEST_CASE("labardini jacobian algebra") {
  IceQuiver q = labardini_quiver();
  AlgebraPtr alg = jacobian_algebra(q, labardini_potential(q), 8);
  CHECK(alg->dim() == 36);
  CHECK(alg->max_basis_length == 4);
  CHECK(alg->relations.size() == 6);

  // Indecomposable projective at vertex 1: all words ending there.
  std::vector<int> p1;
  for (int s = 1; s <= 3; ++s) {
    for (int i : alg->block(1, s)) p1.push_back(i);
  }
  CHECK(p1.size() == 12);
  std::set<std::string> expected_p1 = {
      "e1",        "c1",        "c2",        "c1*b1",       "c1*b2",       "c2*b1",
      "c2*b2",     "c1*b1*a1",  "c1*b2*a1",  "c2*b1*a2",    "c1*b2*a1*c2", "c2*b1*a2*c1"};
  CHECK(labels_of(*alg, p1) == expected_p1);
  CHECK(labels_of(*alg, alg->block(1, 1)) ==
        std::set<std::string>{"e1", "c1*b1*a1", "c1*b2*a1", "c2*b1*a2"});
  CHECK(labels_of(*alg, alg->block(1, 2)) ==
        std::set<std::string>{"c1*b1", "c1*b2", "c2*b1", "c2*b2"});
  CHECK(labels_of(*alg, alg->block(1, 3)) ==
        std::set<std::string>{"c1", "c2", "c1*b2*a1*c2", "c2*b1*a2*c1"});

  std::vector<int> p3;
  for (int s = 1; s <= 3; ++s) {
    for (int i : alg->block(3, s)) p3.push_back(i);
  }
  std::set<std::string> expected_p3 = {
      "e3",        "b1",        "b2",        "b1*a1",       "b1*a2",       "b2*a1",
      "b2*a2",     "b1*a1*c1",  "b1*a2*c1",  "b2*a1*c2",    "b1*a2*c1*b2", "b2*a1*c2*b1"};
  CHECK(labels_of(*alg, p3) == expected_p3);

  // Every basis path reduces to itself.
  for (int i = 0; i < alg->dim(); ++i) {
    if (alg->basis[i].length == 0) continue;
    std::vector<std::string> ids;
    for (int a : alg->basis[i].arrows) ids.push_back(q.arrows[a].display_id());
    CHECK(is_unit_at(alg->reduce_path(ids), i));
  }

  // The twelve vanishing length-3 mixed cycles.
  std::vector<std::vector<std::string>> zero3 = {
      {"c1", "b1", "a2"}, {"b1", "a1", "c2"}, {"a1", "c1", "b2"}, {"c2", "b2", "a1"},
      {"b2", "a2", "c1"}, {"a2", "c2", "b1"}, {"c1", "b2", "a2"}, {"b1", "a2", "c2"},
      {"a1", "c2", "b2"}, {"c2", "b1", "a1"}, {"b2", "a1", "c1"}, {"a2", "c1", "b1"}};
  for (const auto& w : zero3) CHECK(is_zero_vec(alg->reduce_path(w)));

  // The two unmixed 3-cycles at a vertex agree.
  PathCombination diff = make_path_combination(
      q, {{Rat(1), {"c1", "b1", "a1"}}, {Rat(-1), {"c2", "b2", "a2"}}});
  CHECK(is_zero_vec(alg->reduce(diff)));

  // A nonzero length-6 product collapsing to a length-3 normal form.
  int u = index_of_label(*alg, "c1*b1*a1");
  CHECK(u >= 0);
  CHECK(is_unit_at(alg->reduce_path({"c1", "b2", "a1", "c2", "b1", "a2"}), u));
  CHECK(is_unit_at(alg->reduce_path({"c2", "b1", "a2", "c1", "b2", "a1"}), u));

  // Everything of length 7 vanishes.
  for (const auto& w : composable_words(q, 7)) CHECK(is_zero_vec(alg->reduce_path(w)));

  CHECK(check_relations(*alg, labardini_potential(q)));
  Potential wrong = make_potential(q, {{1, {"c1", "b1", "a1"}}});
  CHECK(!check_relations(*alg, wrong));
}

TEST_CASE("labardini algebra from explicit relations") {
  IceQuiver q = labardini_quiver();
  auto rel = [&](const std::vector<std::string>& plus, const std::vector<std::string>& minus) {
    return make_path_combination(q, {{Rat(1), plus}, {Rat(-1), minus}});
  };
  std::vector<PathCombination> rels = {
      rel({"c1", "b1"}, {"c2", "b1", "a2", "c1", "b2"}),
      rel({"c2", "b2"}, {"c1", "b2", "a1", "c2", "b1"}),
      rel({"a1", "c1"}, {"a2", "c1", "b2", "a1", "c2"}),
      rel({"a2", "c2"}, {"a1", "c2", "b1", "a2", "c1"}),
      rel({"b1", "a1"}, {"b2", "a1", "c2", "b1", "a2"}),
      rel({"b2", "a2"}, {"b1", "a2", "c1", "b2", "a1"})};
  AlgebraPtr alt = from_relations(q, rels, 8);
  AlgebraPtr jac = jacobian_algebra(q, labardini_potential(q), 8);
  REQUIRE(alt->dim() == jac->dim());
  for (int i = 0; i < alt->dim(); ++i) {
    CHECK(alt->basis[i].label == jac->basis[i].label);
    CHECK(alt->basis[i].wstart == jac->basis[i].wstart);
    CHECK(alt->basis[i].wend == jac->basis[i].wend);
  }
  CHECK(alt->arrow_elem == jac->arrow_elem);
  for (int i = 0; i < alt->dim(); ++i) {
    for (int j = 0; j < alt->dim(); ++j) {
      CHECK(alt->mult(i, j) == jac->mult(i, j));
    }
  }
}

TEST_CASE("algebra axioms on the labardini algebra") {
  IceQuiver q = labardini_quiver();
  AlgebraPtr alg = jacobian_algebra(q, labardini_potential(q), 8);
  int d = alg->dim();
  int n = alg->quiver.n;

  for (int i = 0; i < d; ++i) {
    CHECK(alg->mult(alg->idempotent_index(alg->basis[i].wend), i) ==
          std::map<int, Rat>{{i, 1}});
    CHECK(alg->mult(i, alg->idempotent_index(alg->basis[i].wstart)) ==
          std::map<int, Rat>{{i, 1}});
  }
  for (int v = 1; v <= n; ++v) {
    for (int w = 1; w <= n; ++w) {
      auto m = alg->mult(alg->idempotent_index(v), alg->idempotent_index(w));
      if (v == w) {
        CHECK(m == std::map<int, Rat>{{alg->idempotent_index(v), 1}});
      } else {
        CHECK(m.empty());
      }
    }
  }

  // Vertex grading of products.
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (alg->basis[i].wstart != alg->basis[j].wend) {
        CHECK(alg->mult(i, j).empty());
        continue;
      }
      for (const auto& [k, v] : alg->mult(i, j)) {
        CHECK(alg->basis[k].wstart == alg->basis[j].wstart);
        CHECK(alg->basis[k].wend == alg->basis[i].wend);
      }
    }
  }

  // Associativity over all compatible triples.
  auto acc_mult = [&](const std::map<int, Rat>& x, int j) {
    std::vector<Rat> acc(d, Rat(0));
    for (const auto& [i, c] : x) alg->mult_acc(i, j, c, acc);
    return acc;
  };
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (alg->basis[i].wstart != alg->basis[j].wend) continue;
      auto ij = alg->mult(i, j);
      for (int k = 0; k < d; ++k) {
        if (alg->basis[j].wstart != alg->basis[k].wend) continue;
        std::vector<Rat> left = acc_mult(ij, k);
        auto jk = alg->mult(j, k);
        std::vector<Rat> right(d, Rat(0));
        for (const auto& [l, c] : jk) {
          std::vector<Rat> t(d, Rat(0));
          alg->mult_acc(i, l, c, t);
          for (int s = 0; s < d; ++s) right[s] += t[s];
        }
        CHECK(left == right);
      }
    }
  }
}

TEST_CASE("opposite algebra") {
  IceQuiver q = labardini_quiver();
  AlgebraPtr alg = jacobian_algebra(q, labardini_potential(q), 8);
  AlgebraPtr op = opposite(alg);
  CHECK(op->dim() == 36);
  CHECK(opposite(op).get() == alg.get());
  CHECK(opposite(alg).get() == op.get());

  CHECK(op->quiver.arrows[0].src == 2);
  CHECK(op->quiver.arrows[0].tgt == 1);
  int u = index_of_label(*alg, "c1*b1*a1");
  CHECK(op->basis[u].label == "a1*b1*c1");
  CHECK(op->basis[u].wstart == alg->basis[u].wend);
  CHECK(op->basis[u].wend == alg->basis[u].wstart);

  for (int i = 0; i < 36; ++i) {
    for (int j = 0; j < 36; ++j) {
      CHECK(op->mult(i, j) == alg->mult(j, i));
    }
  }

  IceQuiver q2 = a2_quiver();
  AlgebraPtr a2 = jacobian_algebra(q2, zero_potential(), 5);
  AlgebraPtr a2op = opposite(a2);
  CHECK(a2op->block(1, 2) == std::vector<int>{2});
  CHECK(a2op->block(2, 1).empty());
}

TEST_CASE("corner algebras") {
  IceQuiver q = labardini_quiver();
  AlgebraPtr alg = jacobian_algebra(q, labardini_potential(q), 8);

  AlgebraPtr c1 = corner(alg, {1});
  CHECK(c1->dim() == 4);
  CHECK(c1->quiver.n == 1);
  std::vector<int> all4 = {0, 1, 2, 3};
  CHECK(labels_of(*c1, all4) ==
        std::set<std::string>{"e1", "c1*b1*a1", "c1*b2*a1", "c2*b1*a2"});
  CHECK(c1->original_vertex == std::vector<int>{1});

  // rad/rad^2 has rank 2: the unmixed cycle is a product of the mixed ones.
  REQUIRE(c1->quiver.arrows.size() == 2);
  std::set<std::string> gen_ids = {c1->quiver.arrows[0].display_id(),
                                   c1->quiver.arrows[1].display_id()};
  CHECK(gen_ids == std::set<std::string>{"c1*b2*a1", "c2*b1*a2"});
  int iu = index_of_label(*c1, "c1*b1*a1");
  int iv = index_of_label(*c1, "c1*b2*a1");
  int iw = index_of_label(*c1, "c2*b1*a2");
  CHECK(c1->mult(iv, iw) == std::map<int, Rat>{{iu, 1}});
  CHECK(c1->mult(iw, iv) == std::map<int, Rat>{{iu, 1}});
  CHECK(c1->mult(iu, iu).empty());
  CHECK(c1->mult(iv, iv).empty());
  CHECK(c1->mult(iw, iw).empty());
  CHECK(c1->mult(iu, iv).empty());
  CHECK(c1->mult(iv, iu).empty());

  AlgebraPtr call = corner(alg, {1, 2, 3});
  CHECK(call->dim() == alg->dim());
  for (int i = 0; i < alg->dim(); ++i) CHECK(call->basis[i].label == alg->basis[i].label);
  for (int i = 0; i < alg->dim(); ++i) {
    for (int j = 0; j < alg->dim(); ++j) {
      CHECK(call->mult(i, j) == alg->mult(i, j));
    }
  }
  CHECK(call->quiver.arrows.size() == 6);

  IceQuiver q2 = a2_quiver();
  AlgebraPtr a2 = jacobian_algebra(q2, zero_potential(), 5);
  AlgebraPtr ac = corner(a2, {1});
  CHECK(ac->dim() == 1);
  CHECK(ac->quiver.arrows.empty());
  CHECK(ac->basis[0].label == "e1");

  CHECK_THROWS_AS(corner(alg, {}), std::invalid_argument);
  CHECK_THROWS_AS(corner(alg, {4}), std::invalid_argument);
  CHECK_THROWS_AS(corner(alg, {0}), std::invalid_argument);
}
