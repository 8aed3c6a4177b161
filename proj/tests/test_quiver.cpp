#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "genbase/quiver.hpp"

using namespace genbase;

namespace {

IceQuiver a2() { return make_quiver(2, 2, {{"a1", 0, 1, 2}}); }

IceQuiver labardini_quiver() {
  return make_quiver(3, 3,
                     {{"a1", 0, 1, 2},
                      {"a2", 0, 1, 2},
                      {"b1", 0, 2, 3},
                      {"b2", 0, 2, 3},
                      {"c1", 0, 3, 1},
                      {"c2", 0, 3, 1}});
}

// Fomin-Zelevinsky matrix mutation, the reference for the quiver-level rule.
Mat<Rat> matrix_mutate(const Mat<Rat>& b, int k) {
  int n = b.nr;
  Mat<Rat> r = rat_mat(n, n);
  int kk = k - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == kk || j == kk) {
        r.at(i, j) = -b.at(i, j);
      } else {
        Rat bik = b.at(i, kk), bkj = b.at(kk, j);
        Rat aik = bik < 0 ? Rat(-bik) : bik;
        Rat akj = bkj < 0 ? Rat(-bkj) : bkj;
        r.at(i, j) = b.at(i, j) + (aik * bkj + bik * akj) / 2;
      }
    }
  return r;
}

IceQuiver random_quiver(std::mt19937_64& rng) {
  int n = 2 + static_cast<int>(rng() % 4);
  int m = 1 + static_cast<int>(rng() % n);
  std::vector<Arrow> arrows;
  int t = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      int mult = static_cast<int>(rng() % 3);
      bool forward = rng() % 2 == 0;
      for (int c = 0; c < mult; ++c) {
        ++t;
        arrows.push_back(Arrow{"a" + std::to_string(t), 0, forward ? i : j, forward ? j : i});
      }
    }
  return make_quiver(n, m, std::move(arrows));
}

} // namespace

TEST_CASE("construction validates") {
  CHECK_THROWS_AS(make_quiver(2, 2, {{"a", 0, 1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(make_quiver(2, 2, {{"a", 0, 1, 2}, {"b", 0, 2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(make_quiver(2, 2, {{"a", 0, 1, 2}, {"a", 0, 1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(make_quiver(2, 2, {{"a", 0, 1, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(make_quiver(2, 3, {}), std::invalid_argument);
}

TEST_CASE("mutation reverses a single arrow") {
  IceQuiver q = mutate(a2(), 1);
  REQUIRE(q.arrows.size() == 1);
  CHECK(q.arrows[0].src == 2);
  CHECK(q.arrows[0].tgt == 1);
  CHECK(q.arrows[0].display_id() == "a1~1");
  CHECK_THROWS_AS(mutate(a2(), 3), std::invalid_argument);
}

TEST_CASE("mutation composes and cancels") {
  IceQuiver q = make_quiver(3, 3, {{"a", 0, 1, 2}, {"b", 0, 2, 3}});
  IceQuiver q1 = mutate(q, 2);
  CHECK(arrow_count(q1, 1, 3) == 1);
  CHECK(arrow_count(q1, 2, 1) == 1);
  CHECK(arrow_count(q1, 3, 2) == 1);
  CHECK(q1.arrows.size() == 3);

  // Mutating again cancels the composite against the new one.
  IceQuiver q2 = mutate(q1, 2);
  CHECK(exchange_matrix(q2) == exchange_matrix(q));
  CHECK(q2.arrows.size() == 2);
}

TEST_CASE("exchange matrix of the double-cycle quiver") {
  Mat<Rat> b = exchange_matrix(labardini_quiver());
  Mat<Rat> expected = rat_mat(3, 3);
  expected.at(0, 1) = 2;
  expected.at(1, 0) = -2;
  expected.at(1, 2) = 2;
  expected.at(2, 1) = -2;
  expected.at(2, 0) = 2;
  expected.at(0, 2) = -2;
  CHECK(b == expected);
  CHECK(matrix_rank(b) == 2);
}

TEST_CASE("mutation is involutive and commutes with matrix mutation") {
  std::mt19937_64 rng(20240818);
  int checked = 0;
  for (int iter = 0; iter < 300; ++iter) {
    IceQuiver q = random_quiver(rng);
    if (q.arrows.empty()) continue;
    int k = 1 + static_cast<int>(rng() % q.m);
    IceQuiver q1 = mutate(q, k);
    REQUIRE(exchange_matrix(q1) == matrix_mutate(exchange_matrix(q), k));
    IceQuiver q2 = mutate(q1, k);
    REQUIRE(exchange_matrix(q2) == exchange_matrix(q));
    // Same arrow multiset up to ids.
    for (int i = 1; i <= q.n; ++i)
      for (int j = 1; j <= q.n; ++j) REQUIRE(arrow_count(q2, i, j) == arrow_count(q, i, j));
    ++checked;
  }
  REQUIRE(checked > 200);
}

TEST_CASE("json round trip") {
  IceQuiver q = labardini_quiver();
  nlohmann::json j = quiver_to_json(q);
  CHECK(j["n"] == 3);
  CHECK(j["m"] == 3);
  CHECK(j["arrows"].size() == 6);
  IceQuiver back = quiver_from_json(j);
  CHECK(back.arrows == q.arrows);
  CHECK(quiver_to_json(back) == j);

  IceQuiver mq = mutate(q, 1);
  IceQuiver back2 = quiver_from_json(quiver_to_json(mq));
  CHECK(back2.arrows == mq.arrows);

  CHECK_THROWS_AS(quiver_from_json(nlohmann::json{{"n", 2}}), std::invalid_argument);
}
