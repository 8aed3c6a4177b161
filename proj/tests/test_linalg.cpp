#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "genbase/linalg.hpp"

using namespace genbase;

namespace {

Mat<Rat> from_rows(const std::vector<std::vector<int>>& rows) {
  int nr = static_cast<int>(rows.size());
  int nc = nr ? static_cast<int>(rows[0].size()) : 0;
  Mat<Rat> m = rat_mat(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) m.at(i, j) = rows[i][j];
  return m;
}

Mat<Rat> random_mat(std::mt19937_64& rng, int nr, int nc) {
  Mat<Rat> m = rat_mat(nr, nc);
  for (auto& v : m.a) v = static_cast<int>(rng() % 11) - 5;
  return m;
}

} // namespace

TEST_CASE("rank and nullspace over the rationals") {
  Mat<Rat> a = from_rows({{1, 2, 3}, {2, 4, 6}, {1, 1, 1}});
  CHECK(mat_rank(a) == 2);
  Mat<Rat> ns = nullspace(a);
  CHECK(ns.nc == 1);
  Mat<Rat> prod = mat_mul(a, ns);
  for (const auto& v : prod.a) CHECK(v == 0);

  CHECK(mat_rank(mat_identity(4, Rat(0))) == 4);
  CHECK(mat_rank(rat_mat(3, 5)) == 0);
}

TEST_CASE("solve finds exact solutions") {
  Mat<Rat> a = from_rows({{2, 1}, {1, 3}});
  Mat<Rat> b = from_rows({{5}, {10}});
  auto x = mat_solve(a, b);
  REQUIRE(x.has_value());
  CHECK(mat_mul(a, *x) == b);

  Mat<Rat> inconsistent = from_rows({{1, 1}, {1, 1}});
  Mat<Rat> rhs = from_rows({{1}, {2}});
  CHECK(!mat_solve(inconsistent, rhs).has_value());
}

TEST_CASE("characteristic polynomial") {
  Mat<Rat> a = from_rows({{2, 1}, {0, 3}});
  std::vector<Rat> cp = charpoly(a);
  REQUIRE(cp.size() == 3);
  CHECK(cp[0] == 6);
  CHECK(cp[1] == -5);
  CHECK(cp[2] == 1);

  // Cayley-Hamilton on a random matrix.
  std::mt19937_64 rng(99);
  Mat<Rat> m = random_mat(rng, 5, 5);
  std::vector<Rat> c = charpoly(m);
  Mat<Rat> acc = rat_mat(5, 5);
  Mat<Rat> power = mat_identity(5, Rat(0));
  for (size_t k = 0; k < c.size(); ++k) {
    acc = mat_add(acc, mat_scale(power, c[k]));
    power = mat_mul(power, m);
  }
  for (const auto& v : acc.a) CHECK(v == 0);
}

TEST_CASE("prime field arithmetic") {
  Fp a = fp_make(9, 7);
  CHECK(a.v == 2);
  Fp b = fp_make(-1, 7);
  CHECK(b.v == 6);
  CHECK((a * fp_inv(a)).v == 1);
  CHECK((b + fp_make(1, 7)).v == 0);
  CHECK_THROWS_AS(fp_inv(fp_make(0, 5)), std::invalid_argument);

  auto r = fp_from_rat(Rat(1) / 3, 5);
  REQUIRE(r.has_value());
  CHECK((*r * fp_make(3, 5)).v == 1);
  CHECK(!fp_from_rat(Rat(1) / 5, 5).has_value());
}

TEST_CASE("rank agrees across transpose and reductions") {
  std::mt19937_64 rng(12345);
  for (int iter = 0; iter < 200; ++iter) {
    int nr = 1 + static_cast<int>(rng() % 6);
    int nc = 1 + static_cast<int>(rng() % 6);
    Mat<Rat> m = random_mat(rng, nr, nc);
    int rk = mat_rank(m);
    REQUIRE(mat_rank(mat_transpose(m)) == rk);
    Mat<Rat> ns = nullspace(m);
    REQUIRE(ns.nc == nc - rk);
    Mat<Rat> z = mat_mul(m, ns);
    for (const auto& v : z.a) REQUIRE(v == 0);

    // Integer matrices keep their rank mod large enough primes; 10007 exceeds
    // any minor these small entries can produce only in rare cases, so we just
    // check rank can only drop under reduction.
    Mat<Fp> mp = fp_mat(nr, nc, 10007);
    for (size_t i = 0; i < m.a.size(); ++i) mp.a[i] = *fp_from_rat(m.a[i], 10007);
    REQUIRE(mat_rank(mp) <= rk);
  }
}
