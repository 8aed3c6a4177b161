#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "genbase/rational.hpp"

namespace genbase {

// Prime-field element. The modulus travels with the value so matrices over
// different primes can coexist; mixing moduli in one operation is an error.
struct Fp {
  uint32_t v = 0;
  uint32_t p = 0;
};

inline void check_same_prime(Fp a, Fp b) {
  if (a.p != b.p) throw std::invalid_argument("linalg: mixed prime moduli");
}

inline Fp fp_make(int64_t x, uint32_t p) {
  int64_t r = x % static_cast<int64_t>(p);
  if (r < 0) r += p;
  return {static_cast<uint32_t>(r), p};
}

inline Fp operator+(Fp a, Fp b) {
  check_same_prime(a, b);
  uint64_t s = static_cast<uint64_t>(a.v) + b.v;
  if (s >= a.p) s -= a.p;
  return {static_cast<uint32_t>(s), a.p};
}

inline Fp operator-(Fp a, Fp b) {
  check_same_prime(a, b);
  int64_t s = static_cast<int64_t>(a.v) - b.v;
  if (s < 0) s += a.p;
  return {static_cast<uint32_t>(s), a.p};
}

inline Fp operator*(Fp a, Fp b) {
  check_same_prime(a, b);
  return {static_cast<uint32_t>(static_cast<uint64_t>(a.v) * b.v % a.p), a.p};
}

inline Fp operator-(Fp a) { return {a.v == 0 ? 0 : a.p - a.v, a.p}; }
inline bool operator==(Fp a, Fp b) { return a.v == b.v && a.p == b.p; }

Fp fp_inv(Fp a); // throws on zero

inline bool is_zero(const Rat& x) { return x == 0; }
inline bool is_zero(Fp x) { return x.v == 0; }
inline Rat f_inv(const Rat& x) {
  if (x == 0) throw std::invalid_argument("linalg: inverting zero");
  return 1 / x;
}
inline Fp f_inv(Fp x) { return fp_inv(x); }
inline Rat f_zero(const Rat&) { return Rat(0); }
inline Fp f_zero(Fp x) { return {0, x.p}; }
inline Rat f_one(const Rat&) { return Rat(1); }
inline Fp f_one(Fp x) { return {1, x.p}; }

// Reduces a rational mod p; nullopt when p divides the denominator.
std::optional<Fp> fp_from_rat(const Rat& x, uint32_t p);

// Dense matrix over K in {Rat, Fp}. `zero` is the field's zero element, kept
// explicitly so Fp matrices know their modulus even when empty.
template <class K>
struct Mat {
  int nr = 0;
  int nc = 0;
  K zero{};
  std::vector<K> a;

  Mat() = default;
  Mat(int r, int c, K z) : nr(r), nc(c), zero(z), a(static_cast<size_t>(r) * c, z) {}

  K& at(int i, int j) { return a[static_cast<size_t>(i) * nc + j]; }
  const K& at(int i, int j) const { return a[static_cast<size_t>(i) * nc + j]; }

  bool operator==(const Mat& o) const { return nr == o.nr && nc == o.nc && a == o.a; }
};

inline Mat<Rat> rat_mat(int r, int c) { return Mat<Rat>(r, c, Rat(0)); }
inline Mat<Fp> fp_mat(int r, int c, uint32_t p) { return Mat<Fp>(r, c, Fp{0, p}); }

template <class K>
Mat<K> mat_identity(int n, K zero) {
  Mat<K> m(n, n, zero);
  for (int i = 0; i < n; ++i) m.at(i, i) = f_one(zero);
  return m;
}

template <class K>
Mat<K> mat_mul(const Mat<K>& x, const Mat<K>& y) {
  if (x.nc != y.nr) throw std::invalid_argument("linalg: dimension mismatch in mat_mul");
  Mat<K> r(x.nr, y.nc, x.zero);
  for (int i = 0; i < x.nr; ++i)
    for (int k = 0; k < x.nc; ++k) {
      const K& v = x.at(i, k);
      if (is_zero(v)) continue;
      for (int j = 0; j < y.nc; ++j) {
        if (is_zero(y.at(k, j))) continue;
        r.at(i, j) = r.at(i, j) + v * y.at(k, j);
      }
    }
  return r;
}

template <class K>
Mat<K> mat_add(const Mat<K>& x, const Mat<K>& y) {
  if (x.nr != y.nr || x.nc != y.nc) throw std::invalid_argument("linalg: dimension mismatch in mat_add");
  Mat<K> r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = r.a[i] + y.a[i];
  return r;
}

template <class K>
Mat<K> mat_sub(const Mat<K>& x, const Mat<K>& y) {
  if (x.nr != y.nr || x.nc != y.nc) throw std::invalid_argument("linalg: dimension mismatch in mat_sub");
  Mat<K> r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = r.a[i] - y.a[i];
  return r;
}

template <class K>
Mat<K> mat_scale(const Mat<K>& x, const K& c) {
  Mat<K> r = x;
  for (auto& v : r.a) v = v * c;
  return r;
}

template <class K>
Mat<K> mat_transpose(const Mat<K>& x) {
  Mat<K> r(x.nc, x.nr, x.zero);
  for (int i = 0; i < x.nr; ++i)
    for (int j = 0; j < x.nc; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

template <class K>
Mat<K> mat_hcat(const Mat<K>& x, const Mat<K>& y) {
  if (x.nr != y.nr) throw std::invalid_argument("linalg: row mismatch in mat_hcat");
  Mat<K> r(x.nr, x.nc + y.nc, x.zero);
  for (int i = 0; i < x.nr; ++i) {
    for (int j = 0; j < x.nc; ++j) r.at(i, j) = x.at(i, j);
    for (int j = 0; j < y.nc; ++j) r.at(i, x.nc + j) = y.at(i, j);
  }
  return r;
}

template <class K>
Mat<K> mat_vcat(const Mat<K>& x, const Mat<K>& y) {
  if (x.nc != y.nc) throw std::invalid_argument("linalg: column mismatch in mat_vcat");
  Mat<K> r(x.nr + y.nr, x.nc, x.zero);
  for (int i = 0; i < x.nr; ++i)
    for (int j = 0; j < x.nc; ++j) r.at(i, j) = x.at(i, j);
  for (int i = 0; i < y.nr; ++i)
    for (int j = 0; j < x.nc; ++j) r.at(x.nr + i, j) = y.at(i, j);
  return r;
}

// In-place reduced row echelon form; returns the pivot column indices.
template <class K>
std::vector<int> rref(Mat<K>& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.nc && r < m.nr; ++c) {
    int sel = -1;
    for (int i = r; i < m.nr; ++i)
      if (!is_zero(m.at(i, c))) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != r)
      for (int j = 0; j < m.nc; ++j) std::swap(m.at(sel, j), m.at(r, j));
    K iv = f_inv(m.at(r, c));
    for (int j = c; j < m.nc; ++j) m.at(r, j) = m.at(r, j) * iv;
    for (int i = 0; i < m.nr; ++i) {
      if (i == r || is_zero(m.at(i, c))) continue;
      K f = m.at(i, c);
      for (int j = c; j < m.nc; ++j) m.at(i, j) = m.at(i, j) - f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class K>
int mat_rank(const Mat<K>& m) {
  Mat<K> c = m;
  return static_cast<int>(rref(c).size());
}

// Basis of the right kernel {x : m x = 0}, one basis vector per column.
template <class K>
Mat<K> nullspace(const Mat<K>& m) {
  Mat<K> r = m;
  std::vector<int> pivots = rref(r);
  std::vector<bool> is_pivot(m.nc, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < m.nc; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat<K> basis(m.nc, static_cast<int>(free_cols.size()), m.zero);
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int fc = free_cols[k];
    basis.at(fc, static_cast<int>(k)) = f_one(m.zero);
    for (size_t i = 0; i < pivots.size(); ++i)
      basis.at(pivots[i], static_cast<int>(k)) = -r.at(static_cast<int>(i), fc);
  }
  return basis;
}

// Any solution X of m X = b (free coordinates set to zero), or nullopt.
template <class K>
std::optional<Mat<K>> mat_solve(const Mat<K>& m, const Mat<K>& b) {
  if (m.nr != b.nr) throw std::invalid_argument("linalg: dimension mismatch in mat_solve");
  Mat<K> aug = mat_hcat(m, b);
  std::vector<int> pivots = rref(aug);
  for (int p : pivots)
    if (p >= m.nc) return std::nullopt;
  Mat<K> x(m.nc, b.nc, m.zero);
  for (size_t i = 0; i < pivots.size(); ++i)
    for (int j = 0; j < b.nc; ++j) x.at(pivots[i], j) = aug.at(static_cast<int>(i), m.nc + j);
  return x;
}

// Characteristic polynomial coefficients, constant term first, leading 1 last.
std::vector<Rat> charpoly(const Mat<Rat>& m);

} // namespace genbase
