#include "genbase/linalg.hpp"

namespace genbase {

Fp fp_inv(Fp a) {
  if (a.v == 0) throw std::invalid_argument("linalg: inverting zero mod p");
  int64_t t = 0, new_t = 1;
  int64_t r = a.p, new_r = a.v;
  while (new_r != 0) {
    int64_t q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw std::invalid_argument("linalg: modulus is not prime");
  if (t < 0) t += a.p;
  return {static_cast<uint32_t>(t), a.p};
}

std::optional<Fp> fp_from_rat(const Rat& x, uint32_t p) {
  Int num = boost::multiprecision::numerator(x);
  Int den = boost::multiprecision::denominator(x);
  Int pi(p);
  if (den % pi == 0) return std::nullopt;
  auto reduce = [&](const Int& v) -> uint32_t {
    Int r = v % pi;
    if (r < 0) r += pi;
    return r.convert_to<uint32_t>();
  };
  Fp n{reduce(num), p};
  Fp d{reduce(den), p};
  return n * fp_inv(d);
}

std::vector<Rat> charpoly(const Mat<Rat>& m) {
  if (m.nr != m.nc) throw std::invalid_argument("linalg: charpoly wants a square matrix");
  int n = m.nr;
  // Faddeev-LeVerrier: exact over the rationals, no pivoting concerns.
  std::vector<Rat> c(n + 1, Rat(0));
  c[n] = 1;
  Mat<Rat> mk = rat_mat(n, n); // running A * M_{k-1}
  Mat<Rat> id = mat_identity(n, Rat(0));
  Mat<Rat> prev = id;
  for (int k = 1; k <= n; ++k) {
    mk = mat_mul(m, prev);
    Rat tr = 0;
    for (int i = 0; i < n; ++i) tr += mk.at(i, i);
    Rat ck = -tr / k;
    c[n - k] = ck;
    prev = mk;
    for (int i = 0; i < n; ++i) prev.at(i, i) += ck;
  }
  return c;
}

} // namespace genbase
