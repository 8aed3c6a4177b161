#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "genbase/homalg.hpp"
#include "genbase/laurent.hpp"
#include "genbase/quiver.hpp"

namespace genbase {

// Euler characteristics of the quiver Grassmannians of a module: chi maps
// every sub-dimension vector e with 0 <= e <= dims componentwise to
// chi(Gr_e), zeros included.
struct GrassmannProfile {
  std::vector<int> dims;
  std::map<std::vector<int>, Int> chi;
};

// Exact number of subrepresentations of dimension vector e of a module over
// a prime field, by enumerating tuples of row-echelon subspaces closed under
// all arrow actions. Throws runtime_error when the number of candidate
// tuples exceeds the enumeration budget.
Int grassmann_count(const ModuleP& m, const std::vector<int>& e);

// chi(Gr_e) through point counting: the module is reduced modulo successive
// primes (skipping primes that hit denominators or drop a matrix rank), the
// counting polynomial of degree at most sum_i e_i (dims_i - e_i) is
// interpolated and evaluated at 1, and one further prime must confirm the
// interpolant. A mismatch or a fractional value throws runtime_error.
Int euler_char(const Module& m, const std::vector<int>& e);

GrassmannProfile grassmann_profile(const Module& m);

// x^ind * sum_e chi(Gr_e(M)) prod_j yhat_j^{e_j} over the quiver q.
LaurentPoly cluster_character(const Module& m, const DeltaVector& ind, const IceQuiver& q);

// Value of the generic basis map at a full-length delta: the cluster
// character, with index delta, of the kernel of a generic morphism between
// the injective sums attached to the negative and positive parts. Sampling
// follows generic_sample; the run record is written to *stats when given.
LaurentPoly generic_basis_element(const AlgebraPtr& alg, const DeltaVector& d, int trials = 8,
                                  uint64_t seed = 0, GenericStats* stats = nullptr,
                                  int height = 97);

// Exact rank test: true when the coefficient matrix of the values over the
// union of their exponent vectors has rank equal to the number of values.
bool linear_independence_check(const std::vector<LaurentPoly>& values);

} // namespace genbase
