#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "genbase/modrep.hpp"

namespace genbase {

// Element of the split Grothendieck group of projectives: g[v - 1] counts the
// copies of P_v, positive entries on the target side of a two-term complex
// and negative entries on the source side.
struct DeltaVector {
  std::vector<Int> g;

  bool operator==(const DeltaVector& o) const { return g == o.g; }
  bool operator!=(const DeltaVector& o) const { return g != o.g; }
  bool operator<(const DeltaVector& o) const { return g < o.g; }
};

// A morphism f between sums of indecomposable projectives, from the summands
// listed in p1 to the summands listed in p0.
struct TwoTermComplex {
  std::vector<int> p1;
  std::vector<int> p0;
  ModuleMorphism f;
};

// Record of a sampling run over the presentation space of a delta vector.
struct GenericStats {
  DeltaVector delta;
  int samples = 0;
  std::vector<int> min_kernel_dim; // kernel of the induced map of injectives
  int e_self = 0;                  // E-invariant of the kept sample against itself
  int hom_tau = 0;                 // dim Hom(coker f, tau coker f) at the kept sample
  bool stable = false;             // true when the final round improved nothing
};

// Positive and negative part of a delta vector as vertex multisets: first the
// target summands (positive entries), then the source summands (negated
// negative entries), each listed in ascending vertex order.
std::pair<std::vector<int>, std::vector<int>> delta_split(const DeltaVector& d);

// dim Hom(P(f.p1), P(g.p0)) minus the rank of the homotopy map
// (h1, h0) -> g.f * h1 - h0 * f.f.
int e_dim(const TwoTermComplex& f, const TwoTermComplex& g);

// The same invariant computed on the module side: the dimension of the
// cokernel of the restriction Hom(P(f.p0), N) -> Hom(P(f.p1), N) along f.f,
// where N = coker(g.f).
int e_dim_coker(const TwoTermComplex& f, const TwoTermComplex& g);

// Image of the complex under the Nakayama functor: the induced morphism
// between the corresponding sums of injectives.
ModuleMorphism nu_morphism(const TwoTermComplex& c);

// Draws `trials` integer coordinate vectors of height at most `height` for a
// morphism P(negative part) -> P(positive part), keeps the sample minimizing
// (kernel dims of the injective image, self E-invariant) lexicographically,
// and reports the minima. Identical seeds give identical results.
std::pair<TwoTermComplex, GenericStats> generic_sample(const AlgebraPtr& alg,
                                                       const DeltaVector& d, int trials = 8,
                                                       uint64_t seed = 0, int height = 97);

// Splits d into summands whose sampled complexes have vanishing E-invariants
// against each other in both orders, searching candidate summands in the
// componentwise box between 0 and d. Summands are returned in descending
// lexicographic order and sum to d; pairwise vanishing and sign coherence are
// rechecked on fresh samples before returning.
std::vector<DeltaVector> canonical_decomposition(const AlgebraPtr& alg, const DeltaVector& d,
                                                 uint64_t seed = 0);

// True when no coordinate has strictly opposite signs in a and b.
bool is_sign_coherent(const DeltaVector& a, const DeltaVector& b);

// Tropical mutation at a mutable vertex i, with arrow counts taken in q:
// the i-th entry flips sign, and every other vertex j gains
// m(j -> i) * max(g_i, 0) - m(i -> j) * max(-g_i, 0).
DeltaVector mutate_delta(const DeltaVector& d, int i, const IceQuiver& q);

// Restriction to the mutable vertices 1..q.m.
DeltaVector project_frozen(const DeltaVector& d, const IceQuiver& q);

// Completion of a delta vector over the mutable part: pads frozen entries
// with the multiplicities of the frozen projectives split off by a generic
// presentation, determined by sampling as in generic_sample. Throws
// StabilizationError when the multiplicities still improve in the last round.
DeltaVector lift_frozen(const DeltaVector& dbar, const AlgebraPtr& alg, int trials = 8,
                        uint64_t seed = 0, int height = 97);

nlohmann::json delta_to_json(const DeltaVector& d);
DeltaVector delta_from_json(const nlohmann::json& j);
nlohmann::json stats_to_json(const GenericStats& s);

} // namespace genbase
