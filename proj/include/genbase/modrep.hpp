#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "genbase/fdalg.hpp"
#include "genbase/linalg.hpp"

namespace genbase {

// Right modules over an FDAlgebra, stored as quiver representations: a space
// M_v per vertex and, for each arrow a: i -> j, a matrix of shape d_i x d_j
// sending coordinates of m in M_j to coordinates of m*a in M_i. Words act
// letter by letter, leftmost displayed letter first. The documented JSON
// shape d_j x d_i is the transpose of this internal layout.
template <class K>
struct ModuleT {
  AlgebraPtr alg;
  std::vector<int> dims;      // indexed by vertex - 1
  std::vector<Mat<K>> action; // indexed like alg->quiver.arrows
  K zero{};

  int dim_at(int v) const { return dims[static_cast<size_t>(v) - 1]; }
  int total_dim() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
  }
  int offset(int v) const {
    int t = 0;
    for (int u = 1; u < v; ++u) t += dim_at(u);
    return t;
  }
};

using Module = ModuleT<Rat>;
using ModuleP = ModuleT<Fp>;

struct ModuleMorphism {
  Module source;
  Module target;
  std::vector<Mat<Rat>> mats; // per vertex, shape (target d_v) x (source d_v)
};

// Validates shapes, relation actions, and that every composable path acts as
// its normal-form class, so the representation factors through the algebra.
Module make_module(const AlgebraPtr& alg, std::vector<int> dims, std::vector<Mat<Rat>> action);
ModuleP make_module_fp(const AlgebraPtr& alg, std::vector<int> dims, std::vector<Mat<Fp>> action,
                       uint32_t p);

Module zero_module(const AlgebraPtr& alg);
Module simple_module(const AlgebraPtr& alg, int v);
Module projective_module(const AlgebraPtr& alg, int v);
Module injective_module(const AlgebraPtr& alg, int v);
Module projective_sum(const AlgebraPtr& alg, const std::vector<int>& vertices);
Module injective_sum(const AlgebraPtr& alg, const std::vector<int>& vertices);
Module direct_sum(const Module& a, const Module& b);

// Matrix of the right action of a composable arrow word (display order) or of
// an algebra basis element; idempotents act as the identity on their vertex.
Mat<Rat> word_action(const Module& m, const std::vector<int>& arrows, int end_vertex);
Mat<Rat> elem_action(const Module& m, int basis_index);

ModuleMorphism make_morphism(Module source, Module target, std::vector<Mat<Rat>> mats);
ModuleMorphism zero_morphism(Module source, Module target);
ModuleMorphism identity_morphism(Module m);
ModuleMorphism compose(const ModuleMorphism& g, const ModuleMorphism& f);

// Basis of Hom(M, N) by exact nullspace of the intertwiner equations.
std::vector<ModuleMorphism> hom_basis(const Module& m, const Module& n);

// dim Hom(M, N) via a minimal presentation of M and the Yoneda identification
// Hom(P_v, N) = N_v; agrees with hom_basis().size() but scales better.
int hom_dim(const Module& m, const Module& n);

std::pair<Module, ModuleMorphism> kernel(const ModuleMorphism& f);   // (K, inclusion)
std::pair<Module, ModuleMorphism> cokernel(const ModuleMorphism& f); // (C, projection)

std::vector<int> top_dims(const Module& m);
std::vector<int> socle_dims(const Module& m);

struct Presentation {
  std::vector<int> t1;  // vertices of the P1 summands, ascending
  std::vector<int> t0;  // vertices of the P0 summands, ascending
  ModuleMorphism f;     // P(t1) -> P(t0)
  ModuleMorphism cover; // P(t0) -> M, a projective cover
};

Presentation minimal_projective_presentation(const Module& m);

struct Copresentation {
  std::vector<int> i0;
  std::vector<int> i1;
  ModuleMorphism g;     // I(i0) -> I(i1)
  ModuleMorphism embed; // M -> I(i0), an injective envelope
};

Copresentation minimal_injective_copresentation(const Module& m);

// D Tr via the minimal presentation; the zero module when m is projective.
Module ar_translate(const Module& m);

// dim coker(Hom(P0, n) -> Hom(Omega, n)) for the syzygy Omega = ker(P0 -> m).
int ext1_dim(const Module& m, const Module& n);

// Module over opposite(m.alg) with all action matrices transposed.
Module dual(const Module& m);

// Indecomposable summands via Fitting decompositions of random endomorphisms.
// Indecomposability is certified by End/rad being one-dimensional; throws
// when the retry budget is exhausted without a certificate.
std::vector<Module> decompose(const Module& m, uint64_t seed = 0);

// dim of End(m) modulo its radical (rank of the trace form on End).
int end_mod_rad_dim(const Module& m);

bool is_isomorphic(const Module& m, const Module& n);

// Reduction mod p; nullopt when p divides a denominator or an action matrix
// drops rank (non-generic reduction).
std::optional<ModuleP> module_mod_p(const Module& m, uint32_t p);

// Plain entrywise reduction mod p with no genericity checks; throws when p
// divides a denominator. Pair with integral_form to reduce at any prime.
ModuleP reduce_mod_p(const Module& m, uint32_t p);

// Isomorphic module with integer action matrices: saturates the standard
// lattice under the action (Hermite normal form bases per vertex) and
// rewrites the action in those bases. Makes reduction mod any prime possible.
Module integral_form(const Module& m);

// Hom(P(src), P(dst)) between projective sums has a canonical basis: left
// multiplications by algebra basis elements, one per (dst summand r, src
// summand s, element of the block from dst[r] to src[s]).
struct ProjHomElem {
  int r = 0;
  int s = 0;
  int elem = 0; // algebra basis index
};

std::vector<ProjHomElem> proj_hom_elems(const AlgebraPtr& alg, const std::vector<int>& src,
                                        const std::vector<int>& dst);

// Coordinate layout of P(vertices) at a vertex v: one (summand, algebra basis
// index) pair per coordinate, summands in list order, blocks in basis order.
std::vector<std::pair<int, int>> proj_layout(const AlgebraPtr& alg,
                                             const std::vector<int>& vertices, int v);

// Coordinate layout of I(vertices) at a vertex v: dual basis vectors of the
// blocks from v to each summand vertex, summands in list order.
std::vector<std::pair<int, int>> inj_layout(const AlgebraPtr& alg,
                                            const std::vector<int>& vertices, int v);

ModuleMorphism proj_morphism(const AlgebraPtr& alg, const std::vector<int>& src,
                             const std::vector<int>& dst, const std::vector<Rat>& coords);

// Inverse of proj_morphism: algebra coordinates of a morphism between
// projective sums, row-major over (dst summand, src summand) pairs.
std::vector<std::vector<Rat>> proj_morphism_coords(const ModuleMorphism& f,
                                                   const std::vector<int>& src,
                                                   const std::vector<int>& dst);

nlohmann::json module_to_json(const Module& m);
nlohmann::json module_to_json(const ModuleP& m);
Module module_from_json(const AlgebraPtr& alg, const nlohmann::json& j);
ModuleP module_fp_from_json(const AlgebraPtr& alg, const nlohmann::json& j);

} // namespace genbase
