#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "genbase/potential.hpp"

namespace genbase {

// Raised when the truncated quotient still changes between the requested
// length bound and the bound plus one; raise the bound, or the quotient may
// be infinite-dimensional.
struct StabilizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One basis element: a path normal form. `arrows` holds quiver arrow indices
// in display order (see potential.hpp) for algebras built by path reduction;
// basis elements imported into a corner algebra keep arrows empty and are
// identified by label. `length` is the path-filtration degree, 0 exactly for
// the vertex idempotents.
struct AlgebraElem {
  int wstart = 0;
  int wend = 0;
  int length = 0;
  std::vector<int> arrows;
  std::string label;
};

struct FDAlgebra;
using AlgebraPtr = std::shared_ptr<const FDAlgebra>;

// Finite-dimensional quotient of a path algebra on an explicit normal-form
// basis. Vertex idempotents occupy basis indices 0..n-1 in vertex order.
// Immutable once built; always handled through AlgebraPtr.
struct FDAlgebra {
  IceQuiver quiver;
  std::vector<AlgebraElem> basis;
  std::vector<int> arrow_elem;      // quiver arrow index -> basis index
  std::vector<PathCombination> relations;
  std::vector<int> original_vertex; // corner algebras remember parent vertices
  int max_basis_length = 0;
  // True when relations together with the path length bound present the
  // algebra over its quiver; false for corner algebras, whose basis labels
  // refer to parent paths. Module categories are only hosted when true.
  bool presented_by_quiver = true;

  int dim() const { return static_cast<int>(basis.size()); }
  int idempotent_index(int v) const { return v - 1; }

  // Coordinates of basis[i] * basis[j]; empty when wstart(i) != wend(j).
  std::map<int, Rat> mult(int i, int j) const;
  // acc += c * (basis[i] * basis[j]); acc is dense of size dim().
  void mult_acc(int i, int j, const Rat& c, std::vector<Rat>& acc) const;

  // Basis indices spanning e_end * A * e_start.
  std::vector<int> block(int end_vertex, int start_vertex) const;

  // Coordinates of a nonempty composable path given by arrow display ids.
  // Exact for paths of any length. Throws std::invalid_argument on bad input.
  std::vector<Rat> reduce_path(const std::vector<std::string>& ids) const;
  std::vector<Rat> reduce(const PathCombination& r) const;

  bool dense_storage = false;
  std::vector<std::vector<Rat>> dense_mult; // dim*dim slots, empty slot = zero
  std::map<std::pair<int, int>, std::map<int, Rat>> sparse_mult;
  mutable std::weak_ptr<const FDAlgebra> opposite_cache;
};

// Quotient of the path algebra of q by the closure of the two-sided ideal
// generated by the relations, computed exactly by truncation at the length
// bound. Stabilization (identical normal forms at the bound and one above)
// is required and certifies exactness; otherwise StabilizationError.
AlgebraPtr from_relations(const IceQuiver& q, const std::vector<PathCombination>& relations,
                          int length_bound);

// Same quotient with relations the cyclic derivatives of the potential.
AlgebraPtr jacobian_algebra(const IceQuiver& q, const Potential& w, int length_bound);

// Opposite algebra: reversed quiver and words, transposed products. Cached,
// so opposite(opposite(a)) returns a itself.
AlgebraPtr opposite(const AlgebraPtr& alg);

// e A e for e the sum of idempotents over the given vertices, on its induced
// basis, with vertices renumbered 1..k in ascending order. The presentation
// quiver has one arrow per basis vector of rad/rad^2 (loops allowed).
AlgebraPtr corner(const AlgebraPtr& alg, const std::vector<int>& vertices);

// True iff every cyclic derivative of w reduces to zero in alg and the
// radical of alg is nilpotent.
bool check_relations(const FDAlgebra& alg, const Potential& w);

} // namespace genbase
