/*
 * Vanishing conditions at branches of infinity and their exact
 * nullspace over Q(zeta_p).
 *
 * A monomial x^i0 prod y_l^i_l expands at a chosen branch into a
 * Puiseux series in x^(1/p); requiring the combination to vanish at a
 * set of branches kills every coefficient of x^(e/p) for e = 0..delta.
 * The resulting linear system is eliminated fraction-free, and basis
 * vectors come back integral with content one.
 */
#ifndef RUNGEKIT_LINEAR_SYSTEM_HPP
#define RUNGEKIT_LINEAR_SYSTEM_HPP

#include <cstddef>
#include <vector>

#include "rungekit/bounds.hpp"
#include "rungekit/puiseux.hpp"
#include "rungekit/rounded.hpp"

namespace rungekit {

// Branch assignments modulo the deck rotation j_l -> j_l + c * deg f_l:
// rotating the sheet at infinity rescales every vanishing row by a root
// of unity, so only the orbit matters.  Representatives are the
// lexicographically smallest orbit members, sorted.
std::vector<BranchAssignment> branch_classes(unsigned p,
                                             const std::vector<unsigned>& degs);

BranchAssignment canonical_branch(const BranchAssignment& a, unsigned p,
                                  const std::vector<unsigned>& degs);

struct BranchMatrix {
  unsigned p = 2;
  unsigned delta = 0;
  std::vector<unsigned> degs;
  std::vector<std::vector<unsigned>> monomials;  // column exponent tuples
  std::vector<BranchAssignment> places;
  // (delta + 1) * places.size() rows; row (place_index * (delta+1) + e)
  // is the coefficient of x^(e/p) at that place, per column.
  std::vector<std::vector<CycloNumber>> rows;
};

// fs monic, squarefree, pairwise coprime; places picks the branch
// classes where the auxiliary function must vanish.  Assignments
// inducing the same point at infinity are deduplicated.
BranchMatrix build_branch_matrix(const std::vector<RationalPoly>& fs,
                                 unsigned p, unsigned delta,
                                 const std::vector<BranchAssignment>& places);

// A combination g = sum c_mu x^i0 y_1^i1 ... y_r^ir from the nullspace:
// vanishes at every imposed branch of infinity.
struct AuxFunction {
  unsigned p = 2;
  unsigned delta = 0;
  std::vector<std::vector<unsigned>> monomials;
  std::vector<CycloNumber> coeffs;
};

struct NullspaceResult {
  unsigned rank = 0;
  std::vector<std::size_t> pivot_columns;
  // Each basis vector is integral over Z[zeta_p], content one, first
  // nonzero coordinate positive in its leading rational coordinate.
  std::vector<std::vector<CycloNumber>> basis;
};

// Fraction-free elimination (Bareiss) with smallest-height pivots,
// ties broken by lowest row index.
NullspaceResult cyclotomic_nullspace(std::vector<std::vector<CycloNumber>> rows,
                                     unsigned p);

// Exact check that A v = 0.
bool verify_vanishing(const BranchMatrix& a, const std::vector<CycloNumber>& v);

// Nullspace basis vectors wrapped as auxiliary functions.
std::vector<AuxFunction> aux_functions(const BranchMatrix& a);

// Re-expands every series from scratch at truncation `depth` and checks
// that the substituted combination has no surviving coefficient at any
// exponent >= 0.  depth must exceed delta.
bool verify_aux(const AuxFunction& g, const std::vector<RationalPoly>& fs,
                const std::vector<BranchAssignment>& places, unsigned depth);

// g evaluated at rational x with chosen root values y_l.
CycloNumber evaluate_aux(const AuxFunction& g, const mpq_class& x,
                         const std::vector<mpq_class>& ys);

struct MatrixHeightReport {
  LogBound computed;   // projective height of the entry vector, log scale
  LogBound a_priori;   // (2 p^2 B)^(delta/p) / p, log scale
  bool certified;      // computed provably below a_priori
};

// Projective height of the cleared integral entry vector, bracketed by
// the norm mean from below and the coordinate 1-norm from above, against
// the expansion-coefficient a-priori bound.  B bounds every |f_l| + 1.
MatrixHeightReport matrix_height(const BranchMatrix& a, const mpq_class& B,
                                 unsigned prec = 0);

// Rows scaled to primitive integral form (row scaling preserves the
// nullspace): denominators cleared, content divided out.
std::vector<std::vector<CycloNumber>> primitive_rows(
    std::vector<std::vector<CycloNumber>> rows);

// Bracket on max_{entries, embeddings} |entry|: the mean-square of the
// conjugates from below, the coordinate 1-norm from above.  Exact at
// p = 2.  Requires a nonzero entry somewhere.
Rounded matrix_sup_height(const std::vector<std::vector<CycloNumber>>& rows,
                          unsigned p, unsigned prec = 0);

// Same bracket for a single vector.
Rounded vector_sup_height(const std::vector<CycloNumber>& v, unsigned p,
                          unsigned prec = 0);

}  // namespace rungekit

#endif
