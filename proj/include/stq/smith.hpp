#pragma once

#include <optional>
#include <vector>

#include "stq/matrix.hpp"

namespace stq {

// u * a * v == d with u, v unimodular and d diagonal, d[0][0] | d[1][1] | ...
// and every diagonal entry nonnegative. u_inv and v_inv are the exact
// inverses, accumulated alongside.
struct SmithDecomposition {
  IntMatrix u, v, d;
  IntMatrix u_inv, v_inv;
  int diag_len() const { return std::min(d.rows(), d.cols()); }
  Int diag(int i) const {
    return i < diag_len() ? d.at(i, i) : Int(0);
  }
};

// Deterministic Smith normal form. Pivot choice at each step: the smallest
// nonzero entry in magnitude within the active submatrix, ties broken by
// lowest (row, col) pair. A pivot is only finalized once it divides every
// entry of the remaining submatrix.
SmithDecomposition smith_normal_form(const IntMatrix& a);

// Rank of the induced map over the ring (number of diagonal units/nonzeros).
int rank_over(const SmithDecomposition& s, const Ring& ring);

// Basis for {x : a x = 0 over the ring}. Over Z the columns form a basis of
// the full kernel sublattice (saturated). Over Z/p entries are reduced.
IntMatrix kernel_basis(const IntMatrix& a, const Ring& ring);

// Basis of the column span. Over Z this is a lattice basis of the integer
// column span; over a field, a basis of the column space.
IntMatrix column_span_basis(const IntMatrix& a, const Ring& ring);

// Smallest saturated sublattice containing the integer column span
// (the set of integer vectors some multiple of which lies in the span).
IntMatrix saturate(const IntMatrix& lattice);

// Exact solution of a x = b. Over Z and Z/p a solution with den == 1;
// over the rationals x = num / den. ok == false means no solution exists
// over the ring, which is an ordinary value here, not an error.
struct SolveResult {
  bool ok = false;
  IntVec x;
  Int den = 1;
};
SolveResult solve_linear(const IntMatrix& a, const IntVec& b, const Ring& ring);

// Integral solve only: succeeds iff b lies in the integer column span
// (mod p over prime fields). Over the rationals behaves like the integer
// case; callers that want denominators use solve_linear.
std::optional<IntVec> solve_integral(const IntMatrix& a, const IntVec& b,
                                     const Ring& ring);

// Basis of {x : a x lies in the span of r} over the ring. Over Z the span of
// r is its integer column span and the result is a basis of the exact
// preimage lattice (not saturated unless it happens to be). Over the
// rationals the result is the saturated integer lattice of the rational
// preimage subspace.
IntMatrix kernel_mod(const IntMatrix& a, const IntMatrix& r, const Ring& ring);

// Presentation of Z^rank / (relations) over the ring, relations given as
// columns in the ambient coordinates. Generators come out free-first, then
// torsion in increasing order. aux spans what was dropped from the generator
// list but is still needed to express ambient vectors integrally
// (rational runs drop would-be torsion classes).
struct QuotientPresentation {
  std::vector<Int> orders;   // aligned with gens columns; 0 = free, m >= 2 torsion
  IntMatrix gens;            // rank x g, columns in ambient coordinates
  IntMatrix aux;             // rank x a
};
QuotientPresentation quotient_presentation(int rank, const IntMatrix& relations,
                                           const Ring& ring);

} // namespace stq
