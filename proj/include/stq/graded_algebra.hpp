#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stq/matrix.hpp"

namespace stq {

struct AlgebraElt {
  std::string label;
  int deg = 0;
  // Additive order of the coefficient group on this basis element:
  // 0 = free over the ring, m >= 2 = Z/m summand.
  Int order = 0;
};

// Sparse module element: (basis index, coefficient), indices strictly
// increasing, coefficients nonzero and reduced mod the element's order.
using SparseVec = std::vector<std::pair<int, Int>>;

SparseVec sparse_add(const SparseVec& a, const SparseVec& b);
SparseVec sparse_scale(const SparseVec& a, const Int& c);
std::string sparse_to_string(const SparseVec& v,
                             const std::vector<AlgebraElt>& elts);

// Finite chunk of a graded algebra: explicit basis, explicit product table.
// Missing table entries read as zero. Products whose degree leaves the built
// window raise DegreeOverflow rather than pretending to be zero.
class GradedAlgebra {
public:
  int add_elt(const std::string& label, int deg, const Int& order = Int(0));
  void set_product(int i, int j, SparseVec value);
  void set_unit(int idx);
  void set_degree_cap(int cap) { cap_ = cap; }

  int size() const { return static_cast<int>(elts_.size()); }
  const AlgebraElt& elt(int i) const { return elts_[i]; }
  const std::vector<AlgebraElt>& elts() const { return elts_; }
  int unit() const { return unit_; }
  int degree_cap() const { return cap_; }
  std::optional<int> find(const std::string& label) const;
  std::vector<int> in_degree(int d) const;
  int min_degree() const;
  int max_degree() const;

  SparseVec mult(int i, int j) const;
  SparseVec mult(const SparseVec& a, const SparseVec& b) const;

  // Shift every degree down by the given amount, keeping labels and products.
  GradedAlgebra regraded(int shift_down) const;
  void rename(const std::string& from, const std::string& to);

  // Degree additivity and torsion consistency of the table; associativity
  // on every triple inside the degree window when asked.
  void validate(bool check_associativity) const;

  // Reduce a coefficient into canonical form for basis element i.
  Int reduce_coeff(int i, const Int& c) const;

private:
  std::vector<AlgebraElt> elts_;
  std::map<std::pair<int, int>, SparseVec> table_;
  int unit_ = -1;
  int cap_ = std::numeric_limits<int>::max();
};

// Generator of a free graded-commutative algebra model.
struct GenSpec {
  std::string label;
  int deg = 0;
  bool exterior = false; // square is zero
  Int coeff_order = 0;   // 0 = free coefficients, m >= 2 = Z/m coefficients
  int truncate_power = 0; // 0 = unbounded, k = powers above k vanish
};

// Monomial basis up to max_deg with Koszul signs baked into the table.
// Generators must have positive degree.
GradedAlgebra free_graded_commutative(const std::vector<GenSpec>& gens,
                                      int max_deg);

// Intersection-product model built from a cup product table of a closed
// oriented manifold of the given dimension: basis in degrees [-dim, 0],
// degree -k holding what cohomological degree k held, products verbatim.
// The unit is the class of the manifold, the point class sits in degree -dim.
// Fails with NotPoincareDuality unless the top degree is free of rank one
// and every complementary pairing into it is invertible over the ring.
struct IntersectionAlgebra {
  GradedAlgebra alg;
  int dim = 0;
  int unit_idx = -1;
  int point_idx = -1;
};
IntersectionAlgebra intersection_from_cup(const GradedAlgebra& cup, int dim,
                                          const Ring& ring);

} // namespace stq
