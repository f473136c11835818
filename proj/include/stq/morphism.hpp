#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stq/spectral.hpp"
#include "stq/string_products.hpp"

namespace stq {

struct MorphismOptions {
  // Base codimension of the inducing embedding. Commutation with the page
  // differentials is checked as d' o M = (-1)^k_base * M o d.
  int k_base = 0;
  // Declared ring-map behaviour. True requires a zero shift and makes the
  // second-page map checked against products on every basis pair in window.
  bool multiplicative = false;
  std::string name = "morphism";
};

// Bidegree-shifted map of spectral sequences: one matrix per page and source
// bidegree, rows over the target entry at the shifted bidegree, columns over
// the source entry. Absent matrices are zero. The two sequences are only
// viewed, not owned, and must outlive the morphism.
struct SSMorphism {
  const SpectralSequence* source = nullptr;
  const SpectralSequence* target = nullptr;
  std::string name;
  Bidegree shift{0, 0};
  int k_base = 0;
  bool multiplicative = false;
  int last_page = 2;
  std::map<int, std::map<Bidegree, ScaledMatrix>> maps;

  const ScaledMatrix* map_at(int r, Bidegree at) const;
  PageClass apply(const PageClass& c) const;
};

// Map of spectral sequences induced by a shriek map: the base matrix sends
// source base classes to target base classes shifting the column by
// shift.first, the fiber matrix sends fiber generators to fiber generators
// and extends to monomials as an algebra map, which pins the fiber shift to
// zero. The second-page map is the tensor of the two; later pages restrict
// it to the surviving classes. Commutation with the differentials of both
// runs is verified page by page inside the certified window and failures
// are listed per bidegree under NotChainMap, so a map that ships is a chain
// map on every page it covers.
SSMorphism shriek_morphism(const SpectralSequence& source,
                           const SpectralSequence& target,
                           const IntMatrix& base_matrix,
                           const IntMatrix& fiber_matrix, Bidegree shift,
                           const MorphismOptions& opts = {});

// outer o inner; the middle sequence must be shared.
SSMorphism compose_morphisms(const SSMorphism& outer, const SSMorphism& inner);

// Comparison from the path-space stack over M x M to the loop stack of M,
// dropping the column by dim M: a cross class x cross y goes to the
// intersection product x . y with the sign (-1)^(dim M * deg_h x), the
// fiber is untouched. The sign is what makes this commute with the page
// differentials; the map is recorded as not multiplicative, and with the
// column shift no bidegree-preserving product comparison exists at all.
SSMorphism diagonal_comparison(const LoopAlgebraModel& model,
                               const SpectralSequence& paths,
                               const SpectralSequence& loops);

// Loop model of a product manifold N x U, remembering how each basis class
// and fiber generator decomposes over the factors. Right-factor generator
// labels get a prime so the two Pontryagin algebras stay distinguishable.
struct ProductLoopModel {
  LoopAlgebraModel model;
  std::vector<std::pair<int, int>> base_factors; // (left elt, right elt)
  std::vector<int> fiber_from;                   // 0 = left, 1 = right
};
ProductLoopModel product_loop_model(const LoopAlgebraModel& left,
                                    const LoopAlgebraModel& right);

// Standard embedding N = N x point inside N x U: the shriek matrix keeps
// exactly the components over the right fundamental class.
SubmanifoldSpec left_factor_embedding(const ProductLoopModel& pm,
                                      const LoopAlgebraModel& left);

// The projection remark data for M = N x U: restricting loops to basepoints
// on N, then projecting the restricted stack onto LN, against the one-step
// projection onto the LN model factor. The two routes are built
// independently; agreement is the caller's theorem to check.
struct ProjectionComparison {
  SSMorphism to_restricted; // shriek of LN x Omega U inside L(N x U)
  SSMorphism to_loops;      // kills the Omega U fiber factor over base N
  SSMorphism composite;     // to_loops after to_restricted
  SSMorphism direct;        // one-step projection onto the LN model factor
};
ProjectionComparison projection_comparison(const ProductLoopModel& pm,
                                           const LoopAlgebraModel& left,
                                           const SpectralSequence& product_ss,
                                           const SpectralSequence& restricted_ss,
                                           const SpectralSequence& loop_ss);

} // namespace stq
