#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stq/spectral.hpp"

namespace stq {

// Loop-space package of one closed oriented manifold M: the intersection
// algebra on regraded degrees [-dim, 0] with the fundamental class as unit
// and the point class at the bottom, plus generators of the Pontryagin
// algebra of the based loop space. The unit of the Pontryagin algebra is
// the empty monomial and never appears in loop_gens.
struct LoopAlgebraModel {
  std::string name;
  int dim = 0;
  GradedAlgebra intersection;
  int fundamental = -1; // index of [M], the unit, degree 0
  int point = -1;       // index of the point class, degree -dim
  std::vector<GenSpec> loop_gens;

  void validate() const;
};

// Element of the once-shifted homology of M x M, written over the cross
// basis: (left, right) intersection indices -> coefficient. The shifted
// degree of a cross class is deg(left) + deg(right) + dim.
using CrossVec = std::map<std::pair<int, int>, Int>;

// (a x b) <> (c x d) = (point coefficient of b.c) * (a x d), extended
// bilinearly. Projection away from the middle factor keeps exactly the
// degree-bottom component of the middle intersection product.
CrossVec diamond_product(const CrossVec& a, const CrossVec& b,
                         const LoopAlgebraModel& model);

// Full multiplication table of the diamond product over all cross classes,
// rows and columns in the declared basis order: shifted degree ascending,
// ties by (left, right) index. Associativity is verified on every basis
// triple; commutativity and the existence of a pure cross-class identity
// are checked and reported, never assumed.
struct DiamondAlgebra {
  std::vector<std::pair<int, int>> basis;
  std::vector<std::string> labels; // point prints as "1", [M] as the name
  std::vector<int> degrees;
  std::vector<Int> orders; // coefficient order per cross class, 0 = free
  std::vector<std::vector<CrossVec>> table; // table[i][j] = basis[i] <> basis[j]

  // One partner that refuses each pure cross-class unit candidate:
  // (candidate, partner) with candidate <> partner or partner <> candidate
  // off the mark. A candidate missing from this list acted as a two-sided
  // identity on the whole basis and is recorded below instead.
  std::vector<std::pair<int, int>> unit_failures;
  std::optional<int> basis_unit;
  std::optional<std::pair<int, int>> noncommutative_witness;
};

DiamondAlgebra build_diamond_table(const LoopAlgebraModel& model);

// Fixed plain-text grid of the table, one row per basis element, suitable
// for byte-exact golden comparison.
std::string render_diamond_table(const DiamondAlgebra& alg,
                                 const LoopAlgebraModel& model);

// Second page of the loop-space spectral sequence of M: intersection
// algebra as base columns, Pontryagin generators as fiber rows. The class
// [M] (x) 1 is the two-sided unit of the page.
FibrationSpec loop_e2_product(const LoopAlgebraModel& model,
                              bool allow_tor_gaps = false);

// Second page over M x M for the free path space of M: base columns carry
// the diamond table in the shifted grading, fiber rows the based loops.
FibrationSpec path_fibration_spec(const LoopAlgebraModel& model);

// Submanifold data for the restricted product: the intersection algebra of
// N on degrees [-dim, 0] and the shriek matrix of the embedding, which
// preserves the regraded degree (rows = N basis, columns = M basis).
struct SubmanifoldSpec {
  std::string name;
  int dim = 0;
  GradedAlgebra intersection;
  IntMatrix shriek;
};

// Second page for loops based on N inside M. The restricted product is the
// intersection product of N against the Pontryagin product of loops in M;
// the embedding matrix is returned alongside since the image of the shriek
// map is the subalgebra the product restricts from.
struct RestrictedSpec {
  FibrationSpec spec;
  IntMatrix embedding;
};
RestrictedSpec restricted_product_spec(const LoopAlgebraModel& model,
                                       const SubmanifoldSpec& sub);

// Image of the intersection morphism in one fiber degree: the stable
// subgroup of the column over the fundamental class, presented inside the
// second-page copy of H_q(loops).
struct DegreeImage {
  int degree = 0;
  FgAbelianGroup ambient;
  FgAbelianGroup image;
  std::vector<ScaledVec> generators; // second-page coordinates at (0, q)
  std::vector<std::string> labels;
  bool full = false;
};

struct IntersectionImage {
  int truncation = 0; // degrees above this carry no claim
  std::vector<DegreeImage> degrees;

  std::vector<int> nonzero_degrees() const;
  bool full_everywhere() const;
};

// Stable survivors of the fundamental-class column, degree by degree up to
// the truncation. Nothing ever lands in that column, so each stable entry
// is honestly a subgroup of the loop homology it started from.
IntersectionImage intersection_morphism(const LoopAlgebraModel& model,
                                        const SpectralSequence& ss);

// a . x for a the point class, computed in the stable-page product. The
// flag reports whether the result's total degree splits over several
// filtration layers, in which case the answer names only the layer.
struct MuResult {
  PageClass value;
  bool extension_ambiguous = false;
};
MuResult mu_a(const LoopAlgebraModel& model, const SpectralSequence& ss,
              const PageClass& x);

// The three equivalent collapse tests, each computed from the page data on
// its own: (onto) the fundamental-class column survives in full in every
// degree within truncation, (collapse) no page carries a nonzero
// differential, (injective) no nonzero differential arrives on the
// point-class column. Disagreement is an engine defect, not a result.
struct TheoremCReport {
  bool onto = false;
  bool collapse = false;
  bool injective = false;

  bool value() const { return onto; }
};
TheoremCReport check_theorem_c(const LoopAlgebraModel& model,
                               const SpectralSequence& ss);

} // namespace stq
