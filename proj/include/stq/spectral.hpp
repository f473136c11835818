#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stq/graded_algebra.hpp"
#include "stq/homology.hpp"

namespace stq {

using Bidegree = std::pair<int, int>; // (column p, fiber degree q)

// What happens to differentials that are neither pinned nor forced by the
// multiplicative structure: they vanish, or the run refuses to guess.
enum class DefaultPolicy { Zero, Undetermined };

// One pinned differential d_r(source) = target. Both sides are coordinate
// vectors in the second-page bases of their bidegrees.
struct DifferentialPin {
  int r = 2;
  Bidegree source_at;
  IntVec source;
  IntVec target; // in the basis at (p - r, q + r - 1); all zero allowed
};

// Multiplicative first-quadrant-after-regrading input: a finite base table
// (columns) and fiber generators (rows). Base and fiber degrees are the
// already shifted ones, so base columns usually live in [-dim, 0].
struct FibrationSpec {
  std::string name;
  GradedAlgebra base;
  std::vector<GenSpec> fiber_gens;
  bool allow_tor_gaps = false;
};

// A generator of one page entry, with its lineage back to the second page.
struct PageGen {
  std::string label;
  Int order = 0;      // 0 free, m >= 2 torsion
  ScaledVec e2_repr;  // coordinates in the second-page basis of the bidegree
};

struct PageEntry {
  std::vector<PageGen> gens;
  FgAbelianGroup group;
  // Solve data in the coordinates of the previous page's entry.
  IntMatrix gen_lifts;
  IntMatrix aux_lifts;
  IntMatrix boundary_lifts;

  int rank() const { return static_cast<int>(gens.size()); }
  bool trivial() const { return gens.empty(); }
};

struct ScaledMatrix {
  IntMatrix num;
  Int den = 1;
};

struct Page {
  int r = 2;
  std::map<Bidegree, PageEntry> entries;
  // Differentials leaving each bidegree; absent means zero.
  std::map<Bidegree, ScaledMatrix> diffs;
};

// A class on one page: coordinates in the page entry's generators.
struct PageClass {
  int r = 2;
  Bidegree at;
  ScaledVec coords;
};

// Kunneth correction term skipped when the base and fiber both carry
// torsion; recorded instead of silently computing the wrong groups.
struct TorGap {
  Bidegree at;
  Int order;
  std::string description;
};

// Regraded multiplicative homology spectral sequence engine. All linear
// algebra is exact; differentials come from pins closed up under the Leibniz
// rule by solving one integer linear system per page.
class SpectralSequence {
public:
  SpectralSequence(FibrationSpec spec, Ring ring, int max_total);

  void add_pin(const DifferentialPin& pin);
  void set_default_policy(DefaultPolicy p) { policy_ = p; }

  // Compute every differential and turn pages until the bidegree bound
  // certifies stability. Safe to call once.
  void run();

  const Ring& ring() const { return ring_; }
  const GradedAlgebra& base() const { return spec_.base; }
  const GradedAlgebra& fiber() const { return fiber_; }
  const FibrationSpec& spec() const { return spec_; }
  int max_total() const { return max_total_; }
  int internal_total() const { return internal_total_; }
  int min_column() const { return p_min_; }
  int max_column() const { return p_max_; }
  int last_page() const { return last_page_; }
  const std::vector<TorGap>& tor_gaps() const { return tor_gaps_; }

  const Page& page(int r) const;       // r clamped to the stable page
  const Page& einfty() const { return page(last_page_); }
  const PageEntry* entry(int r, Bidegree at) const;

  // First page from which every later differential vanishes.
  int collapsed_at() const;
  bool differential_nonzero(int r) const;
  // True when some nonzero differential lands in the given column.
  bool column_receives(int p) const;

  // Second-page labels and lookup for one bidegree.
  std::vector<std::string> e2_labels(Bidegree at) const;
  std::optional<int> e2_index(Bidegree at, const std::string& label) const;
  int e2_rank(Bidegree at) const;
  // (base index, fiber monomial index) behind each second-page generator.
  const std::vector<std::pair<int, int>>& e2_mono_pairs(Bidegree at) const;

  // Product of second-page coordinate vectors, Koszul sign included.
  ScaledVec e2_multiply(Bidegree a, const ScaledVec& va, Bidegree b,
                        const ScaledVec& vb) const;

  // Express a second-page vector on page r; nullopt if the class dies.
  std::optional<ScaledVec> reduce_to_page(int r, Bidegree at,
                                          const ScaledVec& v) const;

  // Product of two classes living on the same page.
  PageClass multiply(const PageClass& a, const PageClass& b) const;

  // Whether the stable entry at (p, q) still generates the whole second page
  // entry there, i.e. every second-page class survives in that bidegree.
  bool survives_fully(Bidegree at) const;

  // Nonzero stable layers of one total degree, bottom column first.
  std::vector<std::pair<Bidegree, FgAbelianGroup>> stable_layers(
      int total) const;
  bool extension_ambiguous(int total) const;

  std::string class_to_string(const PageClass& c) const;
  std::string e2_vec_to_string(Bidegree at, const ScaledVec& v) const;

private:
  void build_second_page();
  void compute_differentials(int r);
  void check_d_squared(int r) const;
  void turn_page(int r);
  IntMatrix torsion_relations(const PageEntry& e) const;

  FibrationSpec spec_;
  Ring ring_;
  GradedAlgebra fiber_;
  int max_total_ = 0;
  int internal_total_ = 0;
  int p_min_ = 0, p_max_ = 0;
  int last_page_ = 2;
  DefaultPolicy policy_ = DefaultPolicy::Zero;
  std::vector<DifferentialPin> pins_;
  std::vector<TorGap> tor_gaps_;
  std::map<int, Page> pages_;
  // (base index, fiber index) behind each second-page generator.
  std::map<Bidegree, std::vector<std::pair<int, int>>> e2_monos_;
  bool ran_ = false;
};

} // namespace stq
