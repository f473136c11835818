#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stq/matrix.hpp"
#include "stq/ring.hpp"

namespace stq {

// A simplex in normal form: a degeneracy word applied to a nondegenerate
// simplex. The word lists indices outermost first and is kept strictly
// decreasing, so two refs denote the same simplex exactly when they compare
// equal.
struct SimplexRef {
  int dim = 0;
  int index = 0;
  std::vector<int> word;

  bool is_degenerate() const { return !word.empty(); }
  int core_dim() const { return dim - static_cast<int>(word.size()); }
  bool operator==(const SimplexRef&) const = default;
};

// Finite simplicial set presented by its nondegenerate simplices, dimension
// at most four. Faces of a nondegenerate simplex may themselves be
// degenerate, so they are stored as refs. Populate dimension by dimension,
// then call seal(), which checks the face identities d_i d_j = d_{j-1} d_i
// on every stored simplex.
class SimplicialSet {
 public:
  explicit SimplicialSet(std::string name) : name_(std::move(name)) {}

  int add_vertex(const std::string& label);
  // faces[i] is the i-th face; every face must already exist.
  int add_simplex(int dim, const std::string& label,
                  std::vector<SimplexRef> faces);
  void seal();

  const std::string& name() const { return name_; }
  bool sealed() const { return sealed_; }
  int top_dim() const { return static_cast<int>(cells_.size()) - 1; }
  int count(int dim) const;
  const std::string& label(int dim, int index) const;
  std::optional<int> find(int dim, const std::string& label) const;
  SimplexRef ref(int dim, int index) const;

  // Face and degeneracy operators on arbitrary refs, in normal form.
  SimplexRef face(const SimplexRef& s, int i) const;
  static SimplexRef degeneracy(const SimplexRef& s, int j);

  std::string ref_string(const SimplexRef& s) const;

 private:
  struct Cell {
    std::string label;
    std::vector<SimplexRef> faces;
  };
  const Cell& cell(int dim, int index) const;
  void check_ref(const SimplexRef& s, int expected_dim,
                 const std::string& where) const;

  std::string name_;
  bool sealed_ = false;
  std::vector<std::vector<Cell>> cells_;
};

// Simplicial map, stored on nondegenerate simplices and extended to
// degenerate ones by naturality. seal() checks compatibility with faces.
class SimplicialMap {
 public:
  SimplicialMap(std::string name, const SimplicialSet* source,
                const SimplicialSet* target);

  void set_image(int dim, int index, SimplexRef image);
  void seal();

  const std::string& name() const { return name_; }
  bool sealed() const { return sealed_; }
  const SimplicialSet& source() const { return *source_; }
  const SimplicialSet& target() const { return *target_; }
  SimplexRef apply(const SimplexRef& s) const;

 private:
  std::string name_;
  const SimplicialSet* source_;
  const SimplicialSet* target_;
  bool sealed_ = false;
  std::vector<std::vector<std::optional<SimplexRef>>> images_;
};

// Normalized chain in one dimension: nondegenerate simplex index mapped to
// its coefficient, zero coefficients never stored. A negative dimension is
// the zero chain below the complex.
struct Chain {
  int dim = 0;
  std::map<int, Int> terms;

  bool zero() const { return terms.empty(); }
  bool operator==(const Chain&) const = default;
};

Chain chain_term(int dim, int index, const Int& coeff = Int(1));
void chain_add(Chain& c, int index, const Int& coeff, const Ring& ring);
Chain chain_scale(const Chain& c, const Int& s, const Ring& ring);

// Alternating face sum; degenerate faces drop out.
Chain boundary(const SimplicialSet& X, const Chain& c, const Ring& ring);

// Image under a simplicial map; degenerate images drop out.
Chain push_chain(const SimplicialMap& f, const Chain& c, const Ring& ring);

// Matrix of the boundary C_dim -> C_{dim-1} over the nondegenerate bases.
IntMatrix boundary_matrix(const SimplicialSet& X, int dim, const Ring& ring);

} // namespace stq
