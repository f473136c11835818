#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stq/ring.hpp"
#include "stq/simplicial.hpp"

namespace stq {

// Cochain of one degree on the ambient space, supported on the tube away
// from its rim. Degenerate simplices evaluate to zero by construction; that
// hypothesis is what makes the cap product respect normalized chains.
struct ThomCochain {
  int degree = 0;
  std::map<int, Int> values;  // nondegenerate simplex index -> value

  Int value_on(const SimplexRef& s) const;
};

// Combinatorial tube around an embedded bundle: face-closed subcomplex flags
// for the tube and its rim, a Thom cochain on the pair, and the disk-bundle
// retraction onto the embedded space.
struct TubeData {
  std::vector<std::vector<char>> in_tube;  // [dim][index]
  std::vector<std::vector<char>> in_rim;
  ThomCochain thom;
  const SimplicialMap* retraction = nullptr;
};

// An embedding of bundle total spaces with its tube data. base_drop is the
// codimension of the base embedding, total_drop the codimension upstairs;
// the fiber codimension is their difference.
struct BundleEmbedding {
  std::string name;
  Ring ring = Ring::integers();
  const SimplicialSet* total = nullptr;
  const SimplicialMap* fibration = nullptr;  // ambient space over its base
  const SimplicialSet* sub = nullptr;
  const SimplicialMap* sub_fibration = nullptr;
  TubeData tube;
  int base_drop = 0;
  int total_drop = 0;
};

// Least dimension of a base simplex the projection factors through; by the
// normal form this is the dimension of the nondegenerate core.
int serre_filtration(const SimplicialMap& fibration, const SimplexRef& s);

// A chain on the source of a fibration, read together with the filtration
// levels of its terms.
struct FilteredChain {
  const SimplicialMap* fibration = nullptr;
  Chain chain;

  int level_of(int index) const;
  int level() const;  // max over terms, -1 for the zero chain
};

// (-1)^{k(n-k)} tau(back k-face) * (front (n-k)-face), extended linearly.
// For a cocycle tau this satisfies boundary(tau cap c) =
// (-1)^k tau cap boundary(c).
Chain cap_product(const SimplicialSet& X, const ThomCochain& tau,
                  const Chain& c, const Ring& ring);

void validate_embedding(const BundleEmbedding& e);

// Collapse onto the tube rel rim, cap with the Thom cochain, push down the
// retraction. Drops the degree by exactly total_drop.
Chain chain_shriek(const BundleEmbedding& e, const Chain& c);

struct ShiftFailure {
  std::string simplex;
  int dim = 0;
  int level = 0;
  std::string image_simplex;
  int image_dim = 0;
  int image_level = 0;
  int allowed = 0;
};

struct ShiftReport {
  std::string model;
  std::string ring;
  int checked = 0;
  int nonzero_images = 0;
  int degree_mismatches = 0;
  std::vector<ShiftFailure> failures;

  bool passed() const { return failures.empty() && degree_mismatches == 0; }
};

// Exhaustive audit: every nondegenerate simplex of the ambient space at
// filtration level p must land in level at most p - base_drop, with the
// degree dropping by exactly total_drop. Violations become report rows, not
// errors.
ShiftReport verify_filtration_shift(const BundleEmbedding& e);

// A self-contained verifier model; the embedding views the owned pieces.
struct ChainModel {
  std::vector<std::unique_ptr<SimplicialSet>> spaces;
  std::vector<std::unique_ptr<SimplicialMap>> maps;
  BundleEmbedding embedding;
};

const std::vector<std::string>& chain_model_names();
ChainModel chain_model(const std::string& name, const Ring& ring);

} // namespace stq
