#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stq/morphism.hpp"
#include "stq/string_products.hpp"

namespace stq {

// Differential pin written over second-page class labels instead of
// coordinate vectors, so it can live in text files and catalog data before
// any spectral sequence exists. Resolution against a concrete run happens
// in resolve_pin.
struct SymbolicPin {
  int r = 2;
  Bidegree at{0, 0};
  std::vector<std::pair<Int, std::string>> source;
  std::vector<std::pair<Int, std::string>> target; // empty = zero

  bool operator==(const SymbolicPin&) const = default;
};

DifferentialPin resolve_pin(const SpectralSequence& ss, const SymbolicPin& p);

// Factor bookkeeping kept alongside a product entry so the restricted run
// and the projection comparison can be wired without rebuilding the model.
struct ProductParts {
  ProductLoopModel pm;
  LoopAlgebraModel left;
  LoopAlgebraModel right;
};

// One built-in space: its loop-algebra package, the differentials its runs
// start from when a job does not pin anything itself, and prose that the
// explain command and the image report surface.
struct CatalogEntry {
  std::string label;
  LoopAlgebraModel model;
  std::vector<SymbolicPin> default_pins;
  bool allow_tor_gaps = false;
  std::string note;
  // Filled for spheres: which image-degree progressions circulate for the
  // family and which one a run actually certifies. Printed with the image
  // report.
  std::string degree_note;
  std::optional<ProductParts> product;
};

// Shipped labels in display order. Lookup also accepts any "S<m>" with
// m >= 2; those spheres are built on demand with the same conventions.
const std::vector<std::string>& catalog_labels();
bool catalog_has(const std::string& label);
CatalogEntry catalog_entry(const std::string& label);

// Model builders behind the entries, usable on their own.
LoopAlgebraModel sphere_loop_model(int m);
LoopAlgebraModel point_loop_model();
LoopAlgebraModel stiefel_loop_model();

} // namespace stq
