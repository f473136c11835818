#pragma once

#include <optional>

#include "stq/abelian.hpp"
#include "stq/smith.hpp"

namespace stq {

// Homology H = ker(d_out) / im(d_in) at a fixed spot of a complex of free
// modules, with enough lift data to express an arbitrary cycle in the chosen
// generators afterwards.
struct HomologyData {
  FgAbelianGroup group;
  IntMatrix gen_lifts;      // ambient cycles, one column per generator
  std::vector<Int> orders;  // aligned; 0 = free, m >= 2 torsion
  IntMatrix aux_lifts;      // spanning cycles dropped from the generator list
  IntMatrix boundaries;     // copy of d_in, kept for membership solves
};

// d_out * d_in must vanish over the ring.
HomologyData homology_at(const IntMatrix& d_in, const IntMatrix& d_out,
                         const Ring& ring);

// Coordinates of the class of cycle v in the generators of h, reduced mod
// torsion orders. Fails (nullopt) if v is not a cycle in the span of
// generators, aux lifts and boundaries, which for genuine cycles of the same
// complex cannot happen.
std::optional<IntVec> express_class(const HomologyData& h, const IntVec& v,
                                    const Ring& ring);

// Reduce coordinate i mod orders[i] into [0, order) for torsion, and mod p
// over a prime field. Free coordinates over Z and Q pass through.
IntVec reduce_coords(const IntVec& coords, const std::vector<Int>& orders,
                     const Ring& ring);

} // namespace stq
