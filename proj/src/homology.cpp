#include "stq/homology.hpp"

#include "stq/errors.hpp"

namespace stq {

HomologyData homology_at(const IntMatrix& d_in, const IntMatrix& d_out,
                         const Ring& ring) {
  if (d_in.cols() > 0 && d_out.rows() > 0) {
    IntMatrix comp = d_out * d_in;
    if (!comp.is_zero(ring))
      fail(ErrorClass::Validation, "CompositionNotZero",
           "d_out * d_in is nonzero over " + ring.to_string());
  }

  IntMatrix cycles = kernel_basis(d_out, ring); // ambient x k
  HomologyData h;
  h.boundaries = d_in;

  // Express each boundary column in kernel coordinates. The kernel basis is
  // saturated, so integral cycles have integral coordinates.
  std::vector<IntVec> rel_cols;
  for (int j = 0; j < d_in.cols(); ++j) {
    IntVec b = d_in.column(j);
    if (vec_is_zero(b, ring)) continue;
    auto y = solve_integral(cycles, b, ring);
    if (!y)
      fail(ErrorClass::Validation, "CompositionNotZero",
           "boundary column is not a cycle");
    rel_cols.push_back(*y);
  }
  IntMatrix rels = IntMatrix::from_columns(cycles.cols(), rel_cols);

  QuotientPresentation q = quotient_presentation(cycles.cols(), rels, ring);
  int free_rank = 0;
  std::vector<Int> torsion;
  for (const auto& o : q.orders) {
    if (o == 0) ++free_rank;
    else torsion.push_back(o);
  }
  h.group = FgAbelianGroup(free_rank, torsion);
  h.orders = q.orders;
  h.gen_lifts = cycles * q.gens;
  h.aux_lifts = cycles * q.aux;
  if (ring.kind() == Ring::Kind::PrimeField) {
    h.gen_lifts = h.gen_lifts.normalized(ring);
    h.aux_lifts = h.aux_lifts.normalized(ring);
  }
  return h;
}

std::optional<IntVec> express_class(const HomologyData& h, const IntVec& v,
                                    const Ring& ring) {
  IntMatrix m = IntMatrix::hcat(IntMatrix::hcat(h.gen_lifts, h.aux_lifts),
                                h.boundaries);
  auto y = solve_integral(m, v, ring);
  if (!y) return std::nullopt;
  IntVec coords(y->begin(), y->begin() + h.gen_lifts.cols());
  return reduce_coords(coords, h.orders, ring);
}

IntVec reduce_coords(const IntVec& coords, const std::vector<Int>& orders,
                     const Ring& ring) {
  IntVec out = coords;
  for (size_t i = 0; i < out.size(); ++i) {
    if (i < orders.size() && orders[i] >= 2) {
      out[i] %= orders[i];
      if (out[i] < 0) out[i] += orders[i];
    }
    out[i] = ring.normalize(out[i]);
  }
  return out;
}

} // namespace stq
