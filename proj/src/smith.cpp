#include "stq/smith.hpp"

#include <algorithm>
#include <utility>

#include "stq/errors.hpp"

namespace stq {
namespace {

Int abs_val(const Int& x) { return x < 0 ? Int(-x) : x; }

// Holds the working matrix together with the accumulated unimodular row and
// column operations and their inverses. Invariant after every op:
//   u * original * v == s,  u * u_inv == I,  v_inv * v == I.
struct Worker {
  IntMatrix s, u, u_inv, v, v_inv;

  explicit Worker(const IntMatrix& a)
      : s(a),
        u(IntMatrix::identity(a.rows())),
        u_inv(IntMatrix::identity(a.rows())),
        v(IntMatrix::identity(a.cols())),
        v_inv(IntMatrix::identity(a.cols())) {}

  void row_swap(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < s.cols(); ++c) std::swap(s.at(i, c), s.at(j, c));
    for (int c = 0; c < u.cols(); ++c) std::swap(u.at(i, c), u.at(j, c));
    for (int r = 0; r < u_inv.rows(); ++r)
      std::swap(u_inv.at(r, i), u_inv.at(r, j));
  }

  void col_swap(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < s.rows(); ++r) std::swap(s.at(r, i), s.at(r, j));
    for (int r = 0; r < v.rows(); ++r) std::swap(v.at(r, i), v.at(r, j));
    for (int c = 0; c < v_inv.cols(); ++c)
      std::swap(v_inv.at(i, c), v_inv.at(j, c));
  }

  void row_negate(int i) {
    for (int c = 0; c < s.cols(); ++c) s.at(i, c) = -s.at(i, c);
    for (int c = 0; c < u.cols(); ++c) u.at(i, c) = -u.at(i, c);
    for (int r = 0; r < u_inv.rows(); ++r) u_inv.at(r, i) = -u_inv.at(r, i);
  }

  // row i += q * row j
  void row_addmul(int i, int j, const Int& q) {
    for (int c = 0; c < s.cols(); ++c) s.at(i, c) += q * s.at(j, c);
    for (int c = 0; c < u.cols(); ++c) u.at(i, c) += q * u.at(j, c);
    for (int r = 0; r < u_inv.rows(); ++r)
      u_inv.at(r, j) -= q * u_inv.at(r, i);
  }

  // col i += q * col j
  void col_addmul(int i, int j, const Int& q) {
    for (int r = 0; r < s.rows(); ++r) s.at(r, i) += q * s.at(r, j);
    for (int r = 0; r < v.rows(); ++r) v.at(r, i) += q * v.at(r, j);
    for (int c = 0; c < v_inv.cols(); ++c)
      v_inv.at(j, c) -= q * v_inv.at(i, c);
  }
};

} // namespace

SmithDecomposition smith_normal_form(const IntMatrix& a) {
  Worker w(a);
  const int n = std::min(a.rows(), a.cols());
  bool exhausted = false;
  for (int t = 0; t < n && !exhausted; ++t) {
    for (;;) {
      // Smallest-magnitude nonzero pivot in the active block, lowest
      // (row, col) on ties; the scan order makes the tie rule implicit.
      int pr = -1, pc = -1;
      for (int i = t; i < w.s.rows(); ++i)
        for (int j = t; j < w.s.cols(); ++j) {
          const Int& x = w.s.at(i, j);
          if (x == 0) continue;
          if (pr < 0 || abs_val(x) < abs_val(w.s.at(pr, pc))) {
            pr = i;
            pc = j;
          }
        }
      if (pr < 0) {
        exhausted = true;
        break;
      }
      w.row_swap(t, pr);
      w.col_swap(t, pc);

      const Int pivot = w.s.at(t, t);
      bool clean = true;
      for (int i = t + 1; i < w.s.rows(); ++i) {
        const Int& x = w.s.at(i, t);
        if (x == 0) continue;
        Int q = x / pivot; // truncated; any remainder is smaller than pivot
        if (q != 0) w.row_addmul(i, t, -q);
        if (w.s.at(i, t) != 0) clean = false;
      }
      for (int j = t + 1; j < w.s.cols(); ++j) {
        const Int& x = w.s.at(t, j);
        if (x == 0) continue;
        Int q = x / pivot;
        if (q != 0) w.col_addmul(j, t, -q);
        if (w.s.at(t, j) != 0) clean = false;
      }
      if (!clean) continue; // a smaller entry now exists, reselect

      // The pivot must divide the whole remaining block before it is final.
      bool stirred = false;
      for (int i = t + 1; i < w.s.rows() && !stirred; ++i)
        for (int j = t + 1; j < w.s.cols() && !stirred; ++j)
          if (w.s.at(i, j) % pivot != 0) {
            w.row_addmul(t, i, Int(1));
            stirred = true;
          }
      if (stirred) continue;

      if (w.s.at(t, t) < 0) w.row_negate(t);
      break;
    }
  }
  return SmithDecomposition{std::move(w.u), std::move(w.v), std::move(w.s),
                            std::move(w.u_inv), std::move(w.v_inv)};
}

int rank_over(const SmithDecomposition& s, const Ring& ring) {
  int r = 0;
  for (int i = 0; i < s.diag_len(); ++i)
    if (ring.kind() == Ring::Kind::PrimeField
            ? s.diag(i) % ring.prime() != 0
            : s.diag(i) != 0)
      ++r;
  return r;
}

IntMatrix kernel_basis(const IntMatrix& a, const Ring& ring) {
  const IntMatrix work = ring.kind() == Ring::Kind::PrimeField
                             ? a.normalized(ring)
                             : a;
  SmithDecomposition s = smith_normal_form(work);
  std::vector<int> keep;
  for (int j = 0; j < a.cols(); ++j) {
    Int d = s.diag(j);
    bool in_kernel = ring.kind() == Ring::Kind::PrimeField
                         ? d % ring.prime() == 0
                         : d == 0;
    if (in_kernel) keep.push_back(j);
  }
  IntMatrix out = s.v.select_columns(keep);
  if (ring.kind() == Ring::Kind::PrimeField) out = out.normalized(ring);
  return out;
}

IntMatrix column_span_basis(const IntMatrix& a, const Ring& ring) {
  const IntMatrix work = ring.kind() == Ring::Kind::PrimeField
                             ? a.normalized(ring)
                             : a;
  SmithDecomposition s = smith_normal_form(work);
  std::vector<IntVec> cols;
  for (int i = 0; i < s.diag_len(); ++i) {
    Int d = s.diag(i);
    bool counts = ring.kind() == Ring::Kind::PrimeField ? d % ring.prime() != 0
                                                        : d != 0;
    if (!counts) continue;
    IntVec c = s.u_inv.column(i);
    if (!ring.is_field()) c = vec_scaled(c, d); // lattice basis needs d * e_i
    cols.push_back(vec_normalized(c, ring));
  }
  return IntMatrix::from_columns(a.rows(), cols);
}

IntMatrix saturate(const IntMatrix& lattice) {
  if (lattice.cols() == 0) return lattice;
  Ring z = Ring::integers();
  IntMatrix perp = kernel_basis(lattice.transposed(), z);
  return kernel_basis(perp.transposed(), z);
}

SolveResult solve_linear(const IntMatrix& a, const IntVec& b,
                         const Ring& ring) {
  const bool fp = ring.kind() == Ring::Kind::PrimeField;
  const IntMatrix work = fp ? a.normalized(ring) : a;
  SmithDecomposition s = smith_normal_form(work);
  IntVec y = s.u.apply(b);
  if (fp) y = vec_normalized(y, ring);

  SolveResult res;
  IntVec z(a.cols(), Int(0));

  if (ring.kind() == Ring::Kind::Rationals) {
    Int common = 1;
    for (int i = 0; i < a.rows(); ++i) {
      Int d = s.diag(i);
      if (d != 0 && i < s.diag_len()) {
        if (y[i] == 0) continue;
        Int g = boost::multiprecision::gcd(abs_val(y[i]), d);
        Int need = d / g;
        common = boost::multiprecision::lcm(common, need);
      } else if (y[i] != 0) {
        return res; // no solution even rationally
      }
    }
    for (int i = 0; i < s.diag_len() && i < a.rows(); ++i) {
      Int d = s.diag(i);
      if (d != 0) z[i] = y[i] * common / d;
    }
    IntVec x = s.v.apply(z);
    Int g = common;
    for (const auto& e : x) if (e != 0) g = boost::multiprecision::gcd(g, abs_val(e));
    if (g > 1) {
      for (auto& e : x) e /= g;
      common /= g;
    }
    res.ok = true;
    res.x = std::move(x);
    res.den = common;
    return res;
  }

  for (int i = 0; i < a.rows(); ++i) {
    Int d = i < s.diag_len() ? s.diag(i) : Int(0);
    if (fp) {
      if (d % ring.prime() != 0) {
        auto inv = ring.inverse(d);
        z[i] = ring.normalize(y[i] * *inv);
      } else if (y[i] % ring.prime() != 0) {
        return res;
      }
    } else {
      if (d != 0) {
        if (y[i] % d != 0) return res;
        z[i] = y[i] / d;
      } else if (y[i] != 0) {
        return res;
      }
    }
  }
  IntVec x = s.v.apply(z);
  if (fp) x = vec_normalized(x, ring);
  res.ok = true;
  res.x = std::move(x);
  return res;
}

std::optional<IntVec> solve_integral(const IntMatrix& a, const IntVec& b,
                                     const Ring& ring) {
  Ring r = ring.kind() == Ring::Kind::Rationals ? Ring::integers() : ring;
  SolveResult s = solve_linear(a, b, r);
  if (!s.ok) return std::nullopt;
  return s.x;
}

IntMatrix kernel_mod(const IntMatrix& a, const IntMatrix& r,
                     const Ring& ring) {
  if (r.cols() == 0) return kernel_basis(a, ring);
  if (a.rows() != r.rows())
    fail(ErrorClass::Validation, "ValidationError", "kernel_mod row mismatch");
  IntMatrix m = IntMatrix::hcat(a, r.scaled(Int(-1)));
  Ring inner = ring.kind() == Ring::Kind::PrimeField ? ring : Ring::integers();
  IntMatrix k = kernel_basis(m, inner);
  std::vector<int> top(a.cols());
  for (int i = 0; i < a.cols(); ++i) top[i] = i;
  IntMatrix proj = k.select_rows(top);
  switch (ring.kind()) {
    case Ring::Kind::Integers:
      return column_span_basis(proj, ring);
    case Ring::Kind::PrimeField:
      return column_span_basis(proj, ring);
    case Ring::Kind::Rationals:
      return saturate(column_span_basis(proj, Ring::integers()));
  }
  return proj;
}

QuotientPresentation quotient_presentation(int rank,
                                           const IntMatrix& relations,
                                           const Ring& ring) {
  QuotientPresentation out;
  if (relations.cols() == 0) {
    out.gens = IntMatrix::identity(rank);
    out.orders.assign(rank, Int(0));
    out.aux = IntMatrix(rank, 0);
    return out;
  }
  if (relations.rows() != rank)
    fail(ErrorClass::Validation, "ValidationError",
         "relation rows must match ambient rank");
  const bool fp = ring.kind() == Ring::Kind::PrimeField;
  const IntMatrix work = fp ? relations.normalized(ring) : relations;
  SmithDecomposition s = smith_normal_form(work);

  std::vector<int> frees, torsion, dropped;
  for (int i = 0; i < rank; ++i) {
    Int d = i < s.diag_len() ? s.diag(i) : Int(0);
    Int o = ring.diag_order(d);
    if (o == 0)
      frees.push_back(i);
    else if (o >= 2)
      torsion.push_back(i);
    else if (ring.kind() == Ring::Kind::Rationals && abs_val(d) >= 2)
      dropped.push_back(i); // killed rationally, kept for integral solves
  }
  std::vector<int> order_of_gens = frees;
  order_of_gens.insert(order_of_gens.end(), torsion.begin(), torsion.end());
  out.gens = s.u_inv.select_columns(order_of_gens);
  out.aux = s.u_inv.select_columns(dropped);
  out.orders.assign(frees.size(), Int(0));
  for (int i : torsion)
    out.orders.push_back(ring.diag_order(s.diag(i)));
  if (fp) {
    out.gens = out.gens.normalized(ring);
    out.aux = out.aux.normalized(ring);
  }
  return out;
}

} // namespace stq
