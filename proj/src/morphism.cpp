#include "stq/morphism.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stq/errors.hpp"
#include "stq/homology.hpp"

namespace stq {

namespace {

std::string at_str(Bidegree at) {
  return "(" + std::to_string(at.first) + ", " + std::to_string(at.second) +
         ")";
}

bool same_ring(const Ring& a, const Ring& b) {
  return a.kind() == b.kind() && a.prime() == b.prime();
}

void reduce_rows(IntMatrix& m, const PageEntry& e, const Ring& ring) {
  for (int i = 0; i < m.rows(); ++i) {
    const Int& o = e.gens[i].order;
    for (int j = 0; j < m.cols(); ++j) {
      Int v = m.at(i, j);
      if (o >= 2 && ring.keeps_torsion()) {
        v %= o;
        if (v < 0) v += o;
      }
      m.at(i, j) = ring.normalize(v);
    }
  }
}

void reduce_scaled(ScaledMatrix& m) {
  if (m.den <= 1) return;
  Int g = m.den;
  for (int i = 0; i < m.num.rows() && g > 1; ++i)
    for (int j = 0; j < m.num.cols() && g > 1; ++j)
      if (m.num.at(i, j) != 0)
        g = boost::multiprecision::gcd(
            g, m.num.at(i, j) < 0 ? Int(-m.num.at(i, j)) : m.num.at(i, j));
  if (g > 1) {
    m.den /= g;
    for (int i = 0; i < m.num.rows(); ++i)
      for (int j = 0; j < m.num.cols(); ++j) m.num.at(i, j) /= g;
  }
}

ScaledVec mat_vec(const ScaledMatrix& m, const ScaledVec& v) {
  ScaledVec out = ScaledVec::zero(m.num.rows());
  for (int i = 0; i < m.num.rows(); ++i) {
    Int acc = 0;
    for (int j = 0; j < m.num.cols(); ++j) acc += m.num.at(i, j) * v.num[j];
    out.num[i] = acc;
  }
  out.den = m.den * v.den;
  out.reduce();
  return out;
}

// Entry-wise equality of two coordinate vectors over the same page entry,
// denominators cleared, torsion rows compared modulo their order.
bool coords_agree(const ScaledVec& a, const ScaledVec& b, const PageEntry* e,
                  const Ring& ring) {
  size_t n = std::max(a.num.size(), b.num.size());
  for (size_t i = 0; i < n; ++i) {
    Int x = i < a.num.size() ? a.num[i] : Int(0);
    Int y = i < b.num.size() ? b.num[i] : Int(0);
    Int d = x * b.den - y * a.den;
    if (ring.is_zero_elem(d)) continue;
    if (ring.keeps_torsion() && a.den == 1 && b.den == 1 && e != nullptr &&
        i < e->gens.size()) {
      const Int& o = e->gens[i].order;
      if (o >= 2 && d % o == 0) continue;
    }
    return false;
  }
  return true;
}

// Images of the source fiber monomials under a generator-level map,
// extended as an algebra map degree by degree. A monomial is peeled into
// generator times smaller monomial through the source product table, so no
// label parsing or exponent bookkeeping is needed.
class FiberMap {
public:
  FiberMap(const SpectralSequence& source, const SpectralSequence& target,
           const IntMatrix& gen_matrix)
      : src_(source.fiber()), tgt_(target.fiber()) {
    const auto& sgens = source.spec().fiber_gens;
    const auto& tgens = target.spec().fiber_gens;
    for (const auto& g : sgens) src_gen_idx_.push_back(*src_.find(g.label));
    gen_images_.resize(sgens.size());
    for (size_t j = 0; j < sgens.size(); ++j) {
      SparseVec img;
      for (size_t i = 0; i < tgens.size(); ++i) {
        const Int& c =
            gen_matrix.at(static_cast<int>(i), static_cast<int>(j));
        if (c == 0) continue;
        img.emplace_back(*tgt_.find(tgens[i].label), c);
      }
      std::sort(img.begin(), img.end());
      gen_images_[j] = std::move(img);
    }
    memo_[src_.unit()] = SparseVec{{tgt_.unit(), Int(1)}};
  }

  const SparseVec& image(int mono) {
    auto it = memo_.find(mono);
    if (it != memo_.end()) return it->second;
    int d = src_.elt(mono).deg;
    for (size_t k = 0; k < src_gen_idx_.size(); ++k) {
      int g = src_gen_idx_[k];
      int rest_deg = d - src_.elt(g).deg;
      if (rest_deg < 0) continue;
      for (int rest : src_.in_degree(rest_deg)) {
        SparseVec prod = src_.mult(g, rest);
        if (prod.size() != 1 || prod[0].first != mono) continue;
        Int c = prod[0].second;
        const Int& ord = src_.elt(mono).order;
        if (c != 1 && c != -1 && !(ord >= 2 && c == ord - 1)) continue;
        if (c != 1) c = -1;
        SparseVec img =
            tgt_.mult(sparse_scale(gen_images_[k], c), image(rest));
        return memo_[mono] = std::move(img);
      }
    }
    fail(ErrorClass::Engine, "EngineError",
         "fiber monomial " + src_.elt(mono).label +
             " admits no generator factorization; invariant broken");
  }

private:
  const GradedAlgebra& src_;
  const GradedAlgebra& tgt_;
  std::vector<int> src_gen_idx_;
  std::vector<SparseVec> gen_images_;
  std::map<int, SparseVec> memo_;
};

int entry_rank(const SpectralSequence& ss, int r, Bidegree at) {
  const PageEntry* e = ss.entry(r, at);
  return e == nullptr ? 0 : e->rank();
}

} // namespace

const ScaledMatrix* SSMorphism::map_at(int r, Bidegree at) const {
  auto pit = maps.find(std::min(r, last_page));
  if (pit == maps.end()) return nullptr;
  auto it = pit->second.find(at);
  return it == pit->second.end() ? nullptr : &it->second;
}

PageClass SSMorphism::apply(const PageClass& c) const {
  Bidegree t{c.at.first + shift.first, c.at.second + shift.second};
  PageClass out;
  out.r = c.r;
  out.at = t;
  const PageEntry* te = target->entry(c.r, t);
  int nt = te == nullptr ? 0 : te->rank();
  out.coords = ScaledVec::zero(nt);
  const ScaledMatrix* mm = map_at(c.r, c.at);
  if (mm == nullptr || nt == 0) return out;
  out.coords = mat_vec(*mm, c.coords);
  if (out.coords.den == 1 && source->ring().keeps_torsion()) {
    std::vector<Int> orders;
    for (const auto& g : te->gens) orders.push_back(g.order);
    out.coords.num = reduce_coords(out.coords.num, orders, source->ring());
  }
  return out;
}

SSMorphism shriek_morphism(const SpectralSequence& source,
                           const SpectralSequence& target,
                           const IntMatrix& base_matrix,
                           const IntMatrix& fiber_matrix, Bidegree shift,
                           const MorphismOptions& opts) {
  const GradedAlgebra& sbase = source.base();
  const GradedAlgebra& tbase = target.base();
  const auto& sgens = source.spec().fiber_gens;
  const auto& tgens = target.spec().fiber_gens;
  const Ring& ring = source.ring();

  if (!same_ring(source.ring(), target.ring()))
    fail(ErrorClass::Validation, "ValidationError",
         "source and target run over different rings");
  if (base_matrix.rows() != tbase.size() ||
      base_matrix.cols() != sbase.size())
    fail(ErrorClass::Validation, "ValidationError",
         "base matrix must be target basis by source basis, got " +
             std::to_string(base_matrix.rows()) + " by " +
             std::to_string(base_matrix.cols()));
  if (fiber_matrix.rows() != static_cast<int>(tgens.size()) ||
      fiber_matrix.cols() != static_cast<int>(sgens.size()))
    fail(ErrorClass::Validation, "ValidationError",
         "fiber matrix must be target generators by source generators, got " +
             std::to_string(fiber_matrix.rows()) + " by " +
             std::to_string(fiber_matrix.cols()));
  if (shift.second != 0)
    fail(ErrorClass::Validation, "FiberShift",
         "fiber generator images extend to monomials as an algebra map, "
         "which needs a zero fiber shift; got " +
             std::to_string(shift.second));
  if (opts.multiplicative && shift != Bidegree{0, 0})
    fail(ErrorClass::Validation, "NotMultiplicative",
         "a multiplicative map must preserve the bidegree; " + opts.name +
             " shifts by " + at_str(shift));

  for (int i = 0; i < tbase.size(); ++i)
    for (int j = 0; j < sbase.size(); ++j)
      if (!ring.is_zero_elem(base_matrix.at(i, j)) &&
          tbase.elt(i).deg != sbase.elt(j).deg + shift.first)
        fail(ErrorClass::Validation, "DegreeMismatch",
             "base image of " + sbase.elt(j).label + " touches " +
                 tbase.elt(i).label + " off the shifted degree");
  for (size_t i = 0; i < tgens.size(); ++i)
    for (size_t j = 0; j < sgens.size(); ++j)
      if (!ring.is_zero_elem(fiber_matrix.at(static_cast<int>(i),
                                             static_cast<int>(j))) &&
          tgens[i].deg != sgens[j].deg)
        fail(ErrorClass::Validation, "DegreeMismatch",
             "fiber image of " + sgens[j].label + " touches " +
                 tgens[i].label + " off the degree");

  SSMorphism m;
  m.source = &source;
  m.target = &target;
  m.name = opts.name;
  m.shift = shift;
  m.k_base = opts.k_base;
  m.multiplicative = opts.multiplicative;
  m.last_page = std::max(source.last_page(), target.last_page());

  const int dp = shift.first, dq = shift.second;
  // the window both runs certify: target fiber degrees and totals in reach
  const int qmax = target.internal_total() - target.min_column();
  auto in_window = [&](Bidegree at) {
    return at.second + dq <= qmax &&
           at.first + dp + at.second + dq <= target.internal_total();
  };

  FiberMap fmap(source, target, fiber_matrix);

  // second page: tensor of the base matrix with the monomial images
  for (const auto& [at, e] : source.page(2).entries) {
    if (e.trivial() || !in_window(at)) continue;
    Bidegree t{at.first + dp, at.second + dq};
    const PageEntry* te = target.entry(2, t);
    if (te == nullptr || te->trivial()) continue;
    const auto& spairs = source.e2_mono_pairs(at);
    const auto& tpairs = target.e2_mono_pairs(t);
    std::map<std::pair<int, int>, int> tindex;
    for (size_t k = 0; k < tpairs.size(); ++k)
      tindex[tpairs[k]] = static_cast<int>(k);
    IntMatrix num(te->rank(), e.rank());
    for (int j = 0; j < e.rank(); ++j) {
      auto [bi, fi] = spairs[j];
      const SparseVec& fimg = fmap.image(fi);
      if (fimg.empty()) continue;
      for (int i = 0; i < tbase.size(); ++i) {
        const Int& cb = base_matrix.at(i, bi);
        if (cb == 0) continue;
        for (const auto& [tf, cf] : fimg) {
          auto hit = tindex.find({i, tf});
          if (hit == tindex.end()) continue; // torsion-collapsed summand
          num.at(hit->second, j) += cb * cf;
        }
      }
    }
    reduce_rows(num, *te, ring);
    if (ring.keeps_torsion()) {
      for (int j = 0; j < e.rank(); ++j) {
        const Int& os = e.gens[j].order;
        if (os < 2) continue;
        for (int i = 0; i < te->rank(); ++i) {
          Int v = num.at(i, j) * os;
          const Int& ot = te->gens[i].order;
          bool ok = ot >= 2 ? v % ot == 0 : v == 0;
          if (!ok)
            fail(ErrorClass::Validation, "TorsionMismatch",
                 "second-page image of " + e.gens[j].label + " at " +
                     at_str(at) + " is not annihilated by the order " +
                     os.str());
        }
      }
    }
    if (!num.is_zero(ring)) m.maps[2][at] = ScaledMatrix{std::move(num), 1};
  }

  const Int sgn = opts.k_base % 2 != 0 ? -1 : 1;
  auto check_page = [&](int r) {
    const Page& sp = source.page(r);
    const Page& tp = target.page(r);
    std::set<Bidegree> cands;
    for (const auto& [at, d] : sp.diffs) cands.insert(at);
    for (const auto& [at, d] : tp.diffs)
      cands.insert({at.first - dp, at.second - dq});
    std::vector<std::string> bad;
    for (Bidegree a : cands) {
      Bidegree b{a.first - r, a.second + r - 1};
      if (!in_window(a) || !in_window(b)) continue;
      Bidegree ap{a.first + dp, a.second + dq};
      Bidegree bp{b.first + dp, b.second + dq};
      int as = entry_rank(source, r, a);
      int bt = entry_rank(target, r, bp);
      if (as == 0 || bt == 0) continue;
      const ScaledMatrix* ma = m.map_at(r, a);
      const ScaledMatrix* mb = m.map_at(r, b);
      auto dsrc = sp.diffs.find(a);
      auto dtgt = tp.diffs.find(ap);
      const ScaledMatrix* da = dsrc == sp.diffs.end() ? nullptr : &dsrc->second;
      const ScaledMatrix* dpa = dtgt == tp.diffs.end() ? nullptr : &dtgt->second;
      IntMatrix lhs(bt, as), rhs(bt, as);
      Int den_l = 1, den_r = 1;
      if (dpa != nullptr && ma != nullptr) {
        lhs = dpa->num * ma->num;
        den_l = dpa->den * ma->den;
      }
      if (mb != nullptr && da != nullptr) {
        rhs = mb->num * da->num;
        den_r = mb->den * da->den;
      }
      const PageEntry* be = target.entry(r, bp);
      bool ok = true;
      for (int i = 0; i < bt && ok; ++i)
        for (int j = 0; j < as && ok; ++j) {
          Int d = lhs.at(i, j) * den_r - sgn * rhs.at(i, j) * den_l;
          bool z = ring.is_zero_elem(d);
          if (!z && ring.keeps_torsion() && den_l == 1 && den_r == 1) {
            const Int& o = be->gens[i].order;
            if (o >= 2) z = d % o == 0;
          }
          ok = z;
        }
      if (!ok) bad.push_back(at_str(a));
    }
    if (!bad.empty()) {
      std::string list;
      for (const auto& s : bad) list += (list.empty() ? "" : ", ") + s;
      fail(ErrorClass::Validation, "NotChainMap",
           opts.name + " does not commute with the page " +
               std::to_string(r) +
               " differentials; failing source bidegrees: " + list);
    }
  };

  check_page(2);
  for (int r = 3; r <= m.last_page; ++r) {
    // restriction to the classes that survived; commutation up to r - 1
    // guarantees every image below is still a cycle
    for (const auto& [at, e] : source.page(r).entries) {
      if (e.trivial() || !in_window(at)) continue;
      Bidegree t{at.first + dp, at.second + dq};
      const PageEntry* te = target.entry(r, t);
      if (te == nullptr || te->trivial()) continue;
      const ScaledMatrix* e2m = m.map_at(2, at);
      if (e2m == nullptr) continue;
      std::vector<ScaledVec> cols;
      for (int j = 0; j < e.rank(); ++j) {
        ScaledVec w = mat_vec(*e2m, e.gens[j].e2_repr);
        auto red = target.reduce_to_page(r, t, w);
        if (!red)
          fail(ErrorClass::Engine, "EngineError",
               "page " + std::to_string(r) + " image of " + e.gens[j].label +
                   " at " + at_str(at) +
                   " dies earlier in the target; the second-page map is "
                   "not a chain map");
        cols.push_back(*red);
      }
      Int den = 1;
      for (const auto& c : cols) den = boost::multiprecision::lcm(den, c.den);
      IntMatrix num(te->rank(), e.rank());
      for (int j = 0; j < e.rank(); ++j) {
        Int s = den / cols[j].den;
        for (int i = 0; i < te->rank(); ++i)
          num.at(i, j) = cols[j].num[i] * s;
      }
      ScaledMatrix sm{std::move(num), den};
      reduce_scaled(sm);
      if (sm.den == 1) reduce_rows(sm.num, *te, ring);
      if (!sm.num.is_zero(ring)) m.maps[r][at] = std::move(sm);
    }
    check_page(r);
  }

  if (opts.multiplicative) {
    const auto& entries = source.page(2).entries;
    const int tw = std::min(source.internal_total(), target.internal_total());
    for (const auto& [a, ea] : entries) {
      if (ea.trivial() || !in_window(a)) continue;
      for (const auto& [b, eb] : entries) {
        if (eb.trivial() || !in_window(b)) continue;
        Bidegree p{a.first + b.first, a.second + b.second};
        if (p.first + p.second > tw || !in_window(p)) continue;
        const ScaledMatrix* ma = m.map_at(2, a);
        const ScaledMatrix* mb = m.map_at(2, b);
        const ScaledMatrix* mp = m.map_at(2, p);
        const PageEntry* pe = target.entry(2, p);
        int nta = entry_rank(target, 2, a);
        int ntb = entry_rank(target, 2, b);
        int ntp = pe == nullptr ? 0 : pe->rank();
        for (int i = 0; i < ea.rank(); ++i) {
          ScaledVec ei = ScaledVec::zero(ea.rank());
          ei.num[i] = 1;
          ScaledVec fa = ma != nullptr ? mat_vec(*ma, ei)
                                       : ScaledVec::zero(nta);
          for (int j = 0; j < eb.rank(); ++j) {
            ScaledVec ej = ScaledVec::zero(eb.rank());
            ej.num[j] = 1;
            ScaledVec fb = mb != nullptr ? mat_vec(*mb, ej)
                                         : ScaledVec::zero(ntb);
            ScaledVec prod = source.e2_multiply(a, ei, b, ej);
            ScaledVec lhs = mp != nullptr ? mat_vec(*mp, prod)
                                          : ScaledVec::zero(ntp);
            ScaledVec rhs = target.e2_multiply(a, fa, b, fb);
            if (!coords_agree(lhs, rhs, pe, ring))
              fail(ErrorClass::Validation, "NotMultiplicative",
                   opts.name + " fails the product check at " + at_str(a) +
                       " x " + at_str(b) + " on " + ea.gens[i].label +
                       " and " + eb.gens[j].label);
          }
        }
      }
    }
  }

  return m;
}

SSMorphism compose_morphisms(const SSMorphism& outer,
                             const SSMorphism& inner) {
  if (inner.target != outer.source)
    fail(ErrorClass::Validation, "ValidationError",
         "morphisms do not compose: the inner target is not the outer "
         "source");
  SSMorphism out;
  out.source = inner.source;
  out.target = outer.target;
  out.name = outer.name + " after " + inner.name;
  out.shift = {inner.shift.first + outer.shift.first,
               inner.shift.second + outer.shift.second};
  out.k_base = inner.k_base + outer.k_base;
  out.multiplicative = inner.multiplicative && outer.multiplicative;
  out.last_page = std::max(inner.last_page, outer.last_page);
  const Ring& ring = inner.source->ring();
  for (int r = 2; r <= out.last_page; ++r) {
    auto pit = inner.maps.find(std::min(r, inner.last_page));
    if (pit == inner.maps.end()) continue;
    for (const auto& [at, m1] : pit->second) {
      Bidegree mid{at.first + inner.shift.first,
                   at.second + inner.shift.second};
      const ScaledMatrix* m2 = outer.map_at(r, mid);
      if (m2 == nullptr) continue;
      ScaledMatrix sm{m2->num * m1.num, m2->den * m1.den};
      reduce_scaled(sm);
      Bidegree t{at.first + out.shift.first, at.second + out.shift.second};
      const PageEntry* te = outer.target->entry(r, t);
      if (sm.den == 1 && te != nullptr) reduce_rows(sm.num, *te, ring);
      if (!sm.num.is_zero(ring)) out.maps[r][at] = std::move(sm);
    }
  }
  return out;
}

SSMorphism diagonal_comparison(const LoopAlgebraModel& model,
                               const SpectralSequence& paths,
                               const SpectralSequence& loops) {
  model.validate();
  DiamondAlgebra dia = build_diamond_table(model);
  const GradedAlgebra& pb = paths.base();
  bool ok = pb.size() == static_cast<int>(dia.labels.size());
  for (int k = 0; ok && k < pb.size(); ++k)
    ok = pb.elt(k).label == dia.labels[k];
  if (!ok)
    fail(ErrorClass::Validation, "ValidationError",
         "the source run is not the path stack of '" + model.name + "'");
  const GradedAlgebra& ib = model.intersection;
  if (loops.base().size() != ib.size() || loops.min_column() != -model.dim)
    fail(ErrorClass::Validation, "ValidationError",
         "the target run is not the loop stack of '" + model.name + "'");

  // cross class x cross y |-> (-1)^(dim * deg_h x) x . y; the sign makes the
  // map commute with the differentials on both sides
  IntMatrix base(ib.size(), pb.size());
  for (size_t k = 0; k < dia.basis.size(); ++k) {
    auto [l, r] = dia.basis[k];
    if (ib.elt(l).deg + ib.elt(r).deg < -model.dim) continue;
    Int sign = (ib.elt(l).deg + model.dim) * model.dim % 2 != 0 ? -1 : 1;
    for (const auto& [t, c] : ib.mult(l, r))
      base.at(t, static_cast<int>(k)) = sign * c;
  }
  MorphismOptions opts;
  opts.k_base = model.dim;
  opts.multiplicative = false;
  opts.name = "diagonal comparison of " + model.name;
  return shriek_morphism(
      paths, loops, base,
      IntMatrix::identity(static_cast<int>(model.loop_gens.size())),
      {-model.dim, 0}, opts);
}

ProductLoopModel product_loop_model(const LoopAlgebraModel& left,
                                    const LoopAlgebraModel& right) {
  left.validate();
  right.validate();
  const GradedAlgebra& la = left.intersection;
  const GradedAlgebra& ra = right.intersection;
  bool lt = false, rt = false;
  for (int i = 0; i < la.size(); ++i) lt = lt || la.elt(i).order >= 2;
  for (int j = 0; j < ra.size(); ++j) rt = rt || ra.elt(j).order >= 2;
  if (lt && rt)
    fail(ErrorClass::Validation, "TorsionKunneth",
         "both factors carry torsion classes; the base Kunneth correction "
         "is not modeled, keep one factor torsion-free");

  ProductLoopModel out;
  out.model.name = left.name + "x" + right.name;
  out.model.dim = left.dim + right.dim;
  GradedAlgebra g;
  std::map<std::pair<int, int>, int> idx;
  for (int i = 0; i < la.size(); ++i)
    for (int j = 0; j < ra.size(); ++j) {
      const Int& oi = la.elt(i).order;
      const Int& oj = ra.elt(j).order;
      Int order = oi == 0 ? oj : oi;
      int k = g.add_elt(la.elt(i).label + "." + ra.elt(j).label,
                        la.elt(i).deg + ra.elt(j).deg, order);
      idx[{i, j}] = k;
      out.base_factors.emplace_back(i, j);
    }
  for (int i1 = 0; i1 < la.size(); ++i1)
    for (int j1 = 0; j1 < ra.size(); ++j1)
      for (int i2 = 0; i2 < la.size(); ++i2)
        for (int j2 = 0; j2 < ra.size(); ++j2) {
          if (la.elt(i1).deg + la.elt(i2).deg < -left.dim) continue;
          if (ra.elt(j1).deg + ra.elt(j2).deg < -right.dim) continue;
          SparseVec pl = la.mult(i1, i2);
          if (pl.empty()) continue;
          SparseVec pr = ra.mult(j1, j2);
          if (pr.empty()) continue;
          bool neg = ra.elt(j1).deg % 2 != 0 && la.elt(i2).deg % 2 != 0;
          SparseVec val;
          for (const auto& [ti, ci] : pl)
            for (const auto& [tj, cj] : pr) {
              int k = idx.at({ti, tj});
              Int c = g.reduce_coeff(k, neg ? Int(-ci * cj) : ci * cj);
              if (c != 0) val.emplace_back(k, c);
            }
          if (!val.empty())
            g.set_product(idx.at({i1, j1}), idx.at({i2, j2}), std::move(val));
        }
  g.set_unit(idx.at({left.fundamental, right.fundamental}));
  g.validate(true);

  out.model.intersection = std::move(g);
  out.model.fundamental = idx.at({left.fundamental, right.fundamental});
  out.model.point = idx.at({left.point, right.point});
  for (const auto& gen : left.loop_gens) {
    out.model.loop_gens.push_back(gen);
    out.fiber_from.push_back(0);
  }
  for (const auto& gen : right.loop_gens) {
    GenSpec primed = gen;
    primed.label += "'";
    out.model.loop_gens.push_back(std::move(primed));
    out.fiber_from.push_back(1);
  }
  std::set<std::string> labels;
  for (const auto& gen : out.model.loop_gens) labels.insert(gen.label);
  if (labels.size() != out.model.loop_gens.size())
    fail(ErrorClass::Validation, "ValidationError",
         "fiber generator labels collide after priming the right factor");
  out.model.validate();
  return out;
}

SubmanifoldSpec left_factor_embedding(const ProductLoopModel& pm,
                                      const LoopAlgebraModel& left) {
  const auto& bf = pm.base_factors;
  if (bf.empty() ||
      static_cast<int>(bf.size()) != pm.model.intersection.size() ||
      bf[pm.model.fundamental].first != left.fundamental)
    fail(ErrorClass::Validation, "ValidationError",
         "the left factor does not match the product decomposition");
  int rf = bf[pm.model.fundamental].second;
  SubmanifoldSpec sub;
  sub.name = left.name;
  sub.dim = left.dim;
  sub.intersection = left.intersection;
  sub.shriek = IntMatrix(left.intersection.size(),
                         static_cast<int>(bf.size()));
  for (size_t k = 0; k < bf.size(); ++k)
    if (bf[k].second == rf) sub.shriek.at(bf[k].first, static_cast<int>(k)) = 1;
  return sub;
}

ProjectionComparison projection_comparison(
    const ProductLoopModel& pm, const LoopAlgebraModel& left,
    const SpectralSequence& product_ss, const SpectralSequence& restricted_ss,
    const SpectralSequence& loop_ss) {
  SubmanifoldSpec sub = left_factor_embedding(pm, left);
  int nl = static_cast<int>(left.loop_gens.size());
  int np = static_cast<int>(pm.model.loop_gens.size());
  // left generators occupy the leading fiber slots in their own order
  IntMatrix fproj(nl, np);
  for (int k = 0; k < np; ++k)
    if (pm.fiber_from[k] == 0) fproj.at(k, k) = 1;

  ProjectionComparison out;
  MorphismOptions o1;
  o1.k_base = pm.model.dim - left.dim;
  o1.multiplicative = true;
  o1.name = "loop restriction shriek";
  out.to_restricted = shriek_morphism(product_ss, restricted_ss, sub.shriek,
                                      IntMatrix::identity(np), {0, 0}, o1);
  MorphismOptions o2;
  o2.multiplicative = true;
  o2.name = "fiber projection";
  out.to_loops = shriek_morphism(restricted_ss, loop_ss,
                                 IntMatrix::identity(left.intersection.size()),
                                 fproj, {0, 0}, o2);
  out.composite = compose_morphisms(out.to_loops, out.to_restricted);
  MorphismOptions o3;
  o3.k_base = pm.model.dim - left.dim;
  o3.multiplicative = true;
  o3.name = "model factor projection";
  out.direct =
      shriek_morphism(product_ss, loop_ss, sub.shriek, fproj, {0, 0}, o3);
  return out;
}

} // namespace stq
