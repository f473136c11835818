#include "stq/spectral.hpp"

#include <algorithm>
#include <sstream>

#include "stq/errors.hpp"
#include "stq/smith.hpp"

namespace stq {

namespace {

// Combined additive order of a tensor factor pair: 0 means free.
Int combine_orders(const Int& a, const Int& b) {
  if (a == 0) return b;
  if (b == 0) return a;
  return boost::multiprecision::gcd(a, b);
}

std::string term_label(const GradedAlgebra& base, int bi,
                       const GradedAlgebra& fiber, int fi) {
  const std::string& bl = base.elt(bi).label;
  const std::string& fl = fiber.elt(fi).label;
  if (bi == base.unit()) return fl;
  if (fl == "1") return bl;
  bool wrap = bl.find('*') != std::string::npos ||
              bl.find('+') != std::string::npos;
  return (wrap ? "(" + bl + ")" : bl) + "*" + fl;
}

std::string lift_label(const std::vector<PageGen>& prev_gens,
                       const IntVec& lift) {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < lift.size(); ++i) {
    if (lift[i] == 0) continue;
    Int c = lift[i];
    Int a = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (a != 1) os << a << "*";
    os << prev_gens[i].label;
    first = false;
  }
  return first ? "0" : os.str();
}

} // namespace

SpectralSequence::SpectralSequence(FibrationSpec spec, Ring ring,
                                   int max_total)
    : spec_(std::move(spec)), ring_(ring), max_total_(max_total) {
  if (!ring_.keeps_torsion()) {
    for (const auto& e : spec_.base.elts())
      if (e.order != 0)
        fail(ErrorClass::Validation, "ValidationError",
             "base table carries torsion orders; over " + ring_.to_string() +
                 " supply the reduced table directly");
    for (const auto& g : spec_.fiber_gens)
      if (g.coeff_order != 0)
        fail(ErrorClass::Validation, "ValidationError",
             "fiber generators carry torsion orders; over " +
                 ring_.to_string() + " supply the reduced model directly");
  }
  build_second_page();
}

void SpectralSequence::build_second_page() {
  p_min_ = spec_.base.min_degree();
  p_max_ = spec_.base.max_degree();
  const int width = p_max_ - p_min_;
  internal_total_ = max_total_ + width + 2;
  fiber_ = free_graded_commutative(spec_.fiber_gens,
                                   internal_total_ - p_min_);
  last_page_ = std::max(2, width + 1);

  Page& e2 = pages_[2];
  e2.r = 2;
  for (int bi = 0; bi < spec_.base.size(); ++bi) {
    for (int fi = 0; fi < fiber_.size(); ++fi) {
      int p = spec_.base.elt(bi).deg;
      int q = fiber_.elt(fi).deg;
      if (p + q > internal_total_) continue;
      Int order = combine_orders(spec_.base.elt(bi).order,
                                 fiber_.elt(fi).order);
      if (order == 1) continue; // coprime torsion pair contributes nothing
      PageEntry& entry = e2.entries[{p, q}];
      PageGen g;
      g.label = term_label(spec_.base, bi, fiber_, fi);
      g.order = order;
      entry.gens.push_back(std::move(g));
      e2_monos_[{p, q}].emplace_back(bi, fi);
    }
  }
  for (auto& [at, entry] : e2.entries) {
    int n = entry.rank();
    for (int i = 0; i < n; ++i) {
      entry.gens[i].e2_repr = ScaledVec::zero(n);
      entry.gens[i].e2_repr.num[i] = 1;
    }
    int free_rank = 0;
    std::vector<Int> torsion;
    for (const auto& g : entry.gens) {
      if (g.order == 0)
        ++free_rank;
      else
        torsion.push_back(g.order);
    }
    entry.group = FgAbelianGroup(free_rank, torsion);
    entry.gen_lifts = IntMatrix::identity(n);
    entry.aux_lifts = IntMatrix(n, 0);
    entry.boundary_lifts = IntMatrix(n, 0);
  }

  // Kunneth correction terms. A torsion base class in column p together
  // with a torsion fiber class in row q contributes at (p + 1, q).
  if (ring_.keeps_torsion()) {
    for (int bi = 0; bi < spec_.base.size(); ++bi) {
      const Int& ob = spec_.base.elt(bi).order;
      if (ob < 2) continue;
      for (int fi = 0; fi < fiber_.size(); ++fi) {
        const Int& of = fiber_.elt(fi).order;
        if (of < 2) continue;
        Int t = boost::multiprecision::gcd(ob, of);
        if (t < 2) continue;
        int p = spec_.base.elt(bi).deg + 1;
        int q = fiber_.elt(fi).deg;
        if (p + q > internal_total_) continue;
        if (!spec_.allow_tor_gaps)
          fail(ErrorClass::Validation, "TorsionKunneth",
               "torsion pairing of " + spec_.base.elt(bi).label + " and " +
                   fiber_.elt(fi).label + " contributes at (" +
                   std::to_string(p) + ", " + std::to_string(q) +
                   "); rerun allowing gaps or change coefficients");
        tor_gaps_.push_back(TorGap{
            {p, q},
            t,
            "Tor(Z/" + ob.str() + ", Z/" + of.str() + ") from " +
                spec_.base.elt(bi).label + " and " + fiber_.elt(fi).label});
      }
    }
  }
}

void SpectralSequence::add_pin(const DifferentialPin& pin) {
  if (ran_)
    fail(ErrorClass::Validation, "ValidationError",
         "pins must be added before the run");
  if (pin.r < 2)
    fail(ErrorClass::Validation, "ValidationError", "pins start at page 2");
  Bidegree t{pin.source_at.first - pin.r, pin.source_at.second + pin.r - 1};
  if (static_cast<int>(pin.source.size()) != e2_rank(pin.source_at))
    fail(ErrorClass::Validation, "BidegreeMismatch",
         "pin source length does not match the entry at its bidegree");
  if (static_cast<int>(pin.target.size()) != e2_rank(t)) {
    if (!vec_is_zero(pin.target))
      fail(ErrorClass::Validation, "BidegreeMismatch",
           "pin target length does not match the entry one differential away");
    // a zero target may be written with any length; normalize
  }
  pins_.push_back(pin);
  pins_.back().target.resize(e2_rank(t), Int(0));
}

const Page& SpectralSequence::page(int r) const {
  if (r < 2)
    fail(ErrorClass::Validation, "ValidationError", "pages start at 2");
  int rr = std::min(r, last_page_);
  auto it = pages_.find(rr);
  if (it == pages_.end())
    fail(ErrorClass::Engine, "EngineError", "page not computed yet");
  return it->second;
}

const PageEntry* SpectralSequence::entry(int r, Bidegree at) const {
  const Page& pg = page(r);
  auto it = pg.entries.find(at);
  return it == pg.entries.end() ? nullptr : &it->second;
}

std::vector<std::string> SpectralSequence::e2_labels(Bidegree at) const {
  std::vector<std::string> out;
  auto it = pages_.at(2).entries.find(at);
  if (it == pages_.at(2).entries.end()) return out;
  for (const auto& g : it->second.gens) out.push_back(g.label);
  return out;
}

std::optional<int> SpectralSequence::e2_index(Bidegree at,
                                              const std::string& label) const {
  auto labels = e2_labels(at);
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return std::nullopt;
}

int SpectralSequence::e2_rank(Bidegree at) const {
  auto it = pages_.at(2).entries.find(at);
  return it == pages_.at(2).entries.end() ? 0 : it->second.rank();
}

const std::vector<std::pair<int, int>>& SpectralSequence::e2_mono_pairs(
    Bidegree at) const {
  static const std::vector<std::pair<int, int>> none;
  auto it = e2_monos_.find(at);
  return it == e2_monos_.end() ? none : it->second;
}

ScaledVec SpectralSequence::e2_multiply(Bidegree a, const ScaledVec& va,
                                        Bidegree b,
                                        const ScaledVec& vb) const {
  Bidegree p{a.first + b.first, a.second + b.second};
  if (p.first + p.second > internal_total_)
    fail(ErrorClass::Engine, "DegreeOverflow",
         "product total degree " + std::to_string(p.first + p.second) +
             " leaves the computed window");
  auto target_it = e2_monos_.find(p);
  auto ita = e2_monos_.find(a);
  auto itb = e2_monos_.find(b);
  int out_rank = e2_rank(p);
  ScaledVec out = ScaledVec::zero(out_rank);
  out.den = va.den * vb.den;
  if (ita == e2_monos_.end() || itb == e2_monos_.end()) {
    out.reduce();
    return out;
  }
  // the bigraded Koszul sign depends only on the two bidegrees
  Int sign = (a.second % 2 != 0 && b.first % 2 != 0) ? -1 : 1;

  std::map<std::pair<int, int>, int> index_at;
  if (target_it != e2_monos_.end())
    for (size_t k = 0; k < target_it->second.size(); ++k)
      index_at[target_it->second[k]] = static_cast<int>(k);

  for (size_t i = 0; i < ita->second.size(); ++i) {
    if (va.num[i] == 0) continue;
    for (size_t j = 0; j < itb->second.size(); ++j) {
      if (vb.num[j] == 0) continue;
      auto [b1, f1] = ita->second[i];
      auto [b2, f2] = itb->second[j];
      SparseVec bprod = spec_.base.mult(b1, b2);
      if (bprod.empty()) continue;
      SparseVec fprod = fiber_.mult(f1, f2);
      if (fprod.empty()) continue;
      for (const auto& [b3, cb] : bprod)
        for (const auto& [f3, cf] : fprod) {
          auto it = index_at.find({b3, f3});
          if (it == index_at.end()) continue; // torsion-collapsed target
          out.num[it->second] += sign * va.num[i] * vb.num[j] * cb * cf;
        }
    }
  }
  out.reduce();
  return out;
}

std::optional<ScaledVec> SpectralSequence::reduce_to_page(
    int r, Bidegree at, const ScaledVec& v) const {
  ScaledVec cur = v;
  int stop = std::min(r, last_page_);
  for (int rr = 3; rr <= stop; ++rr) {
    auto it = pages_.at(rr).entries.find(at);
    if (it == pages_.at(rr).entries.end())
      return cur.num.empty() ? std::optional<ScaledVec>(cur) : std::nullopt;
    const PageEntry& e = it->second;
    if (vec_is_zero(cur.num)) {
      cur = ScaledVec::zero(e.rank());
      continue;
    }
    IntMatrix m = IntMatrix::hcat(IntMatrix::hcat(e.gen_lifts, e.aux_lifts),
                                  e.boundary_lifts);
    auto y = solve_integral(m, cur.num, ring_);
    if (!y) return std::nullopt; // the class does not survive
    IntVec head(y->begin(), y->begin() + e.rank());
    if (cur.den == 1) {
      std::vector<Int> orders;
      for (const auto& g : e.gens) orders.push_back(g.order);
      head = reduce_coords(head, orders, ring_);
    }
    cur.num = std::move(head);
    cur.reduce();
  }
  return cur;
}

PageClass SpectralSequence::multiply(const PageClass& a,
                                     const PageClass& b) const {
  if (a.r != b.r)
    fail(ErrorClass::Validation, "ValidationError",
         "factors live on different pages");
  const PageEntry* ea = entry(a.r, a.at);
  const PageEntry* eb = entry(b.r, b.at);
  auto expand = [&](const PageClass& c, const PageEntry* e) {
    ScaledVec acc = ScaledVec::zero(e2_rank(c.at));
    if (!e) return acc;
    for (int i = 0; i < e->rank(); ++i) {
      if (c.coords.num[i] == 0) continue;
      acc = scaled_add(acc, scaled_scale(e->gens[i].e2_repr, c.coords.num[i],
                                         c.coords.den));
    }
    return acc;
  };
  ScaledVec va = expand(a, ea);
  ScaledVec vb = expand(b, eb);
  ScaledVec prod = e2_multiply(a.at, va, b.at, vb);
  Bidegree at{a.at.first + b.at.first, a.at.second + b.at.second};
  auto red = reduce_to_page(std::min(a.r, last_page_), at, prod);
  if (!red)
    fail(ErrorClass::Engine, "EngineError",
         "product of surviving classes failed to survive; invariant broken");
  PageClass out;
  out.r = a.r;
  out.at = at;
  out.coords = *red;
  return out;
}

IntMatrix SpectralSequence::torsion_relations(const PageEntry& e) const {
  std::vector<IntVec> cols;
  for (int i = 0; i < e.rank(); ++i) {
    if (e.gens[i].order < 2) continue;
    IntVec c(e.rank(), Int(0));
    c[i] = e.gens[i].order;
    cols.push_back(c);
  }
  return IntMatrix::from_columns(e.rank(), cols);
}

// ---- differential computation ----

namespace {

struct Block {
  Bidegree source, target;
  int offset = 0;
  int srank = 0, trank = 0;
  std::vector<Int> tords;
};

struct EqRow {
  IntVec coeff; // over the x unknowns
  Int rhs = 0;
  Int slack = 0; // modulus for this row, 0 = exact equation
};

} // namespace

void SpectralSequence::compute_differentials(int r) {
  Page& pg = pages_.at(r);

  std::vector<Block> blocks;
  std::map<Bidegree, int> block_of;
  int nx = 0;
  for (const auto& [at, e] : pg.entries) {
    if (e.trivial()) continue;
    Bidegree t{at.first - r, at.second + r - 1};
    auto it = pg.entries.find(t);
    if (it == pg.entries.end() || it->second.trivial()) continue;
    Block b;
    b.source = at;
    b.target = t;
    b.offset = nx;
    b.srank = e.rank();
    b.trank = it->second.rank();
    for (const auto& g : it->second.gens) b.tords.push_back(g.order);
    block_of[at] = static_cast<int>(blocks.size());
    blocks.push_back(std::move(b));
    nx += blocks.back().srank * blocks.back().trank;
  }

  std::vector<const DifferentialPin*> page_pins;
  for (const auto& p : pins_)
    if (p.r == r) page_pins.push_back(&p);

  if (page_pins.empty() && policy_ == DefaultPolicy::Zero) return;
  if (nx == 0) {
    // nothing can be nonzero; pins demanding otherwise are wrong
    for (const auto* p : page_pins) {
      Bidegree t{p->source_at.first - r, p->source_at.second + r - 1};
      auto tred = reduce_to_page(r, t, ScaledVec{p->target, 1});
      if (!tred || !vec_is_zero(tred->num, ring_))
        fail(ErrorClass::Validation, "DeadTarget",
             "pinned differential on page " + std::to_string(r) +
                 " demands a nonzero value where every differential is zero");
    }
    return;
  }

  auto unknown = [&](int blk, int i, int j) {
    return blocks[blk].offset + i * blocks[blk].trank + j;
  };

  std::vector<EqRow> rows;
  auto add_row = [&](IntVec coeff, const Int& rhs, const Int& modulus) {
    bool any = rhs != 0;
    for (const auto& c : coeff)
      if (c != 0) any = true;
    if (!any) return;
    rows.push_back(EqRow{std::move(coeff), rhs, modulus});
  };

  // torsion generators force divisibility on their values
  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    const Block& b = blocks[bi];
    const PageEntry& src = pg.entries.at(b.source);
    for (int i = 0; i < b.srank; ++i) {
      const Int& o = src.gens[i].order;
      if (o < 2) continue;
      for (int j = 0; j < b.trank; ++j) {
        IntVec c(nx, Int(0));
        c[unknown(static_cast<int>(bi), i, j)] = o;
        add_row(std::move(c), Int(0), b.tords[j]);
      }
    }
  }

  // pinned values
  for (const auto* pin : page_pins) {
    Bidegree s = pin->source_at;
    Bidegree t{s.first - r, s.second + r - 1};
    auto sred = reduce_to_page(r, s, ScaledVec{pin->source, 1});
    if (!sred)
      fail(ErrorClass::Validation, "ValidationError",
           "pin source no longer survives on page " + std::to_string(r));
    auto tred = reduce_to_page(r, t, ScaledVec{pin->target, 1});
    if (!tred)
      fail(ErrorClass::Validation, "DeadTarget",
           "pin target no longer survives on page " + std::to_string(r));
    auto bit = block_of.find(s);
    if (bit == block_of.end()) {
      if (!vec_is_zero(tred->num, ring_))
        fail(ErrorClass::Validation, "DeadTarget",
             "pin demands a nonzero differential out of a dead bidegree");
      continue;
    }
    const Block& b = blocks[bit->second];
    Int l = boost::multiprecision::lcm(sred->den, tred->den);
    for (int j = 0; j < b.trank; ++j) {
      IntVec c(nx, Int(0));
      for (int i = 0; i < b.srank; ++i)
        c[unknown(bit->second, i, j)] = sred->num[i] * (l / sred->den);
      add_row(std::move(c), tred->num[j] * (l / tred->den), b.tords[j]);
    }
  }

  // Leibniz closure: d(gh) = d(g) h + (-1)^{|g|} g d(h) for every generator
  // pair whose product stays inside the computed window.
  for (const auto& [at1, e1] : pg.entries) {
    if (e1.trivial()) continue;
    for (const auto& [at2, e2] : pg.entries) {
      if (e2.trivial()) continue;
      Bidegree prod{at1.first + at2.first, at1.second + at2.second};
      if (prod.first + prod.second > internal_total_) continue;
      Bidegree tp{prod.first - r, prod.second + r - 1};
      auto tpit = pg.entries.find(tp);
      if (tpit == pg.entries.end() || tpit->second.trivial()) continue;
      std::vector<Int> tpords;
      for (const auto& g : tpit->second.gens) tpords.push_back(g.order);

      auto t1it = block_of.find(at1);
      auto t2it = block_of.find(at2);
      auto pit = block_of.find(prod);

      for (int i1 = 0; i1 < e1.rank(); ++i1) {
        for (int i2 = 0; i2 < e2.rank(); ++i2) {
          // gh on this page
          ScaledVec ghe2 = e2_multiply(at1, e1.gens[i1].e2_repr, at2,
                                       e2.gens[i2].e2_repr);
          auto gh = reduce_to_page(r, prod, ghe2);
          if (!gh)
            fail(ErrorClass::Engine, "EngineError",
                 "product of page classes failed to reduce");

          // d(g) h: for each target generator of the first block
          std::vector<ScaledVec> dgh;
          if (t1it != block_of.end()) {
            const Block& b1 = blocks[t1it->second];
            const PageEntry& te1 = pg.entries.at(b1.target);
            for (int j = 0; j < b1.trank; ++j) {
              ScaledVec w = e2_multiply(b1.target, te1.gens[j].e2_repr, at2,
                                        e2.gens[i2].e2_repr);
              auto red = reduce_to_page(r, tp, w);
              if (!red)
                fail(ErrorClass::Engine, "EngineError",
                     "differential target product failed to reduce");
              dgh.push_back(*red);
            }
          }
          // g d(h)
          std::vector<ScaledVec> gdh;
          if (t2it != block_of.end()) {
            const Block& b2 = blocks[t2it->second];
            const PageEntry& te2 = pg.entries.at(b2.target);
            for (int j = 0; j < b2.trank; ++j) {
              ScaledVec w = e2_multiply(at1, e1.gens[i1].e2_repr, b2.target,
                                        te2.gens[j].e2_repr);
              auto red = reduce_to_page(r, tp, w);
              if (!red)
                fail(ErrorClass::Engine, "EngineError",
                     "differential target product failed to reduce");
              gdh.push_back(*red);
            }
          }

          bool lhs = pit != block_of.end() && !vec_is_zero(gh->num);
          if (!lhs && dgh.empty() && gdh.empty()) continue;

          Int sign =
              (at1.first + at1.second) % 2 == 0 ? Int(1) : Int(-1);
          Int den = gh->den;
          for (const auto& w : dgh)
            den = boost::multiprecision::lcm(den, w.den);
          for (const auto& w : gdh)
            den = boost::multiprecision::lcm(den, w.den);

          int tranks = tpit->second.rank();
          for (int l = 0; l < tranks; ++l) {
            IntVec c(nx, Int(0));
            if (pit != block_of.end()) {
              for (int k = 0; k < pg.entries.at(prod).rank(); ++k) {
                if (gh->num[k] == 0) continue;
                c[unknown(pit->second, k, l)] += gh->num[k] * (den / gh->den);
              }
            }
            if (t1it != block_of.end()) {
              for (size_t j = 0; j < dgh.size(); ++j)
                c[unknown(t1it->second, i1, static_cast<int>(j))] -=
                    dgh[j].num[l] * (den / dgh[j].den);
            }
            if (t2it != block_of.end()) {
              for (size_t j = 0; j < gdh.size(); ++j)
                c[unknown(t2it->second, i2, static_cast<int>(j))] -=
                    sign * gdh[j].num[l] * (den / gdh[j].den);
            }
            add_row(std::move(c), Int(0), tpords[l]);
          }
        }
      }
    }
  }

  // assemble, with one slack column per congruence row
  int nslack = 0;
  for (const auto& row : rows)
    if (row.slack >= 2) ++nslack;
  IntMatrix a(static_cast<int>(rows.size()), nx + nslack);
  IntVec b(rows.size(), Int(0));
  int slack_at = nx;
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < nx; ++j) a.at(static_cast<int>(i), j) = rows[i].coeff[j];
    if (rows[i].slack >= 2) a.at(static_cast<int>(i), slack_at++) = rows[i].slack;
    b[i] = rows[i].rhs;
  }

  SolveResult sol = solve_linear(a, b, ring_);
  if (!sol.ok)
    fail(ErrorClass::Engine, "LeibnizInconsistent",
         "page " + std::to_string(r) +
             " pins cannot be closed under the Leibniz rule over " +
             ring_.to_string());

  // forced means constant across the solution set modulo the target order
  IntMatrix k = kernel_basis(a, ring_);
  std::vector<bool> forced(nx, true);
  for (int col = 0; col < k.cols(); ++col) {
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
      const Block& blk = blocks[bi];
      for (int i = 0; i < blk.srank; ++i)
        for (int j = 0; j < blk.trank; ++j) {
          int u = unknown(static_cast<int>(bi), i, j);
          const Int& e = k.at(u, col);
          bool still = ring_.is_zero_elem(e);
          if (!still && blk.tords[j] >= 2 && ring_.keeps_torsion())
            still = e % blk.tords[j] == 0;
          if (!still) forced[u] = false;
        }
    }
  }

  bool all_forced = true;
  for (int u = 0; u < nx; ++u) all_forced = all_forced && forced[u];

  if (!all_forced) {
    if (policy_ == DefaultPolicy::Undetermined) {
      std::ostringstream os;
      os << "page " << r << " leaves differentials undetermined at";
      for (size_t bi = 0; bi < blocks.size(); ++bi) {
        const Block& blk = blocks[bi];
        bool bad = false;
        for (int i = 0; i < blk.srank && !bad; ++i)
          for (int j = 0; j < blk.trank && !bad; ++j)
            bad = !forced[unknown(static_cast<int>(bi), i, j)];
        if (bad)
          os << " (" << blk.source.first << ", " << blk.source.second << ")";
      }
      fail(ErrorClass::Engine, "UndeterminedDifferential", os.str());
    }
    // zero default: pin the leftover freedom to the zero class
    std::vector<EqRow> extra;
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
      const Block& blk = blocks[bi];
      for (int i = 0; i < blk.srank; ++i)
        for (int j = 0; j < blk.trank; ++j) {
          int u = unknown(static_cast<int>(bi), i, j);
          if (forced[u]) continue;
          IntVec c(nx, Int(0));
          c[u] = 1;
          extra.push_back(EqRow{std::move(c), Int(0), blk.tords[j]});
        }
    }
    int extra_slack = 0;
    for (const auto& row : extra)
      if (row.slack >= 2) ++extra_slack;
    IntMatrix a2(a.rows() + static_cast<int>(extra.size()),
                 nx + nslack + extra_slack);
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) a2.at(i, j) = a.at(i, j);
    IntVec b2 = b;
    int at_row = a.rows();
    int at_slack = nx + nslack;
    for (const auto& row : extra) {
      for (int j = 0; j < nx; ++j) a2.at(at_row, j) = row.coeff[j];
      if (row.slack >= 2) a2.at(at_row, at_slack++) = row.slack;
      b2.push_back(row.rhs);
      ++at_row;
    }
    sol = solve_linear(a2, b2, ring_);
    if (!sol.ok)
      fail(ErrorClass::Engine, "LeibnizInconsistent",
           "page " + std::to_string(r) +
               " differentials conflict with the zero default; pin them "
               "explicitly or run with the undetermined policy");
  }

  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    const Block& blk = blocks[bi];
    ScaledMatrix m;
    m.num = IntMatrix(blk.trank, blk.srank);
    m.den = sol.den;
    for (int i = 0; i < blk.srank; ++i)
      for (int j = 0; j < blk.trank; ++j)
        m.num.at(j, i) = sol.x[unknown(static_cast<int>(bi), i, j)];
    if (m.den > 1) {
      Int g = m.den;
      for (int i = 0; i < m.num.rows() && g > 1; ++i)
        for (int j = 0; j < m.num.cols() && g > 1; ++j)
          if (m.num.at(i, j) != 0)
            g = boost::multiprecision::gcd(
                g, m.num.at(i, j) < 0 ? Int(-m.num.at(i, j))
                                      : m.num.at(i, j));
      if (g > 1) {
        m.den /= g;
        for (int i = 0; i < m.num.rows(); ++i)
          for (int j = 0; j < m.num.cols(); ++j) m.num.at(i, j) /= g;
      }
    }
    if (m.den == 1) {
      for (int j = 0; j < blk.trank; ++j)
        for (int i = 0; i < blk.srank; ++i) {
          Int v = m.num.at(j, i);
          if (blk.tords[j] >= 2 && ring_.keeps_torsion()) {
            v %= blk.tords[j];
            if (v < 0) v += blk.tords[j];
          }
          m.num.at(j, i) = ring_.normalize(v);
        }
    }
    if (!m.num.is_zero(ring_)) pg.diffs[blk.source] = std::move(m);
  }
}

void SpectralSequence::check_d_squared(int r) const {
  const Page& pg = pages_.at(r);
  for (const auto& [at, m1] : pg.diffs) {
    Bidegree mid{at.first - r, at.second + r - 1};
    auto it = pg.diffs.find(mid);
    if (it == pg.diffs.end()) continue;
    const ScaledMatrix& m2 = it->second;
    IntMatrix comp = m2.num * m1.num;
    Bidegree far{mid.first - r, mid.second + r - 1};
    auto fit = pg.entries.find(far);
    for (int j = 0; j < comp.cols(); ++j)
      for (int i = 0; i < comp.rows(); ++i) {
        Int v = comp.at(i, j);
        bool ok = ring_.is_zero_elem(v);
        if (!ok && ring_.keeps_torsion() && fit != pg.entries.end()) {
          const Int& o = fit->second.gens[i].order;
          if (o >= 2) ok = v % o == 0;
        }
        if (!ok)
          fail(ErrorClass::Engine, "DSquareNonzero",
               "composite of consecutive page " + std::to_string(r) +
                   " differentials out of (" + std::to_string(at.first) +
                   ", " + std::to_string(at.second) + ") is nonzero");
      }
  }
}

void SpectralSequence::turn_page(int r) {
  const Page& pg = pages_.at(r);
  Page& next = pages_[r + 1];
  next.r = r + 1;

  for (const auto& [at, e] : pg.entries) {
    Bidegree tgt{at.first - r, at.second + r - 1};
    Bidegree src{at.first + r, at.second - r + 1};
    auto out_it = pg.diffs.find(at);
    auto in_it = pg.diffs.find(src);

    PageEntry& ne = next.entries[at];
    if (out_it == pg.diffs.end() && in_it == pg.diffs.end()) {
      // untouched bidegree: carry the entry over unchanged
      ne.gens = e.gens;
      ne.group = e.group;
      ne.gen_lifts = IntMatrix::identity(e.rank());
      ne.aux_lifts = IntMatrix(e.rank(), 0);
      ne.boundary_lifts = torsion_relations(e);
      continue;
    }

    const int n = e.rank();
    IntMatrix lam_s = torsion_relations(e);

    IntMatrix kbasis;
    if (out_it == pg.diffs.end()) {
      kbasis = IntMatrix::identity(n);
    } else {
      const PageEntry& te = pg.entries.at(tgt);
      kbasis = kernel_mod(out_it->second.num, torsion_relations(te), ring_);
    }

    std::vector<IntVec> rel_cols;
    if (in_it != pg.diffs.end()) {
      const IntMatrix& din = in_it->second.num;
      for (int j = 0; j < din.cols(); ++j) {
        IntVec col = din.column(j);
        if (vec_is_zero(col, ring_)) continue;
        auto y = solve_integral(kbasis, col, ring_);
        if (!y)
          fail(ErrorClass::Engine, "EngineError",
               "boundary does not lie in the cycle lattice; invariant broken");
        rel_cols.push_back(*y);
      }
    }
    for (int j = 0; j < lam_s.cols(); ++j) {
      auto y = solve_integral(kbasis, lam_s.column(j), ring_);
      if (!y)
        fail(ErrorClass::Engine, "EngineError",
             "torsion relation escaped the cycle lattice; invariant broken");
      rel_cols.push_back(*y);
    }
    IntMatrix rels = IntMatrix::from_columns(kbasis.cols(), rel_cols);
    QuotientPresentation q =
        quotient_presentation(kbasis.cols(), rels, ring_);

    ne.gen_lifts = kbasis * q.gens;
    ne.aux_lifts = kbasis * q.aux;
    IntMatrix bounds = in_it != pg.diffs.end()
                           ? IntMatrix::hcat(in_it->second.num, lam_s)
                           : lam_s;
    ne.boundary_lifts = bounds;
    if (ring_.kind() == Ring::Kind::PrimeField) {
      ne.gen_lifts = ne.gen_lifts.normalized(ring_);
      ne.aux_lifts = ne.aux_lifts.normalized(ring_);
    }

    int free_rank = 0;
    std::vector<Int> torsion;
    for (const auto& o : q.orders)
      if (o == 0)
        ++free_rank;
      else
        torsion.push_back(o);
    ne.group = FgAbelianGroup(free_rank, torsion);

    for (int gi = 0; gi < ne.gen_lifts.cols(); ++gi) {
      PageGen g;
      g.order = q.orders[gi];
      IntVec lift = ne.gen_lifts.column(gi);
      g.label = lift_label(e.gens, lift);
      ScaledVec repr = ScaledVec::zero(e2_rank(at));
      for (int i = 0; i < n; ++i)
        if (lift[i] != 0)
          repr = scaled_add(repr, scaled_scale(e.gens[i].e2_repr, lift[i],
                                               Int(1)));
      g.e2_repr = std::move(repr);
      ne.gens.push_back(std::move(g));
    }
  }
}

void SpectralSequence::run() {
  if (ran_) return;
  const int width = p_max_ - p_min_;
  for (int r = 2; r <= width; ++r) {
    compute_differentials(r);
    check_d_squared(r);
    turn_page(r);
  }
  ran_ = true;
}

int SpectralSequence::collapsed_at() const {
  int last_nonzero = 0;
  for (const auto& [r, pg] : pages_)
    if (!pg.diffs.empty()) last_nonzero = std::max(last_nonzero, r);
  return std::max(2, last_nonzero + 1);
}

bool SpectralSequence::differential_nonzero(int r) const {
  auto it = pages_.find(r);
  return it != pages_.end() && !it->second.diffs.empty();
}

bool SpectralSequence::column_receives(int p) const {
  for (const auto& [r, pg] : pages_)
    for (const auto& [at, m] : pg.diffs)
      if (at.first - r == p && !m.num.is_zero(ring_)) return true;
  return false;
}

bool SpectralSequence::survives_fully(Bidegree at) const {
  int n = e2_rank(at);
  if (n == 0) return true;
  const PageEntry* e = entry(last_page_, at);
  if (!e) return false;
  std::vector<IntVec> cols;
  for (const auto& g : e->gens) cols.push_back(g.e2_repr.num);
  IntMatrix reprs = IntMatrix::from_columns(n, cols);
  const PageEntry& e2e = pages_.at(2).entries.at(at);
  IntMatrix m = IntMatrix::hcat(reprs, torsion_relations(e2e));
  for (int k = 0; k < n; ++k) {
    IntVec unit(n, Int(0));
    unit[k] = 1;
    if (!solve_linear(m, unit, ring_).ok) return false;
  }
  return true;
}

std::vector<std::pair<Bidegree, FgAbelianGroup>>
SpectralSequence::stable_layers(int total) const {
  std::vector<std::pair<Bidegree, FgAbelianGroup>> out;
  for (const auto& [at, e] : page(last_page_).entries) {
    if (at.first + at.second != total || e.trivial()) continue;
    out.emplace_back(at, e.group);
  }
  return out;
}

bool SpectralSequence::extension_ambiguous(int total) const {
  return stable_layers(total).size() >= 2;
}

std::string SpectralSequence::e2_vec_to_string(Bidegree at,
                                               const ScaledVec& v) const {
  auto it = pages_.at(2).entries.find(at);
  if (it == pages_.at(2).entries.end() || vec_is_zero(v.num)) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < v.num.size(); ++i) {
    if (v.num[i] == 0) continue;
    Int c = v.num[i];
    Int a = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (a != 1) os << a << "*";
    os << it->second.gens[i].label;
    first = false;
  }
  if (first) return "0";
  if (v.den != 1) return "(" + os.str() + ")/" + v.den.str();
  return os.str();
}

std::string SpectralSequence::class_to_string(const PageClass& c) const {
  const PageEntry* e = entry(c.r, c.at);
  if (!e || vec_is_zero(c.coords.num)) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < e->rank(); ++i) {
    if (c.coords.num[i] == 0) continue;
    Int v = c.coords.num[i];
    Int a = v < 0 ? Int(-v) : v;
    if (first) {
      if (v < 0) os << "-";
    } else {
      os << (v < 0 ? " - " : " + ");
    }
    if (a != 1) os << a << "*";
    os << "[" << e->gens[i].label << "]";
    first = false;
  }
  if (first) return "0";
  if (c.coords.den != 1) return "(" + os.str() + ")/" + c.coords.den.str();
  return os.str();
}

} // namespace stq
