#include "stq/string_products.hpp"

#include <algorithm>
#include <sstream>

namespace stq {

namespace {

// Coefficient order of a product of two classes: torsion survives as the
// gcd, a free factor keeps the other side's order.
Int combine_orders(const Int& a, const Int& b) {
  if (a == 0) return b;
  if (b == 0) return a;
  return boost::multiprecision::gcd(a, b);
}

Int reduce_mod_order(const Int& c, const Int& order) {
  if (order == 0) return c;
  Int r = c % order;
  if (r < 0) r += order;
  return r;
}

std::string factor_label(const LoopAlgebraModel& model, int idx) {
  if (idx == model.point) return "1";
  if (idx == model.fundamental) return model.name;
  return model.intersection.elt(idx).label;
}

CrossVec cross_unit_vec(const std::pair<int, int>& at) {
  return CrossVec{{at, Int(1)}};
}

void check_stack_matches(const LoopAlgebraModel& model,
                         const SpectralSequence& ss, const char* op) {
  const GradedAlgebra& base = ss.base();
  bool same = base.size() == model.intersection.size();
  for (int i = 0; same && i < base.size(); ++i) {
    same = base.elt(i).label == model.intersection.elt(i).label &&
           base.elt(i).deg == model.intersection.elt(i).deg;
  }
  if (!same || ss.min_column() != -model.dim)
    fail(ErrorClass::Validation, "ValidationError",
         std::string(op) + " needs the loop-space stack of '" + model.name +
             "'; the given stack was built over a different base");
}

// Rewrite a page class in second-page coordinates of its bidegree.
ScaledVec expand_to_e2(const SpectralSequence& ss, const PageClass& x) {
  const PageEntry* e = ss.entry(x.r, x.at);
  if (e == nullptr || static_cast<int>(x.coords.num.size()) != e->rank())
    fail(ErrorClass::Validation, "ValidationError",
         "page class coordinates do not match the entry at its bidegree");
  ScaledVec acc = ScaledVec::zero(ss.e2_rank(x.at));
  for (int i = 0; i < e->rank(); ++i)
    acc = scaled_add(acc,
                     scaled_scale(e->gens[i].e2_repr, x.coords.num[i],
                                  x.coords.den));
  return acc;
}

PageClass to_stable(const SpectralSequence& ss, const PageClass& x,
                    const char* who) {
  int last = ss.last_page();
  if (x.r == last) return x;
  auto red = ss.reduce_to_page(last, x.at, expand_to_e2(ss, x));
  if (!red)
    fail(ErrorClass::Validation, "ValidationError",
         std::string(who) + ": the class dies before the stable page");
  return PageClass{last, x.at, *red};
}

} // namespace

void LoopAlgebraModel::validate() const {
  const GradedAlgebra& a = intersection;
  if (dim < 0)
    fail(ErrorClass::Validation, "ValidationError", "negative dimension");
  if (fundamental < 0 || fundamental >= a.size() || point < 0 ||
      point >= a.size())
    fail(ErrorClass::Validation, "ValidationError",
         "fundamental and point classes must be intersection basis indices");
  if (a.unit() != fundamental || a.elt(fundamental).deg != 0 ||
      a.elt(fundamental).order != 0)
    fail(ErrorClass::Validation, "ValidationError",
         "the fundamental class must be the free degree-zero unit of the "
         "intersection algebra");
  if (a.elt(point).deg != -dim || a.elt(point).order != 0)
    fail(ErrorClass::Validation, "ValidationError",
         "the point class must be free in degree -" + std::to_string(dim));
  for (const auto& e : a.elts())
    if (e.deg < -dim || e.deg > 0)
      fail(ErrorClass::Validation, "ValidationError",
           "intersection class '" + e.label +
               "' lies outside degrees [-dim, 0]");
  for (const auto& g : loop_gens)
    if (g.deg <= 0)
      fail(ErrorClass::Validation, "ValidationError",
           "loop generator '" + g.label + "' must have positive degree");
}

CrossVec diamond_product(const CrossVec& a, const CrossVec& b,
                         const LoopAlgebraModel& model) {
  const GradedAlgebra& inter = model.intersection;
  CrossVec out;
  for (const auto& [la, ca] : a) {
    for (const auto& [lb, cb] : b) {
      // middle product lands on the point line only from the bottom degree
      if (inter.elt(la.second).deg + inter.elt(lb.first).deg != -model.dim)
        continue;
      Int cp = 0;
      for (const auto& [idx, c] : inter.mult(la.second, lb.first))
        if (idx == model.point) cp = c;
      if (cp == 0) continue;
      out[{la.first, lb.second}] += ca * cb * cp;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    Int order = combine_orders(inter.elt(it->first.first).order,
                               inter.elt(it->first.second).order);
    it->second = reduce_mod_order(it->second, order);
    it = it->second == 0 ? out.erase(it) : std::next(it);
  }
  return out;
}

DiamondAlgebra build_diamond_table(const LoopAlgebraModel& model) {
  model.validate();
  const GradedAlgebra& inter = model.intersection;
  DiamondAlgebra alg;
  for (int l = 0; l < inter.size(); ++l)
    for (int r = 0; r < inter.size(); ++r)
      alg.basis.push_back({l, r});
  std::sort(alg.basis.begin(), alg.basis.end(),
            [&](const auto& x, const auto& y) {
              int dx = inter.elt(x.first).deg + inter.elt(x.second).deg;
              int dy = inter.elt(y.first).deg + inter.elt(y.second).deg;
              return std::tie(dx, x) < std::tie(dy, y);
            });
  for (const auto& [l, r] : alg.basis) {
    alg.labels.push_back(factor_label(model, l) + "x" +
                         factor_label(model, r));
    alg.degrees.push_back(inter.elt(l).deg + inter.elt(r).deg + model.dim);
    alg.orders.push_back(
        combine_orders(inter.elt(l).order, inter.elt(r).order));
  }

  int n = static_cast<int>(alg.basis.size());
  alg.table.assign(n, std::vector<CrossVec>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      alg.table[i][j] = diamond_product(cross_unit_vec(alg.basis[i]),
                                        cross_unit_vec(alg.basis[j]), model);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        CrossVec left = diamond_product(alg.table[i][j],
                                        cross_unit_vec(alg.basis[k]), model);
        CrossVec right = diamond_product(cross_unit_vec(alg.basis[i]),
                                         alg.table[j][k], model);
        if (left != right)
          fail(ErrorClass::Engine, "AssociativityFailure",
               "diamond product fails associativity on (" + alg.labels[i] +
                   ", " + alg.labels[j] + ", " + alg.labels[k] + ")");
      }

  for (int i = 0; i < n && !alg.noncommutative_witness; ++i)
    for (int j = 0; j < n; ++j)
      if (alg.table[i][j] != alg.table[j][i]) {
        alg.noncommutative_witness = {i, j};
        break;
      }

  for (int e = 0; e < n; ++e) {
    bool failed = false;
    for (int x = 0; x < n; ++x) {
      CrossVec want = cross_unit_vec(alg.basis[x]);
      if (alg.table[e][x] != want || alg.table[x][e] != want) {
        alg.unit_failures.push_back({e, x});
        failed = true;
        break;
      }
    }
    if (!failed) alg.basis_unit = e;
  }
  return alg;
}

std::string render_diamond_table(const DiamondAlgebra& alg,
                                 const LoopAlgebraModel& model) {
  int n = static_cast<int>(alg.basis.size());
  auto cell = [&](const CrossVec& v) -> std::string {
    if (v.empty()) return "0";
    std::string s;
    for (int k = 0; k < n; ++k) {
      auto it = v.find(alg.basis[k]);
      if (it == v.end()) continue;
      Int c = it->second;
      if (s.empty()) {
        if (c < 0) { s += "-"; c = -c; }
      } else {
        s += c < 0 ? " - " : " + ";
        if (c < 0) c = -c;
      }
      if (c != 1) s += c.str() + "*";
      s += alg.labels[k];
    }
    return s;
  };

  std::vector<std::vector<std::string>> cells(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cells[i].push_back(cell(alg.table[i][j]));

  size_t w0 = 2;
  for (const auto& l : alg.labels) w0 = std::max(w0, l.size());
  std::vector<size_t> w(n);
  for (int j = 0; j < n; ++j) {
    w[j] = alg.labels[j].size();
    for (int i = 0; i < n; ++i) w[j] = std::max(w[j], cells[i][j].size());
  }
  auto pad = [](const std::string& s, size_t width, bool last) {
    return last ? s : s + std::string(width - s.size(), ' ');
  };

  std::ostringstream out;
  out << "diamond product table for " << model.name << " (dim " << model.dim
      << ")\n";
  out << "basis in shifted degrees:";
  for (int i = 0; i < n; ++i)
    out << (i ? ", " : " ") << alg.labels[i] << " (" << alg.degrees[i] << ")";
  out << "\n\n";
  out << pad("<>", w0, false);
  for (int j = 0; j < n; ++j)
    out << " | " << pad(alg.labels[j], w[j], j == n - 1);
  out << "\n" << std::string(w0, '-');
  for (int j = 0; j < n; ++j) out << "-+-" << std::string(w[j], '-');
  out << "\n";
  for (int i = 0; i < n; ++i) {
    out << pad(alg.labels[i], w0, false);
    for (int j = 0; j < n; ++j)
      out << " | " << pad(cells[i][j], w[j], j == n - 1);
    out << "\n";
  }
  return out.str();
}

FibrationSpec loop_e2_product(const LoopAlgebraModel& model,
                              bool allow_tor_gaps) {
  model.validate();
  FibrationSpec spec;
  spec.name = "L" + model.name;
  spec.base = model.intersection;
  spec.fiber_gens = model.loop_gens;
  spec.allow_tor_gaps = allow_tor_gaps;
  return spec;
}

FibrationSpec path_fibration_spec(const LoopAlgebraModel& model) {
  DiamondAlgebra d = build_diamond_table(model);
  std::map<std::pair<int, int>, int> pos;
  int n = static_cast<int>(d.basis.size());
  for (int i = 0; i < n; ++i) pos[d.basis[i]] = i;

  GradedAlgebra base;
  for (int i = 0; i < n; ++i)
    base.add_elt(d.labels[i], d.degrees[i], d.orders[i]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (d.table[i][j].empty()) continue;
      SparseVec v;
      for (const auto& [at, c] : d.table[i][j]) v.push_back({pos[at], c});
      std::sort(v.begin(), v.end());
      base.set_product(i, j, v);
    }
  base.validate(true);

  FibrationSpec spec;
  spec.name = model.name + " paths";
  spec.base = base;
  spec.fiber_gens = model.loop_gens;
  return spec;
}

RestrictedSpec restricted_product_spec(const LoopAlgebraModel& model,
                                       const SubmanifoldSpec& sub) {
  model.validate();
  if (sub.shriek.rows() != sub.intersection.size() ||
      sub.shriek.cols() != model.intersection.size())
    fail(ErrorClass::Validation, "ValidationError",
         "shriek matrix must map the ambient intersection basis to the "
         "submanifold basis");
  for (int r = 0; r < sub.shriek.rows(); ++r)
    for (int c = 0; c < sub.shriek.cols(); ++c)
      if (sub.shriek.at(r, c) != 0 &&
          sub.intersection.elt(r).deg != model.intersection.elt(c).deg)
        fail(ErrorClass::Validation, "ValidationError",
             "shriek entry (" + sub.intersection.elt(r).label + ", " +
                 model.intersection.elt(c).label +
                 ") does not preserve the shifted degree");

  RestrictedSpec out{FibrationSpec{}, sub.shriek};
  out.spec.name = "L_" + sub.name + " " + model.name;
  out.spec.base = sub.intersection;
  out.spec.fiber_gens = model.loop_gens;
  return out;
}

std::vector<int> IntersectionImage::nonzero_degrees() const {
  std::vector<int> out;
  for (const auto& d : degrees)
    if (!d.image.trivial()) out.push_back(d.degree);
  return out;
}

bool IntersectionImage::full_everywhere() const {
  return std::all_of(degrees.begin(), degrees.end(),
                     [](const DegreeImage& d) { return d.full; });
}

IntersectionImage intersection_morphism(const LoopAlgebraModel& model,
                                        const SpectralSequence& ss) {
  model.validate();
  check_stack_matches(model, ss, "intersection_morphism");
  IntersectionImage out;
  out.truncation = ss.max_total();
  for (int q = 0; q <= ss.max_total(); ++q) {
    DegreeImage d;
    d.degree = q;
    if (const PageEntry* e2 = ss.entry(2, {0, q})) d.ambient = e2->group;
    if (const PageEntry* st = ss.entry(ss.last_page(), {0, q})) {
      d.image = st->group;
      for (const auto& g : st->gens) {
        d.generators.push_back(g.e2_repr);
        d.labels.push_back(g.label);
      }
    }
    d.full = ss.survives_fully({0, q});
    out.degrees.push_back(std::move(d));
  }
  return out;
}

MuResult mu_a(const LoopAlgebraModel& model, const SpectralSequence& ss,
              const PageClass& x) {
  model.validate();
  check_stack_matches(model, ss, "mu_a");
  Bidegree bottom{-model.dim, 0};
  if (ss.e2_rank(bottom) != 1)
    fail(ErrorClass::Engine, "EngineError",
         "the point column does not start from a single class in degree "
         "zero");
  // nothing can hit or leave the bottom corner, so the point class survives
  auto a_red = ss.reduce_to_page(ss.last_page(), bottom,
                                 ScaledVec{{Int(1)}, Int(1)});
  if (!a_red)
    fail(ErrorClass::Engine, "EngineError",
         "invariant broken: the point class failed to reach the stable page");
  PageClass a{ss.last_page(), bottom, *a_red};
  PageClass xs = to_stable(ss, x, "mu_a");
  PageClass value = ss.multiply(a, xs);
  return MuResult{value,
                  ss.extension_ambiguous(value.at.first + value.at.second)};
}

TheoremCReport check_theorem_c(const LoopAlgebraModel& model,
                               const SpectralSequence& ss) {
  model.validate();
  check_stack_matches(model, ss, "check_theorem_c");
  TheoremCReport rep;
  rep.onto = true;
  for (int q = 0; q <= ss.max_total(); ++q)
    if (!ss.survives_fully({0, q})) {
      rep.onto = false;
      break;
    }
  rep.collapse = ss.collapsed_at() == 2;
  rep.injective = !ss.column_receives(-model.dim);
  if (rep.onto != rep.collapse || rep.collapse != rep.injective)
    fail(ErrorClass::Engine, "EquivalenceViolation",
         "the collapse tests disagree on '" + model.name +
             "': onto=" + (rep.onto ? "yes" : "no") +
             " collapse=" + (rep.collapse ? "yes" : "no") +
             " injective=" + (rep.injective ? "yes" : "no") +
             "; a multiplicative run over a Poincare-duality base cannot "
             "split these");
  return rep;
}

} // namespace stq
