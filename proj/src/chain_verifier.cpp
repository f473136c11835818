#include "stq/chain_verifier.hpp"

#include <algorithm>

#include "stq/errors.hpp"

namespace stq {

namespace {

bool flag(const std::vector<std::vector<char>>& flags, const SimplexRef& s) {
  int d = s.core_dim();
  if (d < 0 || d >= static_cast<int>(flags.size())) return false;
  if (s.index < 0 || s.index >= static_cast<int>(flags[d].size())) return false;
  return flags[d][s.index] != 0;
}

void require(bool ok, const std::string& message) {
  if (!ok) fail(ErrorClass::Validation, "MissingTubeData", message);
}

// The collapse kills everything outside the tube, so the outside together
// with the rim has to be face-closed or the collapse is not a chain map.
void check_closure(const BundleEmbedding& e) {
  const SimplicialSet& X = *e.total;
  for (int n = 1; n <= X.top_dim(); ++n)
    for (int idx = 0; idx < X.count(n); ++idx) {
      SimplexRef s = X.ref(n, idx);
      bool tube = flag(e.tube.in_tube, s);
      bool rim = flag(e.tube.in_rim, s);
      for (int i = 0; i <= n; ++i) {
        SimplexRef f = X.face(s, i);
        if (tube && !flag(e.tube.in_tube, f))
          fail(ErrorClass::Validation, "TubeNotClosed",
               e.name + ": face " + X.ref_string(f) + " of the tube simplex " +
                   X.label(n, idx) + " leaves the tube");
        if (rim && !flag(e.tube.in_rim, f))
          fail(ErrorClass::Validation, "TubeNotClosed",
               e.name + ": face " + X.ref_string(f) + " of the rim simplex " +
                   X.label(n, idx) + " leaves the rim");
        if (!tube || rim) {
          bool f_outside = !flag(e.tube.in_tube, f) || flag(e.tube.in_rim, f);
          if (!f_outside)
            fail(ErrorClass::Validation, "TubeNotClosed",
                 e.name + ": face " + X.ref_string(f) + " of " +
                     X.label(n, idx) +
                     " re-enters the open tube, so the collapse is not a "
                     "chain map");
        }
      }
    }
}

Chain shriek_unchecked(const BundleEmbedding& e, const Chain& c) {
  Chain kept{c.dim, {}};
  for (const auto& [idx, a] : c.terms) {
    SimplexRef s = e.total->ref(c.dim, idx);
    if (flag(e.tube.in_tube, s) && !flag(e.tube.in_rim, s))
      kept.terms.emplace(idx, a);
  }
  Chain capped = cap_product(*e.total, e.tube.thom, kept, e.ring);
  return push_chain(*e.tube.retraction, capped, e.ring);
}

} // namespace

Int ThomCochain::value_on(const SimplexRef& s) const {
  if (s.is_degenerate()) return 0;
  auto it = values.find(s.index);
  return it == values.end() ? Int(0) : it->second;
}

int serre_filtration(const SimplicialMap& fibration, const SimplexRef& s) {
  return fibration.apply(s).core_dim();
}

int FilteredChain::level_of(int index) const {
  return serre_filtration(*fibration, fibration->source().ref(chain.dim, index));
}

int FilteredChain::level() const {
  int best = -1;
  for (const auto& [idx, a] : chain.terms) best = std::max(best, level_of(idx));
  return best;
}

Chain cap_product(const SimplicialSet& X, const ThomCochain& tau,
                  const Chain& c, const Ring& ring) {
  int k = tau.degree;
  int n = c.dim;
  Chain out{n - k, {}};
  if (k < 0 || n < k) return out;
  bool flip = (k % 2) && ((n - k) % 2);
  for (const auto& [idx, a] : c.terms) {
    SimplexRef back = X.ref(n, idx);
    for (int t = 0; t < n - k; ++t) back = X.face(back, 0);
    Int v = tau.value_on(back);
    if (ring.is_zero_elem(v)) continue;
    SimplexRef front = X.ref(n, idx);
    for (int t = n; t > n - k; --t) front = X.face(front, t);
    if (front.is_degenerate()) continue;
    chain_add(out, front.index, flip ? Int(-v * a) : Int(v * a), ring);
  }
  return out;
}

void validate_embedding(const BundleEmbedding& e) {
  require(e.total && e.sub && e.fibration && e.sub_fibration,
          e.name + ": the embedding is missing a space or a fibration");
  require(e.tube.retraction != nullptr,
          e.name + ": the embedding has no tube retraction");
  require(e.total->sealed() && e.sub->sealed() && e.fibration->sealed() &&
              e.sub_fibration->sealed() && e.tube.retraction->sealed(),
          e.name + ": every space and map must be sealed first");
  require(&e.fibration->source() == e.total,
          e.name + ": the fibration does not start at the ambient space");
  require(&e.sub_fibration->source() == e.sub,
          e.name + ": the sub fibration does not start at the embedded space");
  require(&e.tube.retraction->source() == e.total &&
              &e.tube.retraction->target() == e.sub,
          e.name + ": the tube retraction must map the ambient space onto "
                   "the embedded one");
  int dims = e.total->top_dim() + 1;
  require(static_cast<int>(e.tube.in_tube.size()) == dims &&
              static_cast<int>(e.tube.in_rim.size()) == dims,
          e.name + ": tube flags must cover every dimension");
  for (int n = 0; n < dims; ++n)
    require(static_cast<int>(e.tube.in_tube[n].size()) == e.total->count(n) &&
                static_cast<int>(e.tube.in_rim[n].size()) == e.total->count(n),
            e.name + ": tube flags must cover every simplex");

  if (e.base_drop < 0 || e.total_drop < e.base_drop)
    fail(ErrorClass::Validation, "DegreeMismatch",
         e.name + ": codimensions need 0 <= base_drop <= total_drop");
  if (e.tube.thom.degree != e.total_drop)
    fail(ErrorClass::Validation, "DegreeMismatch",
         e.name + ": the Thom cochain has degree " +
             std::to_string(e.tube.thom.degree) + ", the embedding drops " +
             std::to_string(e.total_drop));

  const SimplicialSet& X = *e.total;
  int k = e.tube.thom.degree;
  for (int n = 0; n < dims; ++n)
    for (int idx = 0; idx < X.count(n); ++idx)
      if (e.tube.in_rim[n][idx] && !e.tube.in_tube[n][idx])
        fail(ErrorClass::Validation, "TubeNotClosed",
             e.name + ": rim simplex " + X.label(n, idx) +
                 " is not part of the tube");
  check_closure(e);

  for (const auto& [idx, v] : e.tube.thom.values) {
    if (e.ring.is_zero_elem(v)) continue;
    SimplexRef s = X.ref(k, idx);
    if (!flag(e.tube.in_tube, s) || flag(e.tube.in_rim, s))
      fail(ErrorClass::Validation, "ThomNotRelative",
           e.name + ": the Thom cochain is supported on " + X.label(k, idx) +
               ", which is not inside the open tube");
  }
  // Relative cocycle: the alternating face sum vanishes on every tube
  // simplex one degree up. Rim and degenerate faces contribute zero anyway.
  for (int idx = 0; idx < X.count(k + 1); ++idx) {
    if (!e.tube.in_tube[k + 1][idx]) continue;
    SimplexRef s = X.ref(k + 1, idx);
    Int sum = 0;
    for (int i = 0; i <= k + 1; ++i)
      sum += (i % 2) ? Int(-e.tube.thom.value_on(X.face(s, i)))
                     : e.tube.thom.value_on(X.face(s, i));
    if (!e.ring.is_zero_elem(e.ring.normalize(sum)))
      fail(ErrorClass::Validation, "ThomNotCocycle",
           e.name + ": the Thom cochain fails the cocycle identity on " +
               X.label(k + 1, idx) + " over " + e.ring.to_string());
  }
}

Chain chain_shriek(const BundleEmbedding& e, const Chain& c) {
  validate_embedding(e);
  return shriek_unchecked(e, c);
}

ShiftReport verify_filtration_shift(const BundleEmbedding& e) {
  validate_embedding(e);
  ShiftReport rep;
  rep.model = e.name;
  rep.ring = e.ring.to_string();
  for (int n = 0; n <= e.total->top_dim(); ++n)
    for (int idx = 0; idx < e.total->count(n); ++idx) {
      int level = serre_filtration(*e.fibration, e.total->ref(n, idx));
      Chain image = shriek_unchecked(e, chain_term(n, idx));
      ++rep.checked;
      if (image.zero()) continue;
      ++rep.nonzero_images;
      if (image.dim != n - e.total_drop) ++rep.degree_mismatches;
      for (const auto& [j, a] : image.terms) {
        int jl = serre_filtration(*e.sub_fibration, e.sub->ref(image.dim, j));
        if (jl > level - e.base_drop)
          rep.failures.push_back(ShiftFailure{
              e.total->label(n, idx), n, level, e.sub->label(image.dim, j),
              image.dim, jl, level - e.base_drop});
      }
    }
  return rep;
}

namespace {

// ---- corpus ----------------------------------------------------------
//
// square: the product of two segments, base direction a -> b, fiber
// direction x -> y, cut along the diagonal ax -> by.

struct Corpus {
  ChainModel model;

  SimplicialSet* space(std::unique_ptr<SimplicialSet> s) {
    model.spaces.push_back(std::move(s));
    return model.spaces.back().get();
  }
  SimplicialMap* map(std::unique_ptr<SimplicialMap> m) {
    model.maps.push_back(std::move(m));
    return model.maps.back().get();
  }
};

std::unique_ptr<SimplicialSet> make_point() {
  auto s = std::make_unique<SimplicialSet>("point");
  s->add_vertex("*");
  s->seal();
  return s;
}

std::unique_ptr<SimplicialSet> make_line(const std::string& name,
                                         const std::string& v0,
                                         const std::string& v1,
                                         const std::string& edge) {
  auto s = std::make_unique<SimplicialSet>(name);
  int a = s->add_vertex(v0);
  int b = s->add_vertex(v1);
  s->add_simplex(1, edge, {s->ref(0, b), s->ref(0, a)});
  s->seal();
  return s;
}

std::unique_ptr<SimplicialSet> make_circle() {
  auto s = std::make_unique<SimplicialSet>("circle");
  int o = s->add_vertex("o");
  s->add_simplex(1, "e", {s->ref(0, o), s->ref(0, o)});
  s->seal();
  return s;
}

std::unique_ptr<SimplicialSet> make_square() {
  auto s = std::make_unique<SimplicialSet>("square");
  int ax = s->add_vertex("ax");
  int ay = s->add_vertex("ay");
  int bx = s->add_vertex("bx");
  int by = s->add_vertex("by");
  auto v = [&](int i) { return s->ref(0, i); };
  int axy = s->add_simplex(1, "a.xy", {v(ay), v(ax)});
  int bxy = s->add_simplex(1, "b.xy", {v(by), v(bx)});
  int abx = s->add_simplex(1, "ab.x", {v(bx), v(ax)});
  int aby = s->add_simplex(1, "ab.y", {v(by), v(ay)});
  int diag = s->add_simplex(1, "ab.xy", {v(by), v(ax)});
  auto ed = [&](int i) { return s->ref(1, i); };
  s->add_simplex(2, "lower", {ed(bxy), ed(diag), ed(abx)});
  s->add_simplex(2, "upper", {ed(aby), ed(diag), ed(axy)});
  s->seal();
  return s;
}

// Two triangles of a square with the vertical sides glued by a flip:
// c is the glued side, bot and top form the boundary circle, diag closes
// both triangles through the single interior diagonal.
std::unique_ptr<SimplicialSet> make_mobius() {
  auto s = std::make_unique<SimplicialSet>("mobius");
  int v = s->add_vertex("v");
  int w = s->add_vertex("w");
  auto vr = [&](int i) { return s->ref(0, i); };
  int c = s->add_simplex(1, "c", {vr(w), vr(v)});
  int bot = s->add_simplex(1, "bot", {vr(w), vr(v)});
  int top = s->add_simplex(1, "top", {vr(v), vr(w)});
  int diag = s->add_simplex(1, "diag", {vr(v), vr(v)});
  auto ed = [&](int i) { return s->ref(1, i); };
  s->add_simplex(2, "T1", {ed(c), ed(bot), ed(diag)});
  s->add_simplex(2, "T2", {ed(top), ed(diag), ed(c)});
  s->seal();
  return s;
}

std::unique_ptr<SimplicialSet> make_sphere() {
  auto s = std::make_unique<SimplicialSet>("sphere");
  for (int i = 0; i < 4; ++i) s->add_vertex("v" + std::to_string(i));
  auto v = [&](int i) { return s->ref(0, i); };
  std::vector<std::pair<int, int>> pairs = {{0, 1}, {0, 2}, {0, 3},
                                            {1, 2}, {1, 3}, {2, 3}};
  std::map<std::pair<int, int>, int> eidx;
  for (auto [i, j] : pairs)
    eidx[{i, j}] = s->add_simplex(
        1, "e" + std::to_string(i) + std::to_string(j), {v(j), v(i)});
  auto tri = [&](int i, int j, int k) {
    s->add_simplex(2,
                   "f" + std::to_string(i) + std::to_string(j) +
                       std::to_string(k),
                   {s->ref(1, eidx[{j, k}]), s->ref(1, eidx[{i, k}]),
                    s->ref(1, eidx[{i, j}])});
  };
  tri(0, 1, 2);
  tri(0, 1, 3);
  tri(0, 2, 3);
  tri(1, 2, 3);
  s->seal();
  return s;
}

// square -> line, collapsing the other product direction. base = true
// collapses the fiber direction, false the base direction.
std::unique_ptr<SimplicialMap> square_projection(const SimplicialSet* sq,
                                                 const SimplicialSet* line,
                                                 bool base,
                                                 const std::string& name) {
  auto m = std::make_unique<SimplicialMap>(name, sq, line);
  auto lv = [&](int i) { return line->ref(0, i); };
  SimplexRef e = line->ref(1, 0);
  // vertices ax ay bx by
  m->set_image(0, 0, lv(0));
  m->set_image(0, 1, base ? lv(0) : lv(1));
  m->set_image(0, 2, base ? lv(1) : lv(0));
  m->set_image(0, 3, lv(1));
  // edges a.xy b.xy ab.x ab.y ab.xy
  if (base) {
    m->set_image(1, 0, SimplicialSet::degeneracy(lv(0), 0));
    m->set_image(1, 1, SimplicialSet::degeneracy(lv(1), 0));
    m->set_image(1, 2, e);
    m->set_image(1, 3, e);
  } else {
    m->set_image(1, 0, e);
    m->set_image(1, 1, e);
    m->set_image(1, 2, SimplicialSet::degeneracy(lv(0), 0));
    m->set_image(1, 3, SimplicialSet::degeneracy(lv(1), 0));
  }
  m->set_image(1, 4, e);
  // lower = (ax bx by), upper = (ax ay by)
  m->set_image(2, 0, SimplicialSet::degeneracy(e, base ? 1 : 0));
  m->set_image(2, 1, SimplicialSet::degeneracy(e, base ? 0 : 1));
  m->seal();
  return m;
}

std::unique_ptr<SimplicialMap> constant_map(const SimplicialSet* src,
                                            const SimplicialSet* pt,
                                            const std::string& name) {
  auto m = std::make_unique<SimplicialMap>(name, src, pt);
  for (int n = 0; n <= src->top_dim(); ++n)
    for (int idx = 0; idx < src->count(n); ++idx) {
      SimplexRef img = pt->ref(0, 0);
      for (int t = 0; t < n; ++t) img = SimplicialSet::degeneracy(img, t);
      m->set_image(n, idx, img);
    }
  m->seal();
  return m;
}

std::unique_ptr<SimplicialMap> identity_map(const SimplicialSet* s) {
  auto m = std::make_unique<SimplicialMap>("id " + s->name(), s, s);
  for (int n = 0; n <= s->top_dim(); ++n)
    for (int idx = 0; idx < s->count(n); ++idx)
      m->set_image(n, idx, s->ref(n, idx));
  m->seal();
  return m;
}

std::unique_ptr<SimplicialMap> mobius_projection(const SimplicialSet* mo,
                                                 const SimplicialSet* circle) {
  auto m = std::make_unique<SimplicialMap>("mobius projection", mo, circle);
  SimplexRef o = circle->ref(0, 0);
  SimplexRef e = circle->ref(1, 0);
  m->set_image(0, 0, o);
  m->set_image(0, 1, o);
  m->set_image(1, 0, SimplicialSet::degeneracy(o, 0));  // c, the fiber
  m->set_image(1, 1, e);                                // bot
  m->set_image(1, 2, e);                                // top
  m->set_image(1, 3, e);                                // diag
  m->set_image(2, 0, SimplicialSet::degeneracy(e, 1));  // T1
  m->set_image(2, 1, SimplicialSet::degeneracy(e, 0));  // T2
  m->seal();
  return m;
}

std::vector<std::vector<char>> all_flags(const SimplicialSet& s, char on) {
  std::vector<std::vector<char>> f(s.top_dim() + 1);
  for (int n = 0; n <= s.top_dim(); ++n)
    f[n].assign(s.count(n), on);
  return f;
}

void set_flag(std::vector<std::vector<char>>& f, const SimplicialSet& s,
              int dim, const std::string& label) {
  f[dim][*s.find(dim, label)] = 1;
}

Int one_value(const Ring& ring) { return ring.normalize(Int(1)); }

ChainModel build_square_identity(const Ring& ring) {
  Corpus c;
  auto* square = c.space(make_square());
  auto* base = c.space(make_line("base line", "a", "b", "ab"));
  auto* fib = c.map(square_projection(square, base, true, "square over base"));
  auto* id = c.map(identity_map(square));
  BundleEmbedding& e = c.model.embedding;
  e.name = "square-identity";
  e.ring = ring;
  e.total = square;
  e.fibration = fib;
  e.sub = square;
  e.sub_fibration = fib;
  e.tube.in_tube = all_flags(*square, 1);
  e.tube.in_rim = all_flags(*square, 0);
  e.tube.retraction = id;
  e.tube.thom.degree = 0;
  for (int i = 0; i < square->count(0); ++i)
    e.tube.thom.values[i] = one_value(ring);
  e.base_drop = 0;
  e.total_drop = 0;
  return std::move(c.model);
}

ChainModel build_square_slice(const Ring& ring) {
  Corpus c;
  auto* square = c.space(make_square());
  auto* base = c.space(make_line("base line", "a", "b", "ab"));
  auto* fiber = c.space(make_line("fiber line", "x", "y", "xy"));
  auto* point = c.space(make_point());
  auto* fib = c.map(square_projection(square, base, true, "square over base"));
  auto* ret =
      c.map(square_projection(square, fiber, false, "slice retraction"));
  auto* sub_fib = c.map(constant_map(fiber, point, "fiber over point"));
  BundleEmbedding& e = c.model.embedding;
  e.name = "square-slice";
  e.ring = ring;
  e.total = square;
  e.fibration = fib;
  e.sub = fiber;
  e.sub_fibration = sub_fib;
  e.tube.in_tube = all_flags(*square, 1);
  e.tube.in_rim = all_flags(*square, 0);
  set_flag(e.tube.in_rim, *square, 0, "bx");
  set_flag(e.tube.in_rim, *square, 0, "by");
  set_flag(e.tube.in_rim, *square, 1, "b.xy");
  e.tube.retraction = ret;
  e.tube.thom.degree = 1;
  e.tube.thom.values[*square->find(1, "ab.x")] = one_value(ring);
  e.tube.thom.values[*square->find(1, "ab.y")] = one_value(ring);
  e.tube.thom.values[*square->find(1, "ab.xy")] = one_value(ring);
  e.base_drop = 1;
  e.total_drop = 1;
  return std::move(c.model);
}

ChainModel build_square_section(const Ring& ring) {
  Corpus c;
  auto* square = c.space(make_square());
  auto* base = c.space(make_line("base line", "a", "b", "ab"));
  auto* fib = c.map(square_projection(square, base, true, "square over base"));
  auto* id = c.map(identity_map(base));
  BundleEmbedding& e = c.model.embedding;
  e.name = "square-section";
  e.ring = ring;
  e.total = square;
  e.fibration = fib;
  e.sub = base;
  e.sub_fibration = id;
  e.tube.in_tube = all_flags(*square, 1);
  e.tube.in_rim = all_flags(*square, 0);
  set_flag(e.tube.in_rim, *square, 0, "ay");
  set_flag(e.tube.in_rim, *square, 0, "by");
  set_flag(e.tube.in_rim, *square, 1, "ab.y");
  e.tube.retraction = fib;
  e.tube.thom.degree = 1;
  e.tube.thom.values[*square->find(1, "a.xy")] = one_value(ring);
  e.tube.thom.values[*square->find(1, "b.xy")] = one_value(ring);
  e.tube.thom.values[*square->find(1, "ab.xy")] = one_value(ring);
  e.base_drop = 0;
  e.total_drop = 1;
  return std::move(c.model);
}

ChainModel build_sphere_point(const Ring& ring) {
  Corpus c;
  auto* sphere = c.space(make_sphere());
  auto* point = c.space(make_point());
  auto* fib = c.map(constant_map(sphere, point, "sphere over point"));
  auto* id = c.map(identity_map(point));
  BundleEmbedding& e = c.model.embedding;
  e.name = "sphere-point";
  e.ring = ring;
  e.total = sphere;
  e.fibration = fib;
  e.sub = point;
  e.sub_fibration = id;
  e.tube.in_tube = all_flags(*sphere, 1);
  e.tube.in_tube[2][*sphere->find(2, "f123")] = 0;
  e.tube.in_rim = all_flags(*sphere, 0);
  for (const char* l : {"v1", "v2", "v3"}) set_flag(e.tube.in_rim, *sphere, 0, l);
  for (const char* l : {"e12", "e13", "e23"})
    set_flag(e.tube.in_rim, *sphere, 1, l);
  e.tube.retraction = fib;
  e.tube.thom.degree = 2;
  e.tube.thom.values[*sphere->find(2, "f013")] = one_value(ring);
  e.base_drop = 0;
  e.total_drop = 2;
  return std::move(c.model);
}

ChainModel build_mobius_core(const Ring& ring) {
  Corpus c;
  auto* mo = c.space(make_mobius());
  auto* circle = c.space(make_circle());
  auto* fib = c.map(mobius_projection(mo, circle));
  auto* id = c.map(identity_map(circle));
  BundleEmbedding& e = c.model.embedding;
  e.name = "mobius-core";
  e.ring = ring;
  e.total = mo;
  e.fibration = fib;
  e.sub = circle;
  e.sub_fibration = id;
  e.tube.in_tube = all_flags(*mo, 1);
  e.tube.in_rim = all_flags(*mo, 0);
  set_flag(e.tube.in_rim, *mo, 0, "v");
  set_flag(e.tube.in_rim, *mo, 0, "w");
  set_flag(e.tube.in_rim, *mo, 1, "bot");
  set_flag(e.tube.in_rim, *mo, 1, "top");
  e.tube.retraction = fib;
  e.tube.thom.degree = 1;
  e.tube.thom.values[*mo->find(1, "c")] = one_value(ring);
  e.tube.thom.values[*mo->find(1, "diag")] = one_value(ring);
  e.base_drop = 0;
  e.total_drop = 1;
  return std::move(c.model);
}

} // namespace

const std::vector<std::string>& chain_model_names() {
  static const std::vector<std::string> names = {
      "square-identity", "square-slice", "square-section", "sphere-point",
      "mobius-core"};
  return names;
}

ChainModel chain_model(const std::string& name, const Ring& ring) {
  ChainModel m;
  if (name == "square-identity") m = build_square_identity(ring);
  else if (name == "square-slice") m = build_square_slice(ring);
  else if (name == "square-section") m = build_square_section(ring);
  else if (name == "sphere-point") m = build_sphere_point(ring);
  else if (name == "mobius-core") m = build_mobius_core(ring);
  else {
    std::string known;
    for (const auto& n : chain_model_names())
      known += (known.empty() ? "" : ", ") + n;
    fail(ErrorClass::Validation, "UnknownModel",
         "no verifier model named " + name + "; known models: " + known);
  }
  validate_embedding(m.embedding);
  return m;
}

} // namespace stq
