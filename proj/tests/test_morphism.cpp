#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <utility>
#include <vector>

#include "stq/errors.hpp"
#include "stq/morphism.hpp"

using namespace stq;

namespace {

LoopAlgebraModel sphere_model(int m) {
  GradedAlgebra cup =
      free_graded_commutative({GenSpec{"x", m, true, Int(0), 0}}, m);
  auto inter = intersection_from_cup(cup, m, Ring::integers());
  inter.alg.rename("x", "pt");
  LoopAlgebraModel model;
  model.name = "S" + std::to_string(m);
  model.dim = m;
  model.intersection = inter.alg;
  model.fundamental = inter.unit_idx;
  model.point = inter.point_idx;
  if (m % 2 == 1) {
    model.loop_gens = {GenSpec{"u", m - 1, false, Int(0), 0}};
  } else {
    model.loop_gens = {GenSpec{"v", m - 1, true, Int(0), 0},
                       GenSpec{"b", 2 * m - 2, false, Int(0), 0}};
  }
  model.validate();
  return model;
}

// Pinned transgression of the path stack over the 3-sphere: the diagonal
// class is closed, the antidiagonal transgresses onto twice the bottom cell.
void pin_path_stack(SpectralSequence& ss) {
  ss.add_pin(DifferentialPin{3, {0, 0}, {Int(1), Int(1)}, {Int(0)}});
  ss.add_pin(DifferentialPin{3, {0, 0}, {Int(1), Int(-1)}, {Int(-2)}});
}

PageClass cls(int r, Bidegree at, IntVec coords) {
  return PageClass{r, at, ScaledVec{std::move(coords), Int(1)}};
}

bool is_identity(const ScaledMatrix& m, int n) {
  if (m.den != 1 || m.num.rows() != n || m.num.cols() != n) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m.num.at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

// Position of base elt bi tensor the fiber monomial with this label among
// the second-page generators of the bidegree.
int gen_pos(const SpectralSequence& ss, Bidegree at, int bi,
            const std::string& mono) {
  auto fi = ss.fiber().find(mono);
  REQUIRE(fi.has_value());
  const auto& pairs = ss.e2_mono_pairs(at);
  for (size_t k = 0; k < pairs.size(); ++k)
    if (pairs[k] == std::make_pair(bi, *fi)) return static_cast<int>(k);
  REQUIRE(false);
  return -1;
}

} // namespace

// ---- identity morphisms ----

TEST_CASE("identity matrices with zero shift act as the identity on every "
          "page of a run with nonzero differentials") {
  LoopAlgebraModel s3 = sphere_model(3);
  SpectralSequence ss(path_fibration_spec(s3), Ring::integers(), 12);
  pin_path_stack(ss);
  ss.run();
  REQUIRE(ss.differential_nonzero(3));

  MorphismOptions opts;
  opts.multiplicative = true;
  opts.name = "identity";
  SSMorphism id = shriek_morphism(ss, ss, IntMatrix::identity(4),
                                  IntMatrix::identity(1), {0, 0}, opts);

  CHECK(id.last_page == ss.last_page());
  for (int r = 2; r <= ss.last_page(); ++r) {
    for (const auto& [at, entry] : ss.page(r).entries) {
      if (entry.trivial()) continue;
      const ScaledMatrix* m = id.map_at(r, at);
      REQUIRE(m != nullptr);
      CHECK(is_identity(*m, entry.rank()));
    }
  }

  PageClass abar = cls(7, {0, 0}, {Int(1)});
  PageClass out = id.apply(abar);
  CHECK(out.at == Bidegree{0, 0});
  CHECK(out.coords.num == IntVec{Int(1)});
}

TEST_CASE("identity morphism carries torsion entries unchanged") {
  LoopAlgebraModel s2 = sphere_model(2);
  SpectralSequence ss(loop_e2_product(s2), Ring::integers(), 10);
  // transgression of the odd fiber class onto twice the bottom cell
  ss.add_pin(DifferentialPin{2, {0, 1}, {Int(1)}, {Int(2)}});
  ss.run();

  const PageEntry* tor = ss.entry(3, {-2, 2});
  REQUIRE(tor != nullptr);
  REQUIRE(tor->rank() == 1);
  REQUIRE(tor->gens[0].order == 2);

  SSMorphism id = shriek_morphism(ss, ss, IntMatrix::identity(2),
                                  IntMatrix::identity(2), {0, 0}, {});
  for (int r = 2; r <= ss.last_page(); ++r) {
    for (const auto& [at, entry] : ss.page(r).entries) {
      if (entry.trivial()) continue;
      const ScaledMatrix* m = id.map_at(r, at);
      REQUIRE(m != nullptr);
      CHECK(is_identity(*m, entry.rank()));
    }
  }

  PageClass t = cls(3, {-2, 2}, {Int(1)});
  CHECK(id.apply(t).coords.num == IntVec{Int(1)});
}

// ---- diagonal comparison of path and loop stacks ----

TEST_CASE("diagonal comparison of the 3-sphere hits the frozen images") {
  LoopAlgebraModel s3 = sphere_model(3);
  SpectralSequence paths(path_fibration_spec(s3), Ring::integers(), 12);
  pin_path_stack(paths);
  paths.run();
  SpectralSequence loops(loop_e2_product(s3), Ring::integers(), 12);
  loops.run();

  SSMorphism dm = diagonal_comparison(s3, paths, loops);
  CHECK(dm.shift == Bidegree{-3, 0});
  CHECK(dm.k_base == 3);
  CHECK_FALSE(dm.multiplicative);

  // hand values from the intersection table with the codimension sign:
  // S3x1 -> -pt, 1xS3 -> +pt, S3xS3 -> -[S3], 1x1 -> 0
  {
    const ScaledMatrix* m = dm.map_at(2, {0, 0});
    REQUIRE(m != nullptr);
    CHECK(m->den == 1);
    CHECK(m->num == IntMatrix({{-1, 1}}));
  }
  {
    const ScaledMatrix* m = dm.map_at(2, {3, 4});
    REQUIRE(m != nullptr);
    CHECK(m->num == IntMatrix({{-1}}));
  }
  CHECK(dm.map_at(2, {-3, 0}) == nullptr); // lands below the loop window

  PageClass h1 = cls(2, {0, 0}, {Int(1), Int(0)});
  PageClass h2 = cls(2, {0, 0}, {Int(0), Int(1)});
  PageClass c = cls(2, {3, 0}, {Int(1)});
  CHECK(dm.apply(h1).at == Bidegree{-3, 0});
  CHECK(dm.apply(h1).coords.num == IntVec{Int(-1)});
  CHECK(dm.apply(h2).coords.num == IntVec{Int(1)});
  CHECK(dm.apply(c).at == Bidegree{0, 0});
  CHECK(dm.apply(c).coords.num == IntVec{Int(-1)});

  // the surviving diagonal class maps to -pt + pt = 0 on the stable page
  PageClass abar = cls(7, {0, 0}, {Int(1)});
  PageClass stable = dm.apply(abar);
  CHECK(stable.at == Bidegree{-3, 0});
  CHECK(stable.coords.num == IntVec{Int(0)});
}

TEST_CASE("dropping the codimension sign breaks the chain map check") {
  LoopAlgebraModel s3 = sphere_model(3);
  SpectralSequence paths(path_fibration_spec(s3), Ring::integers(), 12);
  pin_path_stack(paths);
  paths.run();
  SpectralSequence loops(loop_e2_product(s3), Ring::integers(), 12);
  loops.run();

  // same matrix as the diagonal comparison but with every sign positive
  DiamondAlgebra dia = build_diamond_table(s3);
  const GradedAlgebra& ib = s3.intersection;
  IntMatrix base(ib.size(), static_cast<int>(dia.basis.size()));
  for (size_t k = 0; k < dia.basis.size(); ++k) {
    auto [l, r] = dia.basis[k];
    if (ib.elt(l).deg + ib.elt(r).deg < -3) continue;
    for (const auto& [t, co] : ib.mult(l, r))
      base.at(t, static_cast<int>(k)) = co;
  }
  MorphismOptions opts;
  opts.k_base = 3;
  opts.name = "unsigned diagonal";
  try {
    shriek_morphism(paths, loops, base, IntMatrix::identity(1), {-3, 0},
                    opts);
    FAIL("the unsigned map must not pass the commutation check");
  } catch (const Error& err) {
    CHECK(err.kind() == "NotChainMap");
    CHECK(std::string(err.what()).find("(3, 0)") != std::string::npos);
  }
}

// ---- construction guards ----

TEST_CASE("a multiplicative morphism must preserve the bidegree") {
  LoopAlgebraModel s3 = sphere_model(3);
  SpectralSequence paths(path_fibration_spec(s3), Ring::integers(), 8);
  pin_path_stack(paths);
  paths.run();
  SpectralSequence loops(loop_e2_product(s3), Ring::integers(), 8);
  loops.run();

  MorphismOptions opts;
  opts.k_base = 3;
  opts.multiplicative = true;
  CHECK_THROWS_WITH_AS(
      shriek_morphism(paths, loops, IntMatrix(2, 4), IntMatrix::identity(1),
                      {-3, 0}, opts),
      doctest::Contains("NotMultiplicative"), Error);
}

TEST_CASE("the fiber shift is pinned to zero") {
  LoopAlgebraModel s3 = sphere_model(3);
  SpectralSequence loops(loop_e2_product(s3), Ring::integers(), 8);
  loops.run();
  CHECK_THROWS_WITH_AS(
      shriek_morphism(loops, loops, IntMatrix::identity(2),
                      IntMatrix::identity(1), {0, 1}, {}),
      doctest::Contains("FiberShift"), Error);
}

TEST_CASE("base images must respect the shifted degree") {
  LoopAlgebraModel s3 = sphere_model(3);
  SpectralSequence loops(loop_e2_product(s3), Ring::integers(), 8);
  loops.run();
  SubmanifoldSpec pt;
  pt.name = "pt";
  pt.dim = 0;
  int u = pt.intersection.add_elt("1", 0);
  pt.intersection.set_unit(u);
  pt.intersection.validate(true);
  RestrictedSpec rs = restricted_product_spec(s3, [&] {
    SubmanifoldSpec s = pt;
    s.shriek = IntMatrix(1, 2);
    s.shriek.at(0, 0) = 1;
    return s;
  }());
  SpectralSequence target(rs.spec, Ring::integers(), 8);
  target.run();

  IntMatrix bad(1, 2);
  bad.at(0, 0) = 1;
  bad.at(0, 1) = 1; // the point class sits three degrees below
  CHECK_THROWS_WITH_AS(shriek_morphism(loops, target, bad,
                                       IntMatrix::identity(1), {0, 0}, {}),
                       doctest::Contains("DegreeMismatch"), Error);
}

TEST_CASE("a torsion class cannot land on a free class") {
  GradedAlgebra sb;
  sb.add_elt("e", 0);
  sb.add_elt("t", 0, Int(2));
  sb.set_unit(0);
  sb.validate(true);
  FibrationSpec src;
  src.name = "torsion base";
  src.base = sb;
  src.fiber_gens = {GenSpec{"u", 2, false, Int(0), 0}};

  GradedAlgebra tb;
  tb.add_elt("e", 0);
  tb.set_unit(0);
  tb.validate(true);
  FibrationSpec dst;
  dst.name = "free base";
  dst.base = tb;
  dst.fiber_gens = src.fiber_gens;

  SpectralSequence sss(src, Ring::integers(), 6);
  sss.run();
  SpectralSequence tss(dst, Ring::integers(), 6);
  tss.run();

  IntMatrix base(1, 2);
  base.at(0, 0) = 1;
  base.at(0, 1) = 1; // sends the order two class onto the free one
  CHECK_THROWS_WITH_AS(shriek_morphism(sss, tss, base,
                                       IntMatrix::identity(1), {0, 0}, {}),
                       doctest::Contains("TorsionMismatch"), Error);
}

// ---- restriction to a basepoint ----

TEST_CASE("restricting 3-sphere loops to loops at a point is an algebra "
          "map") {
  LoopAlgebraModel s3 = sphere_model(3);
  SpectralSequence loops(loop_e2_product(s3), Ring::integers(), 10);
  loops.run();

  SubmanifoldSpec pt;
  pt.name = "pt";
  pt.dim = 0;
  int u = pt.intersection.add_elt("1", 0);
  pt.intersection.set_unit(u);
  pt.intersection.validate(true);
  pt.shriek = IntMatrix(1, 2);
  pt.shriek.at(0, 0) = 1; // [S3] -> [pt], the point class dies
  RestrictedSpec rs = restricted_product_spec(s3, pt);
  SpectralSequence based(rs.spec, Ring::integers(), 10);
  based.run();

  MorphismOptions opts;
  opts.k_base = 3;
  opts.multiplicative = true;
  opts.name = "basepoint restriction";
  SSMorphism m = shriek_morphism(loops, based, pt.shriek,
                                 IntMatrix::identity(1), {0, 0}, opts);

  for (int k = 0; k <= 4; ++k) {
    const ScaledMatrix* top = m.map_at(2, {0, 2 * k});
    REQUIRE(top != nullptr);
    CHECK(top->num == IntMatrix({{1}}));
    CHECK(m.map_at(2, {-3, 2 * k}) == nullptr);
  }
  PageClass fund_u = cls(2, {0, 2}, {Int(1)});
  CHECK(m.apply(fund_u).coords.num == IntVec{Int(1)});
  PageClass pt_u = cls(2, {-3, 2}, {Int(1)});
  CHECK(m.apply(pt_u).coords.num.empty());
}

// ---- projection through the restricted stack of a product ----

TEST_CASE("projection through the restricted product stack matches the "
          "one-step projection") {
  LoopAlgebraModel s3 = sphere_model(3);
  ProductLoopModel pm = product_loop_model(s3, s3);
  CHECK(pm.model.dim == 6);
  CHECK(pm.model.intersection.size() == 4);
  CHECK(pm.model.intersection.elt(1).label == "1.pt");
  REQUIRE(pm.model.loop_gens.size() == 2);
  CHECK(pm.model.loop_gens[0].label == "u");
  CHECK(pm.model.loop_gens[1].label == "u'");
  CHECK(pm.fiber_from == std::vector<int>{0, 1});

  SpectralSequence product_ss(loop_e2_product(pm.model), Ring::integers(),
                              10);
  product_ss.run();
  SubmanifoldSpec sub = left_factor_embedding(pm, s3);
  CHECK(sub.shriek == IntMatrix({{1, 0, 0, 0}, {0, 0, 1, 0}}));
  RestrictedSpec rs = restricted_product_spec(pm.model, sub);
  SpectralSequence restricted_ss(rs.spec, Ring::integers(), 10);
  restricted_ss.run();
  SpectralSequence loop_ss(loop_e2_product(s3), Ring::integers(), 10);
  loop_ss.run();

  ProjectionComparison pc =
      projection_comparison(pm, s3, product_ss, restricted_ss, loop_ss);
  CHECK(pc.to_restricted.multiplicative);
  CHECK(pc.to_loops.multiplicative);
  CHECK(pc.composite.multiplicative);

  // the two routes agree matrix by matrix on every page
  for (int r = 2; r <= pc.direct.last_page; ++r) {
    auto ci = pc.composite.maps.find(r);
    auto di = pc.direct.maps.find(r);
    bool chas = ci != pc.composite.maps.end();
    bool dhas = di != pc.direct.maps.end();
    REQUIRE(chas == dhas);
    if (!chas) continue;
    REQUIRE(ci->second.size() == di->second.size());
    for (const auto& [at, dm] : di->second) {
      auto it = ci->second.find(at);
      REQUIRE(it != ci->second.end());
      CHECK(it->second.den == dm.den);
      CHECK(it->second.num == dm.num);
    }
  }

  // basis checks: classes over the left fundamental survive with their
  // left fiber part, everything else projects to zero
  int top = gen_pos(product_ss, {0, 2}, 0, "u");
  int topp = gen_pos(product_ss, {0, 2}, 0, "u'");
  IntVec e_top(2, Int(0)), e_topp(2, Int(0));
  e_top[top] = 1;
  e_topp[topp] = 1;
  CHECK(pc.direct.apply(cls(2, {0, 2}, e_top)).coords.num == IntVec{Int(1)});
  CHECK(pc.composite.apply(cls(2, {0, 2}, e_top)).coords.num ==
        IntVec{Int(1)});
  CHECK(pc.direct.apply(cls(2, {0, 2}, e_topp)).coords.num ==
        IntVec{Int(0)});

  // at column -3 the four generators split: pt.1 x u is kept, the rest die
  int keep = gen_pos(product_ss, {-3, 2}, 2, "u");
  IntVec e_keep(4, Int(0));
  e_keep[keep] = 1;
  CHECK(pc.direct.apply(cls(2, {-3, 2}, e_keep)).coords.num ==
        IntVec{Int(1)});
  CHECK(pc.composite.apply(cls(2, {-3, 2}, e_keep)).coords.num ==
        IntVec{Int(1)});
  int drop = gen_pos(product_ss, {-3, 2}, 1, "u");
  IntVec e_drop(4, Int(0));
  e_drop[drop] = 1;
  CHECK(pc.direct.apply(cls(2, {-3, 2}, e_drop)).coords.num ==
        IntVec{Int(0)});
}

TEST_CASE("composition requires a shared middle run") {
  LoopAlgebraModel s3 = sphere_model(3);
  ProductLoopModel pm = product_loop_model(s3, s3);
  SpectralSequence product_ss(loop_e2_product(pm.model), Ring::integers(), 8);
  product_ss.run();
  SubmanifoldSpec sub = left_factor_embedding(pm, s3);
  RestrictedSpec rs = restricted_product_spec(pm.model, sub);
  SpectralSequence restricted_ss(rs.spec, Ring::integers(), 8);
  restricted_ss.run();
  SpectralSequence loop_ss(loop_e2_product(s3), Ring::integers(), 8);
  loop_ss.run();
  ProjectionComparison pc =
      projection_comparison(pm, s3, product_ss, restricted_ss, loop_ss);

  CHECK_THROWS_WITH_AS(compose_morphisms(pc.to_loops, pc.direct),
                       doctest::Contains("do not compose"), Error);
}
