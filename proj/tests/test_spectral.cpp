#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stq/errors.hpp"
#include "stq/spectral.hpp"

using namespace stq;

namespace {

// Loop-space model of an odd sphere: base is the intersection table of the
// sphere, fiber is a polynomial class one degree below the top.
FibrationSpec loop_sphere_spec(int m) {
  GradedAlgebra cup = free_graded_commutative(
      {GenSpec{"x", m, true, Int(0), 0}}, m);
  auto inter = intersection_from_cup(cup, m, Ring::integers());
  inter.alg.rename("x", "pt");
  FibrationSpec spec;
  spec.name = "loops";
  spec.base = inter.alg;
  spec.fiber_gens = {GenSpec{"u", m - 1, false, Int(0), 0}};
  return spec;
}

// Free path space of the 3-sphere fibered over the product of two copies,
// base carrying the diamond table in the shifted grading.
FibrationSpec path_diamond_spec() {
  GradedAlgebra base;
  int e = base.add_elt("1x1", -3);
  int h1 = base.add_elt("S3x1", 0);
  int h2 = base.add_elt("1xS3", 0);
  int c = base.add_elt("S3xS3", 3);
  base.set_product(e, h1, {{e, Int(1)}});
  base.set_product(e, c, {{h2, Int(1)}});
  base.set_product(h1, h1, {{h1, Int(1)}});
  base.set_product(h1, c, {{c, Int(1)}});
  base.set_product(h2, e, {{e, Int(1)}});
  base.set_product(h2, h2, {{h2, Int(1)}});
  base.set_product(c, e, {{h1, Int(1)}});
  base.set_product(c, h2, {{c, Int(1)}});
  base.validate(true);

  FibrationSpec spec;
  spec.name = "paths";
  spec.base = base;
  spec.fiber_gens = {GenSpec{"u", 2, false, Int(0), 0}};
  return spec;
}

DifferentialPin pin_d3_sum_zero() {
  // d3(S3x1 + 1xS3) = 0
  return DifferentialPin{3, {0, 0}, {Int(1), Int(1)}, {Int(0)}};
}

DifferentialPin pin_d3_difference(const Int& coeff) {
  // d3(S3x1 - 1xS3) = coeff * (1x1)*u
  return DifferentialPin{3, {0, 0}, {Int(1), Int(-1)}, {coeff}};
}

PageClass cls(int r, Bidegree at, IntVec coords) {
  return PageClass{r, at, ScaledVec{std::move(coords), Int(1)}};
}

} // namespace

// ---- collapsing loop-space run ----

TEST_CASE("odd sphere loop model collapses immediately") {
  SpectralSequence ss(loop_sphere_spec(3), Ring::integers(), 12);
  ss.run();

  CHECK(ss.min_column() == -3);
  CHECK(ss.max_column() == 0);
  CHECK(ss.last_page() == 4);
  CHECK(ss.collapsed_at() == 2);
  CHECK_FALSE(ss.differential_nonzero(2));
  CHECK_FALSE(ss.differential_nonzero(3));
  CHECK_FALSE(ss.column_receives(-3));

  // both columns carry one free class in each even fiber degree
  for (int k = 0; k <= 5; ++k) {
    const PageEntry* top = ss.entry(4, {0, 2 * k});
    REQUIRE(top != nullptr);
    CHECK(top->group == FgAbelianGroup(1, {}));
    const PageEntry* bot = ss.entry(4, {-3, 2 * k});
    REQUIRE(bot != nullptr);
    CHECK(bot->group == FgAbelianGroup(1, {}));
    CHECK(ss.survives_fully({0, 2 * k}));
    CHECK(ss.survives_fully({-3, 2 * k}));
  }
  CHECK(ss.e2_labels({0, 4}) == std::vector<std::string>{"u^2"});
  CHECK(ss.e2_labels({-3, 4}) == std::vector<std::string>{"pt*u^2"});

  // no total degree carries two stable layers: parities disagree
  for (int t = -3; t <= 12; ++t) CHECK_FALSE(ss.extension_ambiguous(t));

  // pt * u^k towers multiply as expected
  PageClass pt = cls(4, {-3, 0}, {Int(1)});
  PageClass u = cls(4, {0, 2}, {Int(1)});
  PageClass ptu = ss.multiply(pt, u);
  CHECK(ptu.at == Bidegree{-3, 2});
  CHECK(ss.class_to_string(ptu) == "[pt*u]");
  PageClass ptu2 = ss.multiply(ptu, u);
  CHECK(ss.class_to_string(ptu2) == "[pt*u^2]");
  // two point classes intersect in nothing
  PageClass ptpt = ss.multiply(pt, pt);
  CHECK(ss.class_to_string(ptpt) == "0");
}

TEST_CASE("stable page accessor clamps beyond the bidegree bound") {
  SpectralSequence ss(loop_sphere_spec(3), Ring::integers(), 8);
  ss.run();
  CHECK(&ss.page(99) == &ss.einfty());
  CHECK(&ss.page(ss.last_page()) == &ss.einfty());
  CHECK(ss.last_page() == 4); // width 3 certifies d_r = 0 for r > 3
}

TEST_CASE("multiplying out of the computed window is refused") {
  SpectralSequence ss(loop_sphere_spec(3), Ring::integers(), 10);
  ss.run();
  // internal window reaches total 15; u^7 at (0, 14) is the last tower step
  REQUIRE(ss.entry(4, {0, 14}) != nullptr);
  PageClass top = cls(4, {0, 14}, {Int(1)});
  PageClass u = cls(4, {0, 2}, {Int(1)});
  CHECK_THROWS_WITH_AS(ss.multiply(top, u),
                       doctest::Contains("DegreeOverflow"), Error);
}

// ---- pinned run on the free path space ----

TEST_CASE("path space run with pinned transgression") {
  FibrationSpec spec = path_diamond_spec();
  SpectralSequence ss(spec, Ring::integers(), 12);
  ss.add_pin(pin_d3_sum_zero());
  ss.add_pin(pin_d3_difference(Int(-2)));
  ss.run();

  CHECK(ss.last_page() == 7); // width 6
  CHECK(ss.collapsed_at() == 4);
  CHECK_FALSE(ss.differential_nonzero(2));
  CHECK(ss.differential_nonzero(3));
  CHECK_FALSE(ss.differential_nonzero(4));
  CHECK(ss.column_receives(-3));
  CHECK(ss.column_receives(0));
  CHECK_FALSE(ss.column_receives(3));

  // frozen third-page differentials
  const Page& p3 = ss.page(3);
  {
    auto it = p3.diffs.find({0, 0});
    REQUIRE(it != p3.diffs.end());
    CHECK(it->second.den == 1);
    CHECK(it->second.num == IntMatrix({{-1, 1}}));
  }
  for (int k = 0; k <= 2; ++k) {
    auto it = p3.diffs.find({0, 2 * k});
    REQUIRE(it != p3.diffs.end());
    CHECK(it->second.num == IntMatrix({{-1, 1}}));
    auto jt = p3.diffs.find({3, 2 * k});
    REQUIRE(jt != p3.diffs.end());
    CHECK(jt->second.num == IntMatrix({{-1}, {-1}}));
  }

  // the whole tower cancels except one class in each of two total degrees
  const Page& stable = ss.einfty();
  int survivors = 0;
  for (const auto& [at, entry] : stable.entries) {
    if (at.first + at.second > ss.max_total()) continue;
    if (!entry.trivial()) ++survivors;
  }
  CHECK(survivors == 2);

  const PageEntry* unit_entry = ss.entry(7, {0, 0});
  REQUIRE(unit_entry != nullptr);
  REQUIRE(unit_entry->rank() == 1);
  CHECK(unit_entry->gens[0].order == 0);
  CHECK(unit_entry->gens[0].label == "S3x1 + 1xS3");
  CHECK(unit_entry->gens[0].e2_repr.num == IntVec{Int(1), Int(1)});

  const PageEntry* e_entry = ss.entry(7, {-3, 0});
  REQUIRE(e_entry != nullptr);
  CHECK(e_entry->rank() == 1);
  CHECK(e_entry->gens[0].label == "1x1");

  CHECK(ss.survives_fully({-3, 0}));
  CHECK_FALSE(ss.survives_fully({0, 0}));

  auto layers0 = ss.stable_layers(0);
  REQUIRE(layers0.size() == 1);
  CHECK(layers0[0].first == Bidegree{0, 0});
  auto layersm3 = ss.stable_layers(-3);
  REQUIRE(layersm3.size() == 1);
  CHECK(layersm3[0].first == Bidegree{-3, 0});
  CHECK_FALSE(ss.extension_ambiguous(0));

  // diamond products of the two survivors
  PageClass abar = cls(7, {0, 0}, {Int(1)});
  PageClass ebar = cls(7, {-3, 0}, {Int(1)});
  CHECK(ss.class_to_string(ss.multiply(abar, abar)) == "[S3x1 + 1xS3]");
  CHECK(ss.class_to_string(ss.multiply(ebar, abar)) == "[1x1]");
  CHECK(ss.class_to_string(ss.multiply(abar, ebar)) == "[1x1]");
  CHECK(ss.class_to_string(ss.multiply(ebar, ebar)) == "0");

  // a tower class that dies: the first polynomial generator times itself
  auto dead = ss.reduce_to_page(7, {0, 4}, ScaledVec{{Int(1), Int(0)}, 1});
  CHECK_FALSE(dead.has_value());
  // the diagonal multiple is a boundary, hence the zero class, not dead
  auto bdry = ss.reduce_to_page(7, {0, 4}, ScaledVec{{Int(1), Int(1)}, 1});
  REQUIRE(bdry.has_value());
  CHECK(bdry->num.empty());
}

TEST_CASE("path space run over a prime field matches the integral ranks") {
  FibrationSpec spec = path_diamond_spec();
  SpectralSequence ss(spec, Ring::prime_field(Int(5)), 12);
  ss.add_pin(pin_d3_sum_zero());
  ss.add_pin(pin_d3_difference(Int(-2)));
  ss.run();

  CHECK(ss.collapsed_at() == 4);
  const PageEntry* unit_entry = ss.entry(7, {0, 0});
  REQUIRE(unit_entry != nullptr);
  CHECK(unit_entry->group.free_rank() == 1);
  const PageEntry* e_entry = ss.entry(7, {-3, 0});
  REQUIRE(e_entry != nullptr);
  CHECK(e_entry->group.free_rank() == 1);
  for (int k = 1; k <= 3; ++k) {
    const PageEntry* cut = ss.entry(7, {-3, 2 * k});
    REQUIRE(cut != nullptr);
    CHECK(cut->trivial());
  }
}

TEST_CASE("halved pin is inconsistent over the integers, fine rationally") {
  // Leibniz forces d3(S3x1) + d3(1xS3) = 0, so the difference pin demands
  // 2 d3(S3x1) = -(1x1)*u, unsolvable in integer coordinates.
  {
    FibrationSpec spec = path_diamond_spec();
    SpectralSequence ss(spec, Ring::integers(), 10);
    ss.add_pin(pin_d3_difference(Int(-1)));
    CHECK_THROWS_WITH_AS(ss.run(), doctest::Contains("LeibnizInconsistent"),
                         Error);
  }
  {
    FibrationSpec spec = path_diamond_spec();
    SpectralSequence ss(spec, Ring::rationals(), 10);
    ss.add_pin(pin_d3_difference(Int(-1)));
    ss.run();
    CHECK(ss.collapsed_at() == 4);
    auto it = ss.page(3).diffs.find({0, 0});
    REQUIRE(it != ss.page(3).diffs.end());
    CHECK(it->second.den == 2);
    CHECK(it->second.num == IntMatrix({{-1, 1}}));
    // same stable picture as the integral run with the doubled pin
    CHECK(ss.stable_layers(0).size() == 1);
    CHECK(ss.stable_layers(-3).size() == 1);
    CHECK(ss.stable_layers(2).empty());
  }
}

// ---- default policies ----

TEST_CASE("undetermined policy refuses to guess a transgression") {
  SpectralSequence ss(loop_sphere_spec(3), Ring::integers(), 8);
  ss.set_default_policy(DefaultPolicy::Undetermined);
  CHECK_THROWS_WITH_AS(ss.run(),
                       doctest::Contains("UndeterminedDifferential"), Error);
}

TEST_CASE("pins that contradict the Leibniz rule directly are refused") {
  // Leibniz forces the two transgressions to sum to zero; pinning them to
  // values that do not is caught in the first solve.
  FibrationSpec spec = path_diamond_spec();
  SpectralSequence ss(spec, Ring::integers(), 10);
  ss.add_pin(DifferentialPin{3, {0, 0}, {Int(1), Int(0)}, {Int(-1)}});
  ss.add_pin(DifferentialPin{3, {0, 0}, {Int(0), Int(1)}, {Int(2)}});
  CHECK_THROWS_WITH_AS(ss.run(), doctest::Contains("LeibnizInconsistent"),
                       Error);
}

// A base with no products at all: Leibniz imposes nothing, so pins are the
// only source of constraints.
FibrationSpec silent_base_spec(std::vector<GenSpec> fiber) {
  GradedAlgebra base;
  base.add_elt("A", 0);
  base.add_elt("B", -2);
  FibrationSpec spec;
  spec.name = "silent";
  spec.base = base;
  spec.fiber_gens = std::move(fiber);
  return spec;
}

TEST_CASE("zero default conflicting with a mixed pin reports the conflict") {
  // d2(t - s) = -B*(t*s) leaves each summand free; defaulting both to zero
  // contradicts the pinned difference.
  FibrationSpec spec = silent_base_spec({GenSpec{"t", 1, true, Int(0), 0},
                                         GenSpec{"s", 1, true, Int(0), 0}});
  SpectralSequence ss(spec, Ring::integers(), 8);
  ss.add_pin(DifferentialPin{2, {0, 1}, {Int(1), Int(-1)}, {Int(-1)}});
  CHECK_THROWS_WITH_AS(ss.run(), doctest::Contains("zero default"), Error);
}

TEST_CASE("undetermined policy surfaces the same freedom as an error") {
  FibrationSpec spec = silent_base_spec({GenSpec{"t", 1, true, Int(0), 0},
                                         GenSpec{"s", 1, true, Int(0), 0}});
  SpectralSequence ss(spec, Ring::integers(), 8);
  ss.set_default_policy(DefaultPolicy::Undetermined);
  ss.add_pin(DifferentialPin{2, {0, 1}, {Int(1), Int(-1)}, {Int(-1)}});
  CHECK_THROWS_WITH_AS(ss.run(),
                       doctest::Contains("UndeterminedDifferential"), Error);
}

TEST_CASE("pin past the bidegree bound cannot name a nonzero target") {
  SpectralSequence ss(loop_sphere_spec(3), Ring::integers(), 8);
  // d9 maps every entry outside the base window, so its target rank is zero
  CHECK_THROWS_WITH_AS(
      ss.add_pin(DifferentialPin{9, {0, 0}, {Int(1)}, {Int(1)}}),
      doctest::Contains("BidegreeMismatch"), Error);
  // the all-zero pin is vacuously satisfied
  ss.add_pin(DifferentialPin{9, {0, 0}, {Int(1)}, {}});
  ss.run();
  CHECK(ss.collapsed_at() == 2);
}

// ---- square check ----

TEST_CASE("pins breaking the square law are caught after the solve") {
  // Three silent columns: nothing ties the two pinned differentials
  // together, but their composite is 1*C*(t^3), which is not zero.
  GradedAlgebra base;
  base.add_elt("A", 0);
  base.add_elt("B", -2);
  base.add_elt("C", -4);
  FibrationSpec spec;
  spec.name = "square";
  spec.base = base;
  spec.fiber_gens = {GenSpec{"t", 1, false, Int(0), 0}};
  SpectralSequence ss(spec, Ring::integers(), 8);
  // d2(A*t) = B*t^2 and d2(B*t^2) = C*t^3
  ss.add_pin(DifferentialPin{2, {0, 1}, {Int(1)}, {Int(1)}});
  ss.add_pin(DifferentialPin{2, {-2, 2}, {Int(1)}, {Int(1)}});
  CHECK_THROWS_WITH_AS(ss.run(), doctest::Contains("DSquareNonzero"), Error);
}

// ---- torsion interaction between base and fiber ----

TEST_CASE("base and fiber torsion pair up into reported gaps") {
  GradedAlgebra base;
  base.add_elt("1", 0);
  base.add_elt("s", -2, Int(2));
  base.set_unit(0);
  FibrationSpec spec;
  spec.name = "torsion";
  spec.base = base;
  spec.fiber_gens = {GenSpec{"b", 4, false, Int(2), 0}};

  CHECK_THROWS_WITH_AS(
      SpectralSequence(spec, Ring::integers(), 10),
      doctest::Contains("TorsionKunneth"), Error);

  spec.allow_tor_gaps = true;
  SpectralSequence ss(spec, Ring::integers(), 10);
  ss.run();
  REQUIRE_FALSE(ss.tor_gaps().empty());
  CHECK(ss.tor_gaps()[0].at == Bidegree{-1, 4});
  CHECK(ss.tor_gaps()[0].order == 2);
  // the recorded entry itself carries the tensor part
  const PageEntry* mixed = ss.entry(2, {-2, 4});
  REQUIRE(mixed != nullptr);
  REQUIRE(mixed->rank() == 1);
  CHECK(mixed->gens[0].order == 2);
}

TEST_CASE("nonintegral rings reject torsion tables") {
  GradedAlgebra base;
  base.add_elt("1", 0);
  base.add_elt("s", -2, Int(2));
  base.set_unit(0);
  FibrationSpec spec;
  spec.name = "torsion";
  spec.base = base;
  spec.fiber_gens = {GenSpec{"u", 2, false, Int(0), 0}};
  CHECK_THROWS_WITH_AS(SpectralSequence(spec, Ring::rationals(), 6),
                       doctest::Contains("ValidationError"), Error);
}

// ---- product base with two fiber generators ----

TEST_CASE("product of spheres keeps both towers and stacks layers") {
  std::vector<GenSpec> gens{GenSpec{"x", 3, true, Int(0), 0},
                            GenSpec{"y", 3, true, Int(0), 0}};
  GradedAlgebra cup = free_graded_commutative(gens, 6);
  auto inter = intersection_from_cup(cup, 6, Ring::integers());
  FibrationSpec spec;
  spec.name = "product";
  spec.base = inter.alg;
  spec.fiber_gens = {GenSpec{"u", 2, false, Int(0), 0},
                     GenSpec{"v", 2, false, Int(0), 0}};
  SpectralSequence ss(spec, Ring::integers(), 8);
  ss.run();

  CHECK(ss.collapsed_at() == 2);
  // total degree zero: the unit column and the point column both contribute
  CHECK(ss.extension_ambiguous(0));
  auto layers = ss.stable_layers(0);
  REQUIRE(layers.size() == 2);
  CHECK(layers[0].first == Bidegree{-6, 6});
  CHECK(layers[0].second == FgAbelianGroup(4, {})); // cubics in u, v
  CHECK(layers[1].first == Bidegree{0, 0});
  CHECK(layers[1].second == FgAbelianGroup(1, {}));

  // anticommuting point factors: y * x = -(x*y)
  PageClass xc = cls(2, {-3, 0}, {Int(1), Int(0)});
  PageClass yc = cls(2, {-3, 0}, {Int(0), Int(1)});
  PageClass xy = ss.multiply(xc, yc);
  PageClass yx = ss.multiply(yc, xc);
  CHECK(ss.class_to_string(xy) == "[x*y]");
  CHECK(ss.class_to_string(yx) == "-[x*y]");
}

// ---- lineage bookkeeping ----

TEST_CASE("second page reduction distinguishes dead from zero") {
  FibrationSpec spec = path_diamond_spec();
  SpectralSequence ss(spec, Ring::integers(), 10);
  ss.add_pin(pin_d3_sum_zero());
  ss.add_pin(pin_d3_difference(Int(-2)));
  ss.run();

  // on page 3 nothing has died yet
  auto on3 = ss.reduce_to_page(3, {0, 2}, ScaledVec{{Int(1), Int(0)}, 1});
  REQUIRE(on3.has_value());
  CHECK(on3->num == IntVec{Int(1), Int(0)});
  // on page 4 that class is gone
  CHECK_FALSE(ss.reduce_to_page(4, {0, 2}, ScaledVec{{Int(1), Int(0)}, 1})
                  .has_value());
  // its symmetrization is hit by the column to the right: zero, not dead
  auto sym = ss.reduce_to_page(4, {0, 2}, ScaledVec{{Int(1), Int(1)}, 1});
  REQUIRE(sym.has_value());
  CHECK(sym->num.empty());
  // in fiber degree zero nothing arrives and the symmetrization generates
  auto unit = ss.reduce_to_page(7, {0, 0}, ScaledVec{{Int(1), Int(1)}, 1});
  REQUIRE(unit.has_value());
  CHECK(unit->num == IntVec{Int(1)});
}
