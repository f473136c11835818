#include "stq/graded_algebra.hpp"

#include <algorithm>
#include <sstream>

#include "stq/errors.hpp"
#include "stq/smith.hpp"

namespace stq {

SparseVec sparse_add(const SparseVec& a, const SparseVec& b) {
  SparseVec out;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      Int c = a[i].second + b[j].second;
      if (c != 0) out.emplace_back(a[i].first, c);
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVec sparse_scale(const SparseVec& a, const Int& c) {
  if (c == 0) return {};
  SparseVec out;
  for (const auto& [k, x] : a) out.emplace_back(k, x * c);
  return out;
}

std::string sparse_to_string(const SparseVec& v,
                             const std::vector<AlgebraElt>& elts) {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : v) {
    Int a = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (a != 1) os << a << "*";
    os << elts[k].label;
    first = false;
  }
  return os.str();
}

int GradedAlgebra::add_elt(const std::string& label, int deg,
                           const Int& order) {
  elts_.push_back(AlgebraElt{label, deg, order});
  return size() - 1;
}

void GradedAlgebra::set_unit(int idx) {
  if (idx < 0 || idx >= size() || elts_[idx].deg != 0)
    fail(ErrorClass::Validation, "ValidationError",
         "unit must be an existing degree zero element");
  unit_ = idx;
}

std::optional<int> GradedAlgebra::find(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (elts_[i].label == label) return i;
  return std::nullopt;
}

std::vector<int> GradedAlgebra::in_degree(int d) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (elts_[i].deg == d) out.push_back(i);
  return out;
}

int GradedAlgebra::min_degree() const {
  int m = 0;
  for (const auto& e : elts_) m = std::min(m, e.deg);
  return m;
}

int GradedAlgebra::max_degree() const {
  int m = 0;
  for (const auto& e : elts_) m = std::max(m, e.deg);
  return m;
}

Int GradedAlgebra::reduce_coeff(int i, const Int& c) const {
  const Int& o = elts_[i].order;
  if (o < 2) return c;
  Int r = c % o;
  if (r < 0) r += o;
  return r;
}

void GradedAlgebra::set_product(int i, int j, SparseVec value) {
  std::sort(value.begin(), value.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec clean;
  for (const auto& [k, c] : value) {
    if (elts_[k].deg != elts_[i].deg + elts_[j].deg)
      fail(ErrorClass::Validation, "ValidationError",
           "product of " + elts_[i].label + " and " + elts_[j].label +
               " is not degree additive");
    Int r = reduce_coeff(k, c);
    if (!clean.empty() && clean.back().first == k)
      clean.back().second = reduce_coeff(k, clean.back().second + r);
    else if (r != 0)
      clean.emplace_back(k, r);
    if (!clean.empty() && clean.back().second == 0) clean.pop_back();
  }
  if (clean.empty())
    table_.erase({i, j});
  else
    table_[{i, j}] = std::move(clean);
}

SparseVec GradedAlgebra::mult(int i, int j) const {
  if (elts_[i].deg + elts_[j].deg > cap_)
    fail(ErrorClass::Engine, "DegreeOverflow",
         "product " + elts_[i].label + " * " + elts_[j].label +
             " leaves the built degree window");
  if (i == unit_) return {{j, Int(1)}};
  if (j == unit_) return {{i, Int(1)}};
  auto it = table_.find({i, j});
  if (it == table_.end()) return {};
  return it->second;
}

SparseVec GradedAlgebra::mult(const SparseVec& a, const SparseVec& b) const {
  SparseVec acc;
  for (const auto& [i, ca] : a)
    for (const auto& [j, cb] : b)
      acc = sparse_add(acc, sparse_scale(mult(i, j), ca * cb));
  SparseVec out;
  for (const auto& [k, c] : acc) {
    Int r = reduce_coeff(k, c);
    if (r != 0) out.emplace_back(k, r);
  }
  return out;
}

GradedAlgebra GradedAlgebra::regraded(int shift_down) const {
  GradedAlgebra out = *this;
  for (auto& e : out.elts_) e.deg -= shift_down;
  if (out.cap_ != std::numeric_limits<int>::max()) out.cap_ -= shift_down;
  return out;
}

void GradedAlgebra::rename(const std::string& from, const std::string& to) {
  auto i = find(from);
  if (!i)
    fail(ErrorClass::Validation, "ValidationError",
         "rename: no element labeled " + from);
  elts_[*i].label = to;
}

void GradedAlgebra::validate(bool check_associativity) const {
  for (const auto& [key, val] : table_) {
    const auto& [i, j] = key;
    // combined annihilator of the pair; 0 when both factors are free
    Int gi = elts_[i].order, gj = elts_[j].order;
    Int g = gi == 0 ? gj : gj == 0 ? gi : boost::multiprecision::gcd(gi, gj);
    for (const auto& [k, c] : val) {
      if (elts_[k].deg != elts_[i].deg + elts_[j].deg)
        fail(ErrorClass::Validation, "ValidationError",
             "table entry not degree additive at " + elts_[i].label + " * " +
                 elts_[j].label);
      if (g != 0) {
        Int gc = g * c;
        bool ok = elts_[k].order == 0 ? gc == 0 : gc % elts_[k].order == 0;
        if (!ok)
          fail(ErrorClass::Validation, "ValidationError",
               "product of torsion classes " + elts_[i].label + " * " +
                   elts_[j].label + " breaks the annihilator of " +
                   elts_[k].label);
      }
    }
  }
  if (!check_associativity) return;
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      for (int k = 0; k < size(); ++k) {
        int dij = elts_[i].deg + elts_[j].deg;
        int djk = elts_[j].deg + elts_[k].deg;
        if (dij > cap_ || djk > cap_ || dij + elts_[k].deg > cap_) continue;
        SparseVec left = mult(mult(i, j), SparseVec{{k, Int(1)}});
        SparseVec right = mult(SparseVec{{i, Int(1)}}, mult(j, k));
        if (left != right)
          fail(ErrorClass::Validation, "AssociativityFailure",
               "(" + elts_[i].label + " * " + elts_[j].label + ") * " +
                   elts_[k].label + " differs from the right association");
      }
}

namespace {

struct Monomial {
  std::vector<int> exps;
  int deg = 0;
};

void enumerate(const std::vector<GenSpec>& gens, int max_deg, size_t at,
               Monomial cur, std::vector<Monomial>& out) {
  if (at == gens.size()) {
    out.push_back(cur);
    return;
  }
  const GenSpec& g = gens[at];
  int max_pow = g.exterior ? 1 : std::numeric_limits<int>::max();
  if (g.truncate_power > 0) max_pow = std::min(max_pow, g.truncate_power);
  for (int p = 0;; ++p) {
    if (p > max_pow) break;
    int deg = cur.deg + p * g.deg;
    if (deg > max_deg) break;
    Monomial next = cur;
    next.exps[at] = p;
    next.deg = deg;
    enumerate(gens, max_deg, at + 1, next, out);
  }
}

std::string monomial_label(const std::vector<GenSpec>& gens,
                           const std::vector<int>& exps) {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (exps[i] == 0) continue;
    if (!first) os << "*";
    os << gens[i].label;
    if (exps[i] >= 2) os << "^" << exps[i];
    first = false;
  }
  return first ? "1" : os.str();
}

Int monomial_order(const std::vector<GenSpec>& gens,
                   const std::vector<int>& exps) {
  Int o = 0;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (exps[i] == 0 || gens[i].coeff_order == 0) continue;
    o = o == 0 ? gens[i].coeff_order
               : boost::multiprecision::gcd(o, gens[i].coeff_order);
  }
  return o;
}

} // namespace

GradedAlgebra free_graded_commutative(const std::vector<GenSpec>& gens,
                                      int max_deg) {
  for (const auto& g : gens)
    if (g.deg <= 0)
      fail(ErrorClass::Validation, "ValidationError",
           "generator " + g.label + " must have positive degree");

  std::vector<Monomial> monos;
  Monomial seed;
  seed.exps.assign(gens.size(), 0);
  enumerate(gens, max_deg, 0, seed, monos);
  std::sort(monos.begin(), monos.end(), [](const Monomial& a,
                                           const Monomial& b) {
    if (a.deg != b.deg) return a.deg < b.deg;
    return a.exps > b.exps; // earlier generators' powers first
  });

  GradedAlgebra alg;
  std::map<std::vector<int>, int> index_of;
  for (const auto& m : monos) {
    Int o = monomial_order(gens, m.exps);
    if (o == 1) continue; // coefficient groups with coprime torsion collapse
    int idx = alg.add_elt(monomial_label(gens, m.exps), m.deg, o);
    index_of[m.exps] = idx;
    if (m.deg == 0) alg.set_unit(idx);
  }
  alg.set_degree_cap(max_deg);

  for (const auto& [ea, ia] : index_of)
    for (const auto& [eb, ib] : index_of) {
      if (alg.elt(ia).deg + alg.elt(ib).deg > max_deg) continue;
      std::vector<int> sum(gens.size());
      bool dead = false;
      for (size_t i = 0; i < gens.size() && !dead; ++i) {
        sum[i] = ea[i] + eb[i];
        if (gens[i].exterior && sum[i] > 1) dead = true;
        if (gens[i].truncate_power > 0 && sum[i] > gens[i].truncate_power)
          dead = true;
      }
      if (dead) continue;
      auto it = index_of.find(sum);
      if (it == index_of.end()) continue; // collapsed by coprime torsion
      // Koszul sign: each factor of b crosses the later factors of a.
      long long cross = 0;
      for (size_t i = 0; i < gens.size(); ++i) {
        if (eb[i] == 0 || gens[i].deg % 2 == 0) continue;
        long long later_odd = 0;
        for (size_t j = i + 1; j < gens.size(); ++j)
          if (gens[j].deg % 2 != 0) later_odd += ea[j];
        cross += static_cast<long long>(eb[i]) * later_odd;
      }
      Int sign = cross % 2 == 0 ? 1 : -1;
      alg.set_product(ia, ib, SparseVec{{it->second, sign}});
    }
  return alg;
}

IntersectionAlgebra intersection_from_cup(const GradedAlgebra& cup, int dim,
                                          const Ring& ring) {
  for (const auto& e : cup.elts()) {
    if (e.deg < 0 || e.deg > dim)
      fail(ErrorClass::Validation, "NotPoincareDuality",
           "cup class " + e.label + " lies outside degrees [0, dim]");
    if (e.order != 0)
      fail(ErrorClass::Validation, "NotPoincareDuality",
           "cup table carries torsion at " + e.label +
               "; supply homology directly instead");
  }
  if (cup.unit() < 0)
    fail(ErrorClass::Validation, "NotPoincareDuality", "cup table has no unit");
  if (cup.in_degree(0).size() != 1)
    fail(ErrorClass::Validation, "NotPoincareDuality",
         "degree zero must have rank one");
  auto top = cup.in_degree(dim);
  if (top.size() != 1)
    fail(ErrorClass::Validation, "NotPoincareDuality",
         "top degree must have rank one");
  int top_idx = top[0];

  for (int k = 0; k <= dim; ++k) {
    auto a = cup.in_degree(k);
    auto b = cup.in_degree(dim - k);
    if (a.size() != b.size())
      fail(ErrorClass::Validation, "NotPoincareDuality",
           "ranks in complementary degrees " + std::to_string(k) + " and " +
               std::to_string(dim - k) + " differ");
    if (a.empty()) continue;
    IntMatrix pairing(static_cast<int>(a.size()), static_cast<int>(b.size()));
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) {
        for (const auto& [idx, c] : cup.mult(a[i], b[j]))
          if (idx == top_idx) pairing.at(static_cast<int>(i),
                                         static_cast<int>(j)) = c;
      }
    auto s = smith_normal_form(pairing.normalized(ring));
    for (int i = 0; i < static_cast<int>(a.size()); ++i)
      if (!ring.diag_is_unit(s.diag(i)))
        fail(ErrorClass::Validation, "NotPoincareDuality",
             "pairing of degrees " + std::to_string(k) + " and " +
                 std::to_string(dim - k) + " is not unimodular over " +
                 ring.to_string());
  }

  IntersectionAlgebra out;
  GradedAlgebra flipped;
  for (const auto& e : cup.elts()) flipped.add_elt(e.label, -e.deg, e.order);
  for (int i = 0; i < cup.size(); ++i)
    for (int j = 0; j < cup.size(); ++j) {
      if (i == cup.unit() || j == cup.unit()) continue;
      // beyond the top degree the product vanishes for dimension reasons
      if (cup.elt(i).deg + cup.elt(j).deg > dim) continue;
      SparseVec v = cup.mult(i, j);
      if (!v.empty()) flipped.set_product(i, j, v);
    }
  flipped.set_unit(cup.unit());
  out.alg = std::move(flipped);
  out.dim = dim;
  out.unit_idx = cup.unit();
  out.point_idx = top_idx;
  return out;
}

} // namespace stq
