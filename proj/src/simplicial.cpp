#include "stq/simplicial.hpp"

#include <algorithm>

#include "stq/errors.hpp"

namespace stq {

namespace {

std::string spot(int dim, int index) {
  return "(" + std::to_string(dim) + ", " + std::to_string(index) + ")";
}

} // namespace

int SimplicialSet::count(int dim) const {
  if (dim < 0 || dim > top_dim()) return 0;
  return static_cast<int>(cells_[dim].size());
}

const SimplicialSet::Cell& SimplicialSet::cell(int dim, int index) const {
  if (dim < 0 || dim > top_dim() || index < 0 || index >= count(dim))
    fail(ErrorClass::Engine, "BadSimplex",
         name_ + " has no simplex at " + spot(dim, index));
  return cells_[dim][index];
}

const std::string& SimplicialSet::label(int dim, int index) const {
  return cell(dim, index).label;
}

std::optional<int> SimplicialSet::find(int dim,
                                       const std::string& label) const {
  for (int i = 0; i < count(dim); ++i)
    if (cells_[dim][i].label == label) return i;
  return std::nullopt;
}

SimplexRef SimplicialSet::ref(int dim, int index) const {
  cell(dim, index);
  return SimplexRef{dim, index, {}};
}

void SimplicialSet::check_ref(const SimplexRef& s, int expected_dim,
                              const std::string& where) const {
  if (s.dim != expected_dim)
    fail(ErrorClass::Validation, "DegreeMismatch",
         name_ + ": " + where + " has dimension " + std::to_string(s.dim) +
             ", expected " + std::to_string(expected_dim));
  int core = s.core_dim();
  if (core < 0 || s.index < 0 || s.index >= count(core))
    fail(ErrorClass::Validation, "BadSimplex",
         name_ + ": " + where + " points at the missing simplex " +
             spot(core, s.index));
  // word[t] degenerates a simplex of dimension core + len - 1 - t
  for (size_t t = 0; t < s.word.size(); ++t) {
    int cur = core + static_cast<int>(s.word.size() - t) - 1;
    if (s.word[t] < 0 || s.word[t] > cur)
      fail(ErrorClass::Validation, "BadSimplex",
           name_ + ": " + where + " has degeneracy index " +
               std::to_string(s.word[t]) + " out of range");
    if (t + 1 < s.word.size() && s.word[t] <= s.word[t + 1])
      fail(ErrorClass::Validation, "BadSimplex",
           name_ + ": " + where + " has a non-normalized degeneracy word");
  }
}

int SimplicialSet::add_vertex(const std::string& label) {
  return add_simplex(0, label, {});
}

int SimplicialSet::add_simplex(int dim, const std::string& label,
                               std::vector<SimplexRef> faces) {
  if (sealed_)
    fail(ErrorClass::Validation, "Sealed",
         name_ + " is sealed; no simplices can be added");
  if (dim < 0 || dim > 4)
    fail(ErrorClass::Validation, "DimensionCap",
         name_ + ": simplicial sets are capped at dimension four, got " +
             std::to_string(dim));
  if (static_cast<int>(faces.size()) != (dim == 0 ? 0 : dim + 1))
    fail(ErrorClass::Validation, "BadSimplex",
         name_ + ": simplex " + label + " needs " + std::to_string(dim + 1) +
             " faces");
  if (dim > 0 && count(dim - 1) == 0)
    fail(ErrorClass::Validation, "BadSimplex",
         name_ + ": add dimension " + std::to_string(dim - 1) + " before " +
             std::to_string(dim));
  for (int i = 0; i < static_cast<int>(faces.size()); ++i)
    check_ref(faces[i], dim - 1, "face " + std::to_string(i) + " of " + label);
  if (find(dim, label))
    fail(ErrorClass::Validation, "DuplicateLabel",
         name_ + " already has a simplex labelled " + label + " in dimension " +
             std::to_string(dim));
  if (top_dim() < dim) cells_.resize(dim + 1);
  cells_[dim].push_back(Cell{label, std::move(faces)});
  return count(dim) - 1;
}

void SimplicialSet::seal() {
  for (int n = 2; n <= top_dim(); ++n)
    for (int idx = 0; idx < count(n); ++idx) {
      SimplexRef s{n, idx, {}};
      for (int j = 1; j <= n; ++j)
        for (int i = 0; i < j; ++i)
          if (!(face(face(s, j), i) == face(face(s, i), j - 1)))
            fail(ErrorClass::Validation, "FaceIdentity",
                 name_ + ": faces " + std::to_string(i) + " and " +
                     std::to_string(j) + " of " + label(n, idx) +
                     " violate the simplicial identities");
    }
  sealed_ = true;
}

SimplexRef SimplicialSet::face(const SimplexRef& s, int i) const {
  if (s.dim <= 0 || i < 0 || i > s.dim)
    fail(ErrorClass::Engine, "BadFace",
         name_ + ": face " + std::to_string(i) + " of a simplex of dimension " +
             std::to_string(s.dim));
  if (s.word.empty()) return cell(s.dim, s.index).faces[i];
  int j = s.word[0];
  SimplexRef inner{s.dim - 1, s.index,
                   std::vector<int>(s.word.begin() + 1, s.word.end())};
  if (i == j || i == j + 1) return inner;
  if (i < j) return degeneracy(face(inner, i), j - 1);
  return degeneracy(face(inner, i - 1), j);
}

SimplexRef SimplicialSet::degeneracy(const SimplexRef& s, int j) {
  if (j < 0 || j > s.dim)
    fail(ErrorClass::Engine, "BadFace",
         "degeneracy " + std::to_string(j) + " of a simplex of dimension " +
             std::to_string(s.dim));
  if (s.word.empty() || j > s.word[0]) {
    SimplexRef r{s.dim + 1, s.index, {}};
    r.word.reserve(s.word.size() + 1);
    r.word.push_back(j);
    r.word.insert(r.word.end(), s.word.begin(), s.word.end());
    return r;
  }
  // s_j s_k = s_{k+1} s_j for j <= k keeps the word strictly decreasing.
  int k = s.word[0];
  SimplexRef inner{s.dim - 1, s.index,
                   std::vector<int>(s.word.begin() + 1, s.word.end())};
  SimplexRef r = degeneracy(inner, j);
  r.word.insert(r.word.begin(), k + 1);
  r.dim = s.dim + 1;
  return r;
}

std::string SimplicialSet::ref_string(const SimplexRef& s) const {
  std::string out;
  for (int j : s.word) out += "s" + std::to_string(j) + " ";
  return out + label(s.core_dim(), s.index);
}

SimplicialMap::SimplicialMap(std::string name, const SimplicialSet* source,
                             const SimplicialSet* target)
    : name_(std::move(name)), source_(source), target_(target) {
  if (!source_ || !target_ || !source_->sealed())
    fail(ErrorClass::Validation, "BadMap",
         name_ + ": simplicial maps need a sealed source and a target");
  images_.resize(source_->top_dim() + 1);
  for (int n = 0; n <= source_->top_dim(); ++n)
    images_[n].resize(source_->count(n));
}

void SimplicialMap::set_image(int dim, int index, SimplexRef image) {
  if (sealed_)
    fail(ErrorClass::Validation, "Sealed", name_ + " is sealed");
  source_->ref(dim, index);
  if (image.dim != dim)
    fail(ErrorClass::Validation, "DegreeMismatch",
         name_ + ": image of " + source_->label(dim, index) +
             " must keep dimension " + std::to_string(dim));
  if (image.core_dim() < 0 || image.index < 0 ||
      image.index >= target_->count(image.core_dim()))
    fail(ErrorClass::Validation, "BadSimplex",
         name_ + ": image of " + source_->label(dim, index) +
             " is not a simplex of " + target_->name());
  images_[dim][index] = std::move(image);
}

void SimplicialMap::seal() {
  for (int n = 0; n <= source_->top_dim(); ++n)
    for (int idx = 0; idx < source_->count(n); ++idx) {
      if (!images_[n][idx])
        fail(ErrorClass::Validation, "BadMap",
             name_ + ": no image for " + source_->label(n, idx));
      SimplexRef img = *images_[n][idx];
      for (int i = 0; i <= n && n > 0; ++i) {
        SimplexRef lhs = apply(source_->face(source_->ref(n, idx), i));
        SimplexRef rhs = target_->face(img, i);
        if (!(lhs == rhs))
          fail(ErrorClass::Validation, "NotSimplicial",
               name_ + ": face " + std::to_string(i) + " of " +
                   source_->label(n, idx) +
                   " does not commute with the map");
      }
    }
  sealed_ = true;
}

SimplexRef SimplicialMap::apply(const SimplexRef& s) const {
  int core = s.core_dim();
  if (core < 0 || core > source_->top_dim() ||
      s.index >= source_->count(core) || !images_[core][s.index])
    fail(ErrorClass::Engine, "BadMap",
         name_ + ": no image stored at " + spot(core, s.index));
  SimplexRef out = *images_[core][s.index];
  for (auto it = s.word.rbegin(); it != s.word.rend(); ++it)
    out = SimplicialSet::degeneracy(out, *it);
  return out;
}

Chain chain_term(int dim, int index, const Int& coeff) {
  Chain c{dim, {}};
  if (coeff != 0) c.terms.emplace(index, coeff);
  return c;
}

void chain_add(Chain& c, int index, const Int& coeff, const Ring& ring) {
  Int next = ring.normalize(c.terms[index] + coeff);
  if (ring.is_zero_elem(next))
    c.terms.erase(index);
  else
    c.terms[index] = next;
}

Chain chain_scale(const Chain& c, const Int& s, const Ring& ring) {
  Chain out{c.dim, {}};
  for (const auto& [idx, a] : c.terms) chain_add(out, idx, a * s, ring);
  return out;
}

Chain boundary(const SimplicialSet& X, const Chain& c, const Ring& ring) {
  Chain out{c.dim - 1, {}};
  if (c.dim <= 0) return out;
  for (const auto& [idx, a] : c.terms) {
    SimplexRef s = X.ref(c.dim, idx);
    for (int i = 0; i <= c.dim; ++i) {
      SimplexRef f = X.face(s, i);
      if (f.is_degenerate()) continue;
      chain_add(out, f.index, (i % 2) ? Int(-a) : a, ring);
    }
  }
  return out;
}

Chain push_chain(const SimplicialMap& f, const Chain& c, const Ring& ring) {
  Chain out{c.dim, {}};
  for (const auto& [idx, a] : c.terms) {
    SimplexRef img = f.apply(f.source().ref(c.dim, idx));
    if (img.is_degenerate()) continue;
    chain_add(out, img.index, a, ring);
  }
  return out;
}

IntMatrix boundary_matrix(const SimplicialSet& X, int dim, const Ring& ring) {
  IntMatrix m(X.count(dim - 1), X.count(dim));
  for (int idx = 0; idx < X.count(dim); ++idx) {
    SimplexRef s = X.ref(dim, idx);
    for (int i = 0; i <= dim && dim > 0; ++i) {
      SimplexRef f = X.face(s, i);
      if (f.is_degenerate()) continue;
      m.at(f.index, idx) =
          ring.normalize(m.at(f.index, idx) + ((i % 2) ? Int(-1) : Int(1)));
    }
  }
  return m;
}

} // namespace stq
