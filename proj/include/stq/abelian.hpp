#pragma once

#include <string>
#include <vector>

#include "stq/ring.hpp"

namespace stq {

// Finitely generated module over the coefficient ring, recorded as a free
// rank plus torsion coefficients in divisibility order. Over a field the
// torsion list is always empty.
class FgAbelianGroup {
public:
  FgAbelianGroup() = default;
  FgAbelianGroup(int free_rank, std::vector<Int> torsion)
      : free_rank_(free_rank), torsion_(std::move(torsion)) {}

  static FgAbelianGroup free_of_rank(int r) { return FgAbelianGroup(r, {}); }
  static FgAbelianGroup trivial_group() { return FgAbelianGroup(0, {}); }

  int free_rank() const { return free_rank_; }
  const std::vector<Int>& torsion() const { return torsion_; }
  int gen_count() const {
    return free_rank_ + static_cast<int>(torsion_.size());
  }
  bool trivial() const { return free_rank_ == 0 && torsion_.empty(); }

  bool operator==(const FgAbelianGroup& o) const {
    return free_rank_ == o.free_rank_ && torsion_ == o.torsion_;
  }
  bool operator!=(const FgAbelianGroup& o) const { return !(*this == o); }

  // "0", "Z", "Z^2", "Z/2", "Z^2 + Z/2 + Z/6", with R in place of Z for
  // field coefficients when a ring is supplied.
  std::string to_string() const { return to_string_with("Z"); }
  std::string to_string(const Ring& ring) const {
    switch (ring.kind()) {
      case Ring::Kind::Integers: return to_string_with("Z");
      case Ring::Kind::Rationals: return to_string_with("Q");
      case Ring::Kind::PrimeField:
        return to_string_with("Z/" + ring.prime().str());
    }
    return to_string_with("Z");
  }

private:
  std::string to_string_with(const std::string& base) const {
    if (trivial()) return "0";
    std::string s;
    if (free_rank_ == 1) s = base;
    else if (free_rank_ > 1) s = base + "^" + std::to_string(free_rank_);
    for (const auto& t : torsion_) {
      if (!s.empty()) s += " + ";
      s += "Z/" + t.str();
    }
    return s;
  }

  int free_rank_ = 0;
  std::vector<Int> torsion_;
};

} // namespace stq
