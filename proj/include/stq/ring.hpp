#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

#include "stq/errors.hpp"

namespace stq {

using Int = boost::multiprecision::cpp_int;

// Coefficient ring for a whole computation: the integers, the rationals, or
// a prime field Z/p. Matrices always carry integer entries; the ring decides
// how a Smith diagonal is read back (which entries are units, what additive
// order a diagonal entry induces) and whether torsion is kept.
class Ring {
public:
  enum class Kind { Integers, Rationals, PrimeField };

  static Ring integers() { return Ring(Kind::Integers, 0); }
  static Ring rationals() { return Ring(Kind::Rationals, 0); }
  static Ring prime_field(const Int& p) {
    if (p < 2 || !is_prime(p))
      fail(ErrorClass::Validation, "ValidationError",
           "prime field modulus must be prime, got " + p.str());
    return Ring(Kind::PrimeField, p);
  }

  Kind kind() const { return kind_; }
  const Int& prime() const { return prime_; }
  bool is_field() const { return kind_ != Kind::Integers; }
  bool keeps_torsion() const { return kind_ == Kind::Integers; }

  // Canonical representative: reduce into [0, p) over a prime field,
  // identity otherwise.
  Int normalize(const Int& x) const {
    if (kind_ != Kind::PrimeField) return x;
    Int r = x % prime_;
    if (r < 0) r += prime_;
    return r;
  }

  bool is_zero_elem(const Int& x) const {
    if (kind_ == Kind::PrimeField) return x % prime_ == 0;
    return x == 0;
  }

  // Unit test for a Smith diagonal entry.
  bool diag_is_unit(const Int& d) const {
    switch (kind_) {
      case Kind::Integers: return d == 1 || d == -1;
      case Kind::Rationals: return d != 0;
      case Kind::PrimeField: return d % prime_ != 0;
    }
    return false;
  }

  // Additive order of the cyclic summand a Smith diagonal entry d cuts out:
  // 0 means a free summand, 1 means the summand dies, m > 1 means Z/m.
  Int diag_order(const Int& d) const {
    Int a = d < 0 ? Int(-d) : d;
    switch (kind_) {
      case Kind::Integers: return a;
      case Kind::Rationals: return a == 0 ? Int(0) : Int(1);
      case Kind::PrimeField: return a % prime_ == 0 ? Int(0) : Int(1);
    }
    return a;
  }

  std::optional<Int> inverse(const Int& x) const {
    if (kind_ != Kind::PrimeField) {
      if (x == 1) return Int(1);
      if (x == -1) return Int(-1);
      return std::nullopt;
    }
    Int a = normalize(x);
    if (a == 0) return std::nullopt;
    // Extended Euclid against the modulus.
    Int old_r = a, r = prime_, old_s = 1, s = 0;
    while (r != 0) {
      Int q = old_r / r;
      Int tmp = old_r - q * r; old_r = r; r = tmp;
      tmp = old_s - q * s; old_s = s; s = tmp;
    }
    return normalize(old_s);
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Integers: return "Z";
      case Kind::Rationals: return "Q";
      case Kind::PrimeField: return "Z/" + prime_.str();
    }
    return "?";
  }

  bool operator==(const Ring& o) const {
    return kind_ == o.kind_ && prime_ == o.prime_;
  }
  bool operator!=(const Ring& o) const { return !(*this == o); }

private:
  Ring(Kind k, const Int& p) : kind_(k), prime_(p) {}

  static bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  Kind kind_;
  Int prime_;
};

} // namespace stq
