#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "stq/ring.hpp"

namespace stq {

using IntVec = std::vector<Int>;

// Dense matrix with arbitrary-precision integer entries, row major.
// A 0 x n or n x 0 matrix is legal and behaves as the empty map.
class IntMatrix {
public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<Int>> rows);

  static IntMatrix identity(int n);
  static IntMatrix zero(int rows, int cols) { return IntMatrix(rows, cols); }
  static IntMatrix from_columns(int rows, const std::vector<IntVec>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Int& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const Int& at(int r, int c) const {
    return data_[static_cast<size_t>(r) * cols_ + c];
  }

  IntVec column(int c) const;
  IntVec row(int r) const;
  void set_column(int c, const IntVec& v);

  IntMatrix operator*(const IntMatrix& rhs) const;
  IntMatrix operator+(const IntMatrix& rhs) const;
  IntMatrix operator-(const IntMatrix& rhs) const;
  IntVec apply(const IntVec& x) const;
  IntMatrix transposed() const;
  IntMatrix scaled(const Int& c) const;

  // Submatrix of the listed columns, in the listed order.
  IntMatrix select_columns(const std::vector<int>& idx) const;
  IntMatrix select_rows(const std::vector<int>& idx) const;

  // [a | b], requires equal row counts.
  static IntMatrix hcat(const IntMatrix& a, const IntMatrix& b);
  // [a ; b], requires equal column counts.
  static IntMatrix vcat(const IntMatrix& a, const IntMatrix& b);

  bool is_zero() const;
  bool is_zero(const Ring& ring) const;
  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  // Entrywise canonical form over the ring (mod p reduction for prime fields).
  IntMatrix normalized(const Ring& ring) const;

  std::string to_string() const;

private:
  int rows_;
  int cols_;
  std::vector<Int> data_;
};

// Vector of ring elements scaled by a common positive denominator.
// den stays 1 except over the rationals.
struct ScaledVec {
  IntVec num;
  Int den = 1;

  static ScaledVec zero(int n) { return ScaledVec{IntVec(n, Int(0)), Int(1)}; }
  bool is_zero() const;
  void reduce(); // divide out gcd(num, den), force den > 0
  bool operator==(const ScaledVec& o) const;
};

ScaledVec scaled_add(const ScaledVec& a, const ScaledVec& b);
ScaledVec scaled_scale(const ScaledVec& a, const Int& num, const Int& den);

bool vec_is_zero(const IntVec& v);
bool vec_is_zero(const IntVec& v, const Ring& ring);
IntVec vec_add(const IntVec& a, const IntVec& b);
IntVec vec_sub(const IntVec& a, const IntVec& b);
IntVec vec_scaled(const IntVec& a, const Int& c);
IntVec vec_normalized(const IntVec& v, const Ring& ring);
std::string vec_to_string(const IntVec& v);

} // namespace stq
