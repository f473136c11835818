#include "stq/matrix.hpp"

#include <sstream>

#include "stq/errors.hpp"

namespace stq {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  data_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_)
      fail(ErrorClass::Validation, "ValidationError", "ragged matrix literal");
    for (const auto& x : r) data_.push_back(x);
  }
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(int rows, const std::vector<IntVec>& cols) {
  IntMatrix m(rows, static_cast<int>(cols.size()));
  for (int c = 0; c < m.cols(); ++c) {
    if (static_cast<int>(cols[c].size()) != rows)
      fail(ErrorClass::Validation, "ValidationError",
           "column length mismatch in from_columns");
    for (int r = 0; r < rows; ++r) m.at(r, c) = cols[c][r];
  }
  return m;
}

IntVec IntMatrix::column(int c) const {
  IntVec v(rows_);
  for (int r = 0; r < rows_; ++r) v[r] = at(r, c);
  return v;
}

IntVec IntMatrix::row(int r) const {
  IntVec v(cols_);
  for (int c = 0; c < cols_; ++c) v[c] = at(r, c);
  return v;
}

void IntMatrix::set_column(int c, const IntVec& v) {
  for (int r = 0; r < rows_; ++r) at(r, c) = v[r];
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_)
    fail(ErrorClass::Validation, "ValidationError",
         "matrix product shape mismatch");
  IntMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Int& a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j) out.at(i, j) += a * rhs.at(k, j);
    }
  return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    fail(ErrorClass::Validation, "ValidationError", "matrix sum shape mismatch");
  IntMatrix out = *this;
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& rhs) const {
  return *this + rhs.scaled(Int(-1));
}

IntVec IntMatrix::apply(const IntVec& x) const {
  if (static_cast<int>(x.size()) != cols_)
    fail(ErrorClass::Validation, "ValidationError", "apply shape mismatch");
  IntVec out(rows_);
  for (int i = 0; i < rows_; ++i) {
    Int acc = 0;
    for (int j = 0; j < cols_; ++j) acc += at(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

IntMatrix IntMatrix::scaled(const Int& c) const {
  IntMatrix out = *this;
  for (auto& x : out.data_) x *= c;
  return out;
}

IntMatrix IntMatrix::select_columns(const std::vector<int>& idx) const {
  IntMatrix out(rows_, static_cast<int>(idx.size()));
  for (int j = 0; j < out.cols_; ++j)
    for (int i = 0; i < rows_; ++i) out.at(i, j) = at(i, idx[j]);
  return out;
}

IntMatrix IntMatrix::select_rows(const std::vector<int>& idx) const {
  IntMatrix out(static_cast<int>(idx.size()), cols_);
  for (int i = 0; i < out.rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(i, j) = at(idx[i], j);
  return out;
}

IntMatrix IntMatrix::hcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows())
    fail(ErrorClass::Validation, "ValidationError", "hcat row mismatch");
  IntMatrix out(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols(); ++j) out.at(i, a.cols() + j) = b.at(i, j);
  }
  return out;
}

IntMatrix IntMatrix::vcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols())
    fail(ErrorClass::Validation, "ValidationError", "vcat column mismatch");
  IntMatrix out(a.rows() + b.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(a.rows() + i, j) = b.at(i, j);
  return out;
}

bool IntMatrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

bool IntMatrix::is_zero(const Ring& ring) const {
  for (const auto& x : data_)
    if (!ring.is_zero_elem(x)) return false;
  return true;
}

IntMatrix IntMatrix::normalized(const Ring& ring) const {
  IntMatrix out = *this;
  for (auto& x : out.data_) x = ring.normalize(x);
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < cols_; ++j) {
      if (j) os << " ";
      os << at(i, j);
    }
  }
  os << "]";
  return os.str();
}

bool ScaledVec::is_zero() const { return vec_is_zero(num); }

void ScaledVec::reduce() {
  if (den < 0) {
    den = -den;
    for (auto& x : num) x = -x;
  }
  Int g = den;
  for (const auto& x : num) {
    if (x != 0) g = boost::multiprecision::gcd(g, x < 0 ? Int(-x) : x);
    if (g == 1) return;
  }
  if (g > 1) {
    den /= g;
    for (auto& x : num) x /= g;
  }
}

bool ScaledVec::operator==(const ScaledVec& o) const {
  if (num.size() != o.num.size()) return false;
  for (size_t i = 0; i < num.size(); ++i)
    if (num[i] * o.den != o.num[i] * den) return false;
  return true;
}

ScaledVec scaled_add(const ScaledVec& a, const ScaledVec& b) {
  ScaledVec out;
  out.den = boost::multiprecision::lcm(a.den, b.den);
  Int fa = out.den / a.den, fb = out.den / b.den;
  out.num.resize(a.num.size());
  for (size_t i = 0; i < a.num.size(); ++i)
    out.num[i] = a.num[i] * fa + b.num[i] * fb;
  out.reduce();
  return out;
}

ScaledVec scaled_scale(const ScaledVec& a, const Int& num, const Int& den) {
  ScaledVec out;
  out.den = a.den * den;
  out.num.resize(a.num.size());
  for (size_t i = 0; i < a.num.size(); ++i) out.num[i] = a.num[i] * num;
  out.reduce();
  return out;
}

bool vec_is_zero(const IntVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

bool vec_is_zero(const IntVec& v, const Ring& ring) {
  for (const auto& x : v)
    if (!ring.is_zero_elem(x)) return false;
  return true;
}

IntVec vec_add(const IntVec& a, const IntVec& b) {
  IntVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

IntVec vec_sub(const IntVec& a, const IntVec& b) {
  IntVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

IntVec vec_scaled(const IntVec& a, const Int& c) {
  IntVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * c;
  return out;
}

IntVec vec_normalized(const IntVec& v, const Ring& ring) {
  IntVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = ring.normalize(v[i]);
  return out;
}

std::string vec_to_string(const IntVec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ")";
  return os.str();
}

} // namespace stq
