#ifndef CORKFORGE_MATRIX_HPP
#define CORKFORGE_MATRIX_HPP

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "corkforge/integers.hpp"

namespace corkforge {

/// Dense integer matrix over arbitrary-precision integers, row-major.
/// Small and immutable in spirit: every algorithm in this library takes
/// matrices by const reference and returns fresh values.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
      : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_) throw std::invalid_argument("matrix entry count mismatch");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool operator==(const Matrix&) const = default;

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  bool is_zero() const {
    for (const Int& v : a_)
      if (v != 0) return false;
    return true;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
  }

  // row_i += f * row_j
  void add_row_multiple(std::size_t i, std::size_t j, const Int& f) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) += f * (*this)(j, c);
  }

  // col_i += f * col_j
  void add_col_multiple(std::size_t i, std::size_t j, const Int& f) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, i) += f * (*this)(r, j);
  }

  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
  }

  std::vector<Int> row(std::size_t i) const {
    std::vector<Int> r(cols_);
    for (std::size_t c = 0; c < cols_; ++c) r[c] = (*this)(i, c);
    return r;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

inline Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.rows()) throw std::invalid_argument("matrix product shape mismatch");
  Matrix z(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols(); ++j) z(i, j) += x(i, k) * y(k, j);
    }
  return z;
}

inline IntVec operator*(const Matrix& m, const IntVec& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
  IntVec out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

inline bool is_zero_vector(const IntVec& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

/// v^T M w for a square matrix M.
inline Int bilinear(const IntVec& v, const Matrix& m, const IntVec& w) {
  if (m.rows() != v.size() || m.cols() != w.size())
    throw std::invalid_argument("bilinear form shape mismatch");
  Int acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < w.size(); ++j) acc += v[i] * m(i, j) * w[j];
  }
  return acc;
}

}  // namespace corkforge

#endif  // CORKFORGE_MATRIX_HPP
