#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mhsos/rational.hpp"

namespace mhsos {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RationalMatrix transpose() const;
  std::vector<Rational> apply(std::span<const Rational> x) const;
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_symmetric() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& a);

std::size_t rank(RationalMatrix a);

/// Basis of {x : a x = 0}, one vector per free column (that entry set to 1).
std::vector<std::vector<Rational>> nullspace(RationalMatrix a);

/// Unique solution of a x = b; throws std::domain_error when a is singular or b is
/// inconsistent.
std::vector<Rational> solve(const RationalMatrix& a, std::span<const Rational> b);

Rational determinant(RationalMatrix a);

/// Throws std::domain_error when singular.
RationalMatrix inverse(const RationalMatrix& a);

}  // namespace mhsos
