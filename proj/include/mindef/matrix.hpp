#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mindef/rational.hpp"

namespace mindef {

/// Dense row-major matrix of exact rationals. Used for Y, A_k, M, A_b and
/// anything else whose rank or entries must be tolerance-free.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const Rational> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Rational> column(std::size_t c) const;
  std::vector<Rational> row(std::size_t r) const;
  Matrix transpose() const;

  bool is_zero() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
std::vector<Rational> operator*(const Matrix& a, std::span<const Rational> x);

/// Rank by exact Gaussian elimination.
std::size_t rank(Matrix a);

}  // namespace mindef
