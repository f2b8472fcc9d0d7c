#include "mindef/matrix.hpp"

#include <cassert>
#include <utility>

#include "mindef/error.hpp"

namespace mindef {

Matrix Matrix::identity(std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

Matrix Matrix::diagonal(std::span<const Rational> entries) {
  Matrix out(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) out(i, i) = entries[i];
  return out;
}

std::vector<Rational> Matrix::column(std::size_t c) const {
  std::vector<Rational> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<Rational> Matrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

bool Matrix::is_zero() const {
  for (const auto& v : data_)
    if (sgn(v) != 0) return false;
  return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorKind::Internal, "matrix product dimension mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (sgn(b(k, j)) != 0) out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::Internal, "matrix difference dimension mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

std::vector<Rational> operator*(const Matrix& a, std::span<const Rational> x) {
  if (a.cols() != x.size())
    throw Error(ErrorKind::Internal, "matrix-vector dimension mismatch");
  std::vector<Rational> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (sgn(a(i, j)) != 0) out[i] += a(i, j) * x[j];
  return out;
}

std::size_t rank(Matrix a) {
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < a.cols() && pivot_row < a.rows(); ++c) {
    std::size_t found = pivot_row;
    while (found < a.rows() && sgn(a(found, c)) == 0) ++found;
    if (found == a.rows()) continue;
    if (found != pivot_row)
      for (std::size_t k = c; k < a.cols(); ++k) std::swap(a(found, k), a(pivot_row, k));
    for (std::size_t r = pivot_row + 1; r < a.rows(); ++r) {
      if (sgn(a(r, c)) == 0) continue;
      Rational factor = a(r, c) / a(pivot_row, c);
      for (std::size_t k = c; k < a.cols(); ++k) a(r, k) -= factor * a(pivot_row, k);
    }
    ++pivot_row;
  }
  return pivot_row;
}

}  // namespace mindef
