#pragma once

// Exact dense linear algebra for boundary matrices. rank() runs its row
// updates under OpenMP; reference::rank() is the serial version kept for
// cross-checking and benchmarking.

#include <cstddef>
#include <vector>

#include "folcc/scalar.hpp"

namespace folcc::linalg {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }
  bool is_zero() const {
    for (const auto& v : data_)
      if (v != 0) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<mpz_class>;
using RatMatrix = Matrix<Rational>;

/// Rank by fraction-free (Bareiss) elimination.
std::size_t rank(IntMatrix m);
/// Clears denominators row by row, then rank(IntMatrix).
std::size_t rank(const RatMatrix& m);

RatMatrix multiply(const RatMatrix& a, const RatMatrix& b);

/// Basis of {v : m·v = 0}, one vector per free column of the reduced echelon form.
std::vector<std::vector<Rational>> nullspace(const RatMatrix& m);

namespace reference {
std::size_t rank(IntMatrix m);
}  // namespace reference

}  // namespace folcc::linalg
