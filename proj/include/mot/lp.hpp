#pragma once

#include <cstddef>
#include <vector>

#include "mot/scalar.hpp"

namespace mot {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& init = T(0)) : rows_(rows), cols_(cols), data_(rows * cols, init) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const T* row(std::size_t i) const { return data_.data() + i * cols_; }
  T* row(std::size_t i) { return data_.data() + i * cols_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

enum class LpStatus { optimal, infeasible, unbounded };

template <class T>
struct LpResult {
  LpStatus status = LpStatus::infeasible;
  T value = T(0);
  std::vector<T> x;
};

// min c.x subject to A x = b, x >= 0. Two-phase tableau simplex; Dantzig pricing with a switch
// to Bland's rule on long degenerate runs.
template <class T>
LpResult<T> solve_lp(const Matrix<T>& A, const std::vector<T>& b, const std::vector<T>& c);

// All vertices of {x >= 0 : A x = b} by basis enumeration. Throws ScaleError past `limit` bases.
template <class T>
std::vector<std::vector<T>> enumerate_vertices(const Matrix<T>& A, const std::vector<T>& b,
                                               std::size_t limit = 2'000'000);

}  // namespace mot
