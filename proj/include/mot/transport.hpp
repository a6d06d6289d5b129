#pragma once

#include <vector>

#include "mot/lp.hpp"
#include "mot/measure.hpp"

namespace mot {

template <class T>
struct TransportPlan {
  std::vector<T> row_weights;
  std::vector<T> col_weights;
  Matrix<T> mass;
};

template <class T>
struct OtResult {
  T value = T(0);
  TransportPlan<T> plan;
  std::size_t pivots = 0;
};

// Exact transportation simplex: north-west corner start, potentials on the basis tree,
// Dantzig pricing with a permanent switch to Bland's rule after a long degenerate run.
// The returned plan is a basic solution (at most m + n - 1 positive entries).
template <class T>
OtResult<T> solve_ot(const Matrix<T>& cost, const std::vector<T>& a, const std::vector<T>& b);

template <class T>
OtResult<T> solve_ot(const Matrix<T>& cost, const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);

// Same problem through the dense tableau LP; used as a cross-check on small instances.
template <class T>
OtResult<T> solve_ot_lp(const Matrix<T>& cost, const std::vector<T>& a, const std::vector<T>& b);

// c(i, j) = |xs[i] - ys[j]|^rho
template <class T>
Matrix<T> distance_cost(const std::vector<T>& xs, const std::vector<T>& ys, const Exponent& rho);

template <class T>
std::size_t support_size(const TransportPlan<T>& plan);

}  // namespace mot
