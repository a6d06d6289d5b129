#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "mot/scalar.hpp"

namespace mot {

// Step function on (b_0, b_k]; piece i is (b_i, b_{i+1}] (left-continuous convention).
// Evaluation at b_0 returns the first value (right limit).
template <class T>
class PiecewiseConstant {
 public:
  PiecewiseConstant(std::vector<T> breaks, std::vector<T> values);

  const std::vector<T>& breaks() const { return breaks_; }
  const std::vector<T>& values() const { return values_; }
  std::size_t pieces() const { return values_.size(); }
  const T& lower() const { return breaks_.front(); }
  const T& upper() const { return breaks_.back(); }

  T operator()(const T& u) const;
  std::size_t piece_index(const T& u) const;

  // Values on a partition that refines (or equals) this one.
  std::vector<T> values_on(const std::vector<T>& finer) const;
  PiecewiseConstant refined(const std::vector<T>& finer) const;
  // Adjacent pieces with equal values merged.
  PiecewiseConstant simplified() const;

  PiecewiseConstant positive_part() const;
  PiecewiseConstant negative_part() const;

 private:
  std::vector<T> breaks_;
  std::vector<T> values_;
};

// Affine on each piece (b_i, b_{i+1}], storing the right limit at b_i and the value at b_{i+1}.
// Discontinuities at breakpoints are allowed; is_continuous() reports them.
template <class T>
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<T> breaks, std::vector<T> left, std::vector<T> right);
  static PiecewiseLinear continuous(std::vector<T> breaks, std::vector<T> values);
  static PiecewiseLinear identity(const T& lo, const T& hi);

  const std::vector<T>& breaks() const { return breaks_; }
  const std::vector<T>& left_values() const { return left_; }
  const std::vector<T>& right_values() const { return right_; }
  std::size_t pieces() const { return left_.size(); }
  const T& lower() const { return breaks_.front(); }
  const T& upper() const { return breaks_.back(); }

  T operator()(const T& u) const;
  T piece_value(std::size_t i, const T& u) const;
  std::size_t piece_index(const T& u) const;

  bool is_continuous() const;
  bool is_nondecreasing() const;
  PiecewiseLinear restricted(const T& lo, const T& hi) const;
  PiecewiseLinear simplified() const;

 private:
  std::vector<T> breaks_;
  std::vector<T> left_;
  std::vector<T> right_;
};

template <class T>
bool operator==(const PiecewiseConstant<T>& a, const PiecewiseConstant<T>& b);
template <class T>
bool operator==(const PiecewiseLinear<T>& a, const PiecewiseLinear<T>& b);

// Sorted union of breakpoints, deduplicated exactly or within the tolerance.
template <class T>
std::vector<T> merge_breaks(const std::vector<T>& a, const std::vector<T>& b);
template <class T>
std::vector<T> unique_sorted(std::vector<T> v);

// Index i such that breaks[i] == x (exact or within tolerance); npos when absent.
template <class T>
std::size_t find_break(const std::vector<T>& breaks, const T& x);

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

template <class T>
PiecewiseConstant<T> operator-(const PiecewiseConstant<T>& f, const PiecewiseConstant<T>& g);

template <class T>
T integrate(const PiecewiseConstant<T>& f, const T& upper);
template <class T>
T integrate_positive_part(const PiecewiseConstant<T>& f, const T& upper);
// Continuous antiderivative vanishing at f.lower().
template <class T>
PiecewiseLinear<T> antiderivative(const PiecewiseConstant<T>& f);

// t -> inf{u : F(u) >= t} on [F(lower), F(upper)] for continuous nondecreasing F.
template <class T>
PiecewiseLinear<T> generalized_left_inverse(const PiecewiseLinear<T>& F);

// g o f; breakpoints are those of f plus the f-preimages of breakpoints of g.
template <class T>
PiecewiseLinear<T> compose(const PiecewiseLinear<T>& g, const PiecewiseLinear<T>& f);
template <class T>
PiecewiseConstant<T> compose_pc(const PiecewiseConstant<T>& g, const PiecewiseLinear<T>& f);

// One block of a monotone matching: the sub-interval (plus_lo, plus_hi] carries the same
// mass of the plus density as (minus_lo, minus_hi] carries of the minus density.
template <class T>
struct MatchBlock {
  T plus_lo, plus_hi, minus_lo, minus_hi, mass;
};

// Increasing rearrangement between the measures plus(u)du and minus(u)du on the partition
// `breaks` (densities are constant per piece). Total masses must agree.
template <class T>
std::vector<MatchBlock<T>> monotone_match(const std::vector<T>& breaks, const std::vector<T>& plus,
                                          const std::vector<T>& minus);

enum class Sign { plus, minus, zero };

// Refined partition on which the positive and negative parts of a signed density are matched
// piece-to-piece by the monotone rearrangement.
template <class T>
struct SignedMatching {
  std::vector<T> breaks;
  std::vector<std::size_t> base_piece;
  std::vector<Sign> sign;
  std::vector<std::size_t> partner;  // npos on zero pieces
  T total;                           // mass of the positive part
};

template <class T>
SignedMatching<T> match_signed(const PiecewiseConstant<T>& density);

// Maps each block endpoint pair to piece indices of a partition containing all endpoints.
template <class T>
std::size_t piece_of(const std::vector<T>& breaks, const T& lo, const T& hi);

}  // namespace mot
