#pragma once

#include <optional>
#include <vector>

#include "mot/piecewise.hpp"
#include "mot/scalar.hpp"

namespace mot {

template <class T>
struct Atom {
  T x;
  T w;
};

// Sorts by location, merges equal (or tolerance-close) locations and drops zero weights.
template <class T>
std::vector<Atom<T>> combine_atoms(std::vector<Atom<T>> atoms);

// Finitely supported probability measure on the real line.
template <class T>
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<Atom<T>> atoms);
  static DiscreteMeasure dirac(const T& x);

  const std::vector<Atom<T>>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const T& x(std::size_t i) const { return atoms_[i].x; }
  const T& w(std::size_t i) const { return atoms_[i].w; }
  const T& min() const { return atoms_.front().x; }
  const T& max() const { return atoms_.back().x; }

  // F(x_i) for every atom; the last entry is exactly 1.
  const std::vector<T>& cumulative() const { return cumulative_; }
  // Quantile breakpoints 0 = c_0 < c_1 < ... < c_m = 1.
  std::vector<T> quantile_breaks() const;

  T cdf(const T& x) const;
  T cdf_left(const T& x) const;
  T mass(const T& x) const;
  T quantile(const T& u) const;
  PiecewiseConstant<T> quantile_fn() const;
  std::optional<std::size_t> index_of(const T& x) const;

 private:
  std::vector<Atom<T>> atoms_;
  std::vector<T> cumulative_;
};

template <class T>
bool operator==(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b);

template <class T>
T mean(const DiscreteMeasure<T>& eta);
template <class T>
T abs_moment(const DiscreteMeasure<T>& eta, const Exponent& rho);
template <class T>
T potential(const DiscreteMeasure<T>& eta, const T& x);

// Common refinement of two quantile functions: pieces (lo, hi] with both quantile values.
template <class T>
struct QuantilePiece {
  T lo, hi, a, b;
};
template <class T>
std::vector<QuantilePiece<T>> quantile_pieces(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b);

// Unnormalised image of Lebesgue measure on (lo, hi] under the quantile function.
template <class T>
std::vector<Atom<T>> quantile_image(const DiscreteMeasure<T>& eta, const T& lo, const T& hi);
// Integral of the quantile function over (lo, hi].
template <class T>
T quantile_integral(const DiscreteMeasure<T>& eta, const T& lo, const T& hi);

// W_rho^rho via the quantile formula (exact for integer rho in exact mode).
template <class T>
T wasserstein_pow(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b, const Exponent& rho);
// W_rho itself; only the rho = 1 case is exact, so the result is a double.
template <class T>
double wasserstein(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b, const Exponent& rho);

template <class T>
struct ConvexOrderCheck {
  bool holds = false;
  bool means_equal = false;
  std::optional<T> violating_point;
};

template <class T>
ConvexOrderCheck<T> check_convex_order(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);
template <class T>
bool convex_order(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);
// Throws OrderError naming the first violation.
template <class T>
void require_convex_order(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);

enum class StochasticOrder { less, greater, incomparable, equal };

template <class T>
StochasticOrder stochastic_order(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);

const char* to_string(StochasticOrder o);

}  // namespace mot
