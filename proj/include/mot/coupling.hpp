#pragma once

#include <vector>

#include "mot/measure.hpp"

namespace mot {

template <class T>
struct Point {
  T x, y, w;
};

// Finitely supported probability measure on R^2, points sorted by (x, y).
template <class T>
class DiscreteCoupling {
 public:
  explicit DiscreteCoupling(std::vector<Point<T>> points);

  const std::vector<Point<T>>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  DiscreteMeasure<T> first_marginal() const;
  DiscreteMeasure<T> second_marginal() const;

 private:
  std::vector<Point<T>> points_;
};

template <class T>
bool operator==(const DiscreteCoupling<T>& a, const DiscreteCoupling<T>& b);

template <class T>
struct KernelEntry {
  T x;
  DiscreteMeasure<T> law;
};

// x -> pi_x for every atom x of the first marginal, sorted by x.
template <class T>
class Kernel {
 public:
  explicit Kernel(std::vector<KernelEntry<T>> entries);

  const std::vector<KernelEntry<T>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const DiscreteMeasure<T>& at(const T& x) const;

 private:
  std::vector<KernelEntry<T>> entries_;
};

template <class T>
Kernel<T> disintegrate(const DiscreteCoupling<T>& pi);
template <class T>
DiscreteCoupling<T> reassemble(const DiscreteMeasure<T>& mu, const Kernel<T>& k);

template <class T>
DiscreteCoupling<T> hoeffding_frechet(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);
template <class T>
DiscreteCoupling<T> product_coupling(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);
template <class T>
DiscreteCoupling<T> diagonal_coupling(const DiscreteMeasure<T>& mu);

template <class T>
bool is_martingale(const DiscreteCoupling<T>& pi);
template <class T>
bool is_monge(const DiscreteCoupling<T>& pi);

// sum_x mu(x) |mean(pi_x) - x|: the lower bound for AW_1 against any martingale coupling.
template <class T>
T barycentre_deviation(const DiscreteCoupling<T>& pi);

// Barycentre dispersion: every upper tail sum_{x >= a} mu(x)(x - mean(pi_x)) is <= 0.
template <class T>
bool bda_atom_scan(const DiscreteCoupling<T>& pi);
// Same condition read off the integrated positive and negative parts of F_mu^{-1} - G.
template <class T>
bool bda_delta_form(const DiscreteCoupling<T>& pi);
// Returns the atom-scan answer; throws InternalError when the two forms disagree.
template <class T>
bool barycentre_dispersion(const DiscreteCoupling<T>& pi);

template <class T>
struct Segment {
  T a, b, x;
  DiscreteMeasure<T> kernel;
};

// Partition of (0, 1] into segments (a, b], each carrying a first-coordinate value and a kernel.
template <class T>
class LiftedCoupling {
 public:
  explicit LiftedCoupling(std::vector<Segment<T>> segments);

  const std::vector<Segment<T>>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  DiscreteMeasure<T> first_marginal() const;
  DiscreteMeasure<T> second_marginal() const;
  bool is_martingale() const;
  // Adjacent segments with equal x and kernel merged.
  LiftedCoupling simplified() const;
  // Segment containing u (left-continuous convention).
  const Segment<T>& at(const T& u) const;

 private:
  std::vector<Segment<T>> segments_;
};

template <class T>
bool operator==(const LiftedCoupling<T>& a, const LiftedCoupling<T>& b);

// Embedding of a coupling: one segment per jump of F_mu carrying pi_x.
template <class T>
LiftedCoupling<T> lift(const DiscreteCoupling<T>& pi);
// Lifted comonotone coupling on the merged quantile partition.
template <class T>
LiftedCoupling<T> lifted_hoeffding_frechet(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);
// Integrates the lifted coupling over u.
template <class T>
DiscreteCoupling<T> collapse(const LiftedCoupling<T>& lifted);

}  // namespace mot
