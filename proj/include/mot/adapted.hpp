#pragma once

#include <vector>

#include "mot/coupling.hpp"
#include "mot/transport.hpp"

namespace mot {

template <class T>
struct AwResult {
  T cost = T(0);          // AW_rho^rho
  double distance = 0.0;  // AW_rho
  std::vector<T> xs, xs_other;
  TransportPlan<T> plan;  // outer coupling between the first marginals
};

// Outer OT between first marginals with cost |x - x'|^rho + W_rho^rho(pi_x, pi'_x').
template <class T>
AwResult<T> adapted_wasserstein(const DiscreteCoupling<T>& pi, const DiscreteCoupling<T>& other, const Exponent& rho);

// Minimum over bicausal couplings of the two joint laws, solved as one LP; only for small supports.
template <class T>
T nested_wasserstein_bruteforce(const DiscreteCoupling<T>& pi, const DiscreteCoupling<T>& other,
                                const Exponent& rho);
inline constexpr std::size_t kNestedAtomLimit = 5;

template <class T>
struct LiftedAwResult {
  T value = T(0);  // best upper bound on the lifted AW_rho^rho
  T lower = T(0);
  T upper = T(0);
  bool exact = false;
  std::size_t refinements = 0;
};

struct LiftedAwOptions {
  std::size_t max_refinements = 3;
  std::size_t max_segments = 256;
};

// Cost of the identity coupling in u on the common refinement; always an upper bound.
template <class T>
T lifted_diagonal_bound(const LiftedCoupling<T>& a, const LiftedCoupling<T>& b, const Exponent& rho);

// Segment-level OT without the |u - u'|^rho term; always a lower bound.
template <class T>
T lifted_segment_lower_bound(const LiftedCoupling<T>& a, const LiftedCoupling<T>& b, const Exponent& rho);

// Bounds the lifted AW_rho^rho from both sides; when they meet the value is exact. Otherwise the
// upper bound is tightened by block-product couplings on bisected segments.
template <class T>
LiftedAwResult<T> lifted_adapted_wasserstein(const LiftedCoupling<T>& a, const LiftedCoupling<T>& b,
                                             const Exponent& rho, const LiftedAwOptions& opts = {});

struct RhoEquivalence {
  bool aw_rho_vanishes = false;
  bool aw1_and_marginals_vanish = false;
  bool consistent() const { return aw_rho_vanishes == aw1_and_marginals_vanish; }
};

// Reads off convergence at the tail of the sequence: a quantity "vanishes" when its last value is <= eps.
template <class T>
RhoEquivalence aw_rho_equivalence_check(const std::vector<DiscreteCoupling<T>>& sequence,
                                        const DiscreteCoupling<T>& limit, const Exponent& rho, double eps = 1e-2);

}  // namespace mot
