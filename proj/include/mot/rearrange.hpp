#pragma once

#include <optional>
#include <vector>

#include "mot/itmc.hpp"

namespace mot {

template <class T>
struct BetaInput {
  T y, y_tilde;
  DiscreteMeasure<T> mu, mu_tilde;
};

template <class T>
struct BetaOutput {
  DiscreteMeasure<T> nu, nu_tilde;
  T p;       // weight of the left pair in the mixing identity
  T q_star;  // root of the piecewise-linear mean equation
};

// Requires mean(mu) < y <= y_tilde < mean(mu_tilde); throws PreconditionError otherwise.
// Output: mean(nu) = y, mean(nu_tilde) = y_tilde, mu <=st nu, nu_tilde <=st mu_tilde and
// p nu + (1 - p) nu_tilde = p mu + (1 - p) mu_tilde.
template <class T>
BetaOutput<T> beta_surgery(const BetaInput<T>& in);

// Kernel barycentres against the first-coordinate quantile, matched by the increasing map phi.
template <class T>
struct DeltaSystem {
  PiecewiseConstant<T> g;  // u -> mean(pi at F_mu^{-1}(u)) on mu's quantile partition
  PiecewiseLinear<T> delta_plus, delta_minus, phi;
  std::vector<T> breaks;  // refined partition
  std::vector<T> qmu, gval;
  std::vector<Sign> sign;
  std::vector<std::size_t> partner;
  std::vector<T> p;  // per refined piece; 0 on zero pieces
  Intervals<T> u_plus, u_minus, u_zero, a_plus, a_minus;
};

// Throws PreconditionError when the barycentre dispersion condition fails.
template <class T>
DeltaSystem<T> build_delta(const DiscreteCoupling<T>& pi);

template <class T>
struct Rearrangement {
  DiscreteCoupling<T> coupling;
  LiftedCoupling<T> lifted;
};

template <class T>
Rearrangement<T> rearrange(const DiscreteCoupling<T>& pi);

template <class T>
struct SwitchResult {
  DiscreteCoupling<T> coupling;
  std::size_t iterations;
};

// Finite-support switching: repeatedly moves mass between an over-shooting and an
// under-shooting atom until every kernel is centred.
template <class T>
SwitchResult<T> wiesel_switch(const DiscreteCoupling<T>& pi, std::size_t max_iterations = 1'000'000);

}  // namespace mot
