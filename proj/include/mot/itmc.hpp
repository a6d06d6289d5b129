#pragma once

#include <utility>
#include <vector>

#include "mot/coupling.hpp"
#include "mot/lp.hpp"
#include "mot/piecewise.hpp"

namespace mot {

template <class T>
using Intervals = std::vector<std::pair<T, T>>;

// Quantile difference F_mu^{-1} - F_nu^{-1} on a partition refined so that the increasing
// matching phi of its positive and negative parts maps pieces onto pieces.
template <class T>
struct PsiSystem {
  std::vector<T> breaks;
  std::vector<T> qmu, qnu;  // quantile values per piece
  std::vector<Sign> sign;
  std::vector<std::size_t> partner;
  PiecewiseLinear<T> psi_plus, psi_minus, phi;
  Intervals<T> u_plus, u_minus, u_zero;
  T total;  // Psi_+(1)

  std::size_t pieces() const { return qmu.size(); }
  T length(std::size_t i) const { return breaks[i + 1] - breaks[i]; }
};

// Throws OrderError when the means differ.
template <class T>
PsiSystem<T> build_psi(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);

template <class T>
LiftedCoupling<T> itmc_kernel(const PsiSystem<T>& sys);

// Lifted and collapsed inverse transform martingale coupling; checks convex order first.
template <class T>
LiftedCoupling<T> itmc_lifted(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);
template <class T>
DiscreteCoupling<T> itmc(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);

// Probability measure on (0,1)^2 made of blocks: on each block the law is the product of the
// normalised plus density on piece u and the normalised minus density on piece v.
template <class T>
struct QBlock {
  std::size_t u, v;
  T mass;
};

template <class T>
struct QMeasure {
  std::vector<T> breaks;
  std::vector<QBlock<T>> blocks;
};

// Throws ParameterError when Q has the wrong marginals, leaves the signed pieces, or has u >= v.
template <class T>
void validate_q(const QMeasure<T>& q, const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);

// The deterministic matching u -> phi(u).
template <class T>
QMeasure<T> itmc_q(const PsiSystem<T>& sys);

template <class T>
LiftedCoupling<T> mq_kernel(const QMeasure<T>& q, const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu);

enum class QxChoice { monotone, product };

// Q whose kernel is a martingale rearrangement of the comonotone coupling. Throws DomainError for mu = nu.
template <class T>
QMeasure<T> build_Q_rearrangement(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                                  QxChoice choice = QxChoice::monotone);

}  // namespace mot
