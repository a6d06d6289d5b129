#pragma once

#include <string>
#include <vector>

#include "mot/adapted.hpp"
#include "mot/itmc.hpp"

namespace mot {

template <class T>
struct MarginalPair {
  DiscreteMeasure<T> mu, nu;
};

template <class T>
struct MarginalSequence {
  std::string name;
  std::vector<MarginalPair<T>> terms;  // n = 1..N
  MarginalPair<T> limit;
  bool jump_inclusion = false;  // whether the generator is built to satisfy it
};

template <class T>
MarginalSequence<T> constant_sequence(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu, std::size_t n);

// mu_n = (d_{-1-h} + d_{1+h})/2, nu_n = (d_{-2-h} + d_{-1} + d_1 + d_{2+h})/4 with h = 1 / (h_denominator * n^power).
template <class T>
MarginalSequence<T> jump_sequence(std::size_t n, unsigned power = 2, long h_denominator = 2);

// mu_n: k-point midpoint grid of U(-1/n, 1/n); nu: k-point midpoint grid of U(-1, 1); mu = delta_0.
template <class T>
MarginalSequence<T> counterexample_sequence(std::size_t k, std::size_t n);

struct StabilityRow {
  std::size_t n = 0;
  double aw_lifted = 0.0;  // diagonal coupling in u, an upper bound on the lifted distance
  double aw = 0.0;
  double w_mu = 0.0;
  double w_nu = 0.0;
  bool martingale_ok = false;
};

// Throws OrderError when a term is not in convex order.
template <class T>
std::vector<StabilityRow> stability_run(const MarginalSequence<T>& seq, const Exponent& rho);

template <class T>
bool jump_inclusion_check(const MarginalSequence<T>& seq);

// W_1 between a discrete measure and the uniform law on (lo, hi).
template <class T>
T w1_to_uniform(const DiscreteMeasure<T>& eta, const T& lo, const T& hi);

struct CounterexampleReport {
  std::vector<StabilityRow> rows;
  double gap = 0.0;              // W_1(U(-1,1), grid) = c / k
  double c = 0.0;
  double bound = 0.0;            // 1/4 - gap
  double two_point_floor = 0.0;  // min of W_1(p d_a + (1-p) d_b, grid) over the scanned (p, a, b)
  double min_aw = 0.0;
  bool holds = false;
};

// Throws ScaleError for k < 8.
template <class T>
CounterexampleReport counterexample_run(std::size_t k, std::size_t n);

struct DensityReport {
  double max_residual = 0.0;
  double sup_two_q_minus_one = 0.0;
  double expected_sup = 0.0;
  std::size_t points = 0;
};

double density_f(double y);
double density_q(double y);
DensityReport density_identity_check(const std::vector<double>& grid);
std::vector<double> uniform_grid(double lo, double hi, double step);

std::string stability_csv(const std::vector<StabilityRow>& rows);

}  // namespace mot
