#include "mot/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mot/kernels.hpp"

namespace mot {

template <class T>
MarginalSequence<T> constant_sequence(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu, std::size_t n) {
  MarginalSequence<T> s{"constant", {}, {mu, nu}, true};
  for (std::size_t i = 0; i < n; ++i) s.terms.push_back({mu, nu});
  return s;
}

template <class T>
MarginalSequence<T> jump_sequence(std::size_t n, unsigned power, long h_denominator) {
  auto pair = [](const T& h) {
    const T half(T(1) / T(2)), quarter(T(1) / T(4));
    return MarginalPair<T>{
        DiscreteMeasure<T>({{T(-1 - h), half}, {T(1 + h), half}}),
        DiscreteMeasure<T>({{T(-2 - h), quarter}, {T(-1), quarter}, {T(1), quarter}, {T(2 + h), quarter}})};
  };
  MarginalSequence<T> s{"jump", {}, pair(T(0)), true};
  for (std::size_t i = 1; i <= n; ++i) {
    T denom(h_denominator);
    for (unsigned p = 0; p < power; ++p) denom *= T(static_cast<long>(i));
    s.terms.push_back(pair(T(T(1) / denom)));
  }
  return s;
}

namespace {

template <class T>
DiscreteMeasure<T> midpoint_grid(const T& half_width, std::size_t k) {
  std::vector<Atom<T>> a;
  const T kk(static_cast<long>(k));
  for (std::size_t i = 1; i <= k; ++i)
    a.push_back({T(half_width * (T(-1) + T(static_cast<long>(2 * i - 1)) / kk)), T(T(1) / kk)});
  return DiscreteMeasure<T>(std::move(a));
}

template <class T>
double root(const T& v, const Exponent& rho) {
  const double d = std::max(0.0, num::to_double(v));
  return rho.is_integer() && rho.integer() == 1 ? d : std::pow(d, 1.0 / rho.value());
}

}  // namespace

template <class T>
MarginalSequence<T> counterexample_sequence(std::size_t k, std::size_t n) {
  if (k < 8) throw ScaleError("the counterexample grid needs k >= 8");
  const DiscreteMeasure<T> nu = midpoint_grid(T(1), k);
  MarginalSequence<T> s{"counterexample", {}, {DiscreteMeasure<T>::dirac(T(0)), nu}, false};
  for (std::size_t i = 1; i <= n; ++i) s.terms.push_back({midpoint_grid(T(T(1) / T(static_cast<long>(i))), k), nu});
  return s;
}

template <class T>
std::vector<StabilityRow> stability_run(const MarginalSequence<T>& seq, const Exponent& rho) {
  const LiftedCoupling<T> lim_lifted = itmc_lifted(seq.limit.mu, seq.limit.nu);
  const DiscreteCoupling<T> lim = collapse(lim_lifted);
  std::vector<StabilityRow> rows;
  for (std::size_t i = 0; i < seq.terms.size(); ++i) {
    const auto& t = seq.terms[i];
    const LiftedCoupling<T> lifted = itmc_lifted(t.mu, t.nu);
    const DiscreteCoupling<T> m = collapse(lifted);
    StabilityRow r;
    r.n = i + 1;
    r.aw_lifted = root(lifted_diagonal_bound(lifted, lim_lifted, rho), rho);
    r.aw = adapted_wasserstein(m, lim, rho).distance;
    r.w_mu = wasserstein(t.mu, seq.limit.mu, rho);
    r.w_nu = wasserstein(t.nu, seq.limit.nu, rho);
    r.martingale_ok = is_martingale(m) && m.first_marginal() == t.mu && m.second_marginal() == t.nu;
    rows.push_back(r);
  }
  return rows;
}

template <class T>
bool jump_inclusion_check(const MarginalSequence<T>& seq) {
  if (seq.terms.empty()) return false;
  const DiscreteMeasure<T>& mu = seq.limit.mu;
  const DiscreteMeasure<T>& mn = seq.terms.back().mu;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const T lo = i == 0 ? T(0) : mu.cumulative()[i - 1], hi = mu.cumulative()[i];
    T best(0);
    for (std::size_t j = 0; j < mn.size(); ++j) {
      const T lo_n = j == 0 ? T(0) : mn.cumulative()[j - 1], hi_n = mn.cumulative()[j];
      const T overlap = (hi < hi_n ? hi : hi_n) - (lo < lo_n ? lo_n : lo);
      if (best < overlap) best = overlap;
    }
    if (!num::eq(best, mu.w(i))) return false;
  }
  return true;
}

template <class T>
T w1_to_uniform(const DiscreteMeasure<T>& eta, const T& lo, const T& hi) {
  if (!(lo < hi)) throw DomainError("uniform law needs lo < hi");
  const T width = hi - lo;
  T total(0), c0(0);
  for (std::size_t i = 0; i < eta.size(); ++i) {
    const T c1 = eta.cumulative()[i];
    const T& x = eta.x(i);
    const T l0 = lo + width * c0, l1 = lo + width * c1;
    if (!(l0 < x))
      total += ((l0 + l1) / T(2) - x) * (c1 - c0);
    else if (!(x < l1))
      total += (x - (l0 + l1) / T(2)) * (c1 - c0);
    else {
      const T u = (x - lo) / width;
      total += ((x - l0) * (u - c0) + (l1 - x) * (c1 - u)) / T(2);
    }
    c0 = c1;
  }
  return total;
}

template <class T>
CounterexampleReport counterexample_run(std::size_t k, std::size_t n) {
  const MarginalSequence<T> seq = counterexample_sequence<T>(k, n);
  CounterexampleReport rep;
  rep.rows = stability_run(seq, Exponent(1));
  const DiscreteMeasure<T>& nu = seq.limit.nu;
  rep.gap = num::to_double(w1_to_uniform(nu, T(-1), T(1)));
  rep.c = rep.gap * static_cast<double>(k);
  rep.bound = 0.25 - rep.gap;
  rep.min_aw = rep.rows.empty() ? 0.0 : rep.rows.front().aw;
  for (const auto& r : rep.rows) rep.min_aw = std::min(rep.min_aw, r.aw);

  // Two-point laws p d_a + (1-p) d_b on a coarse (p, a, b) grid, always in double.
  std::vector<double> nx, nw;
  for (const auto& a : nu.atoms()) {
    nx.push_back(num::to_double(a.x));
    nw.push_back(num::to_double(a.w));
  }
  const DiscreteMeasure<double> nud([&] {
    std::vector<Atom<double>> v;
    for (std::size_t i = 0; i < nx.size(); ++i) v.push_back({nx[i], nw[i]});
    return v;
  }());
  rep.two_point_floor = 1.0;
  for (int ip = 1; ip <= 20; ++ip) {
    const double p = ip / 20.0;
    for (int ia = -20; ia <= 20; ++ia)
      for (int ib = ia; ib <= 20; ++ib) {
        const double a = ia / 20.0, b = ib / 20.0;
        std::vector<Atom<double>> tp{{a, p}};
        if (p < 1.0) tp.push_back({b, 1.0 - p});
        const double w = wasserstein(DiscreteMeasure<double>(combine_atoms(tp)), nud, Exponent(1));
        rep.two_point_floor = std::min(rep.two_point_floor, w);
      }
  }
  const double band = rep.bound - tolerance();
  rep.holds = rep.min_aw >= band && rep.two_point_floor >= band;
  return rep;
}

double density_f(double y) {
  const double e = std::exp(1.0), a = std::fabs(y);
  if (a >= 1.0) return (1.0 + e) / 6.0 * std::exp(-a);
  return (std::exp(-a) + 1.0) / 6.0;
}

double density_q(double y) {
  const double e = std::exp(1.0);
  if (y <= -1.0) return e / (1.0 + e);
  if (y >= 1.0) return 1.0 / (1.0 + e);
  return 1.0 / (1.0 + std::exp(y));
}

DensityReport density_identity_check(const std::vector<double>& grid) {
  const std::size_t n = grid.size();
  std::vector<double> qa(n), fa(n), qb(n), fb(n), fc(n);
  DensityReport rep;
  rep.points = n;
  rep.expected_sup = (std::exp(1.0) - 1.0) / (std::exp(1.0) + 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = grid[i];
    qa[i] = density_q(y - 1.0);
    fa[i] = density_f(y - 1.0);
    qb[i] = density_q(y + 1.0);
    fb[i] = density_f(y + 1.0);
    fc[i] = density_f(y);
    rep.sup_two_q_minus_one = std::max(rep.sup_two_q_minus_one, std::fabs(2.0 * density_q(y) - 1.0));
  }
  rep.max_residual = kernels::max_abs_residual(qa.data(), fa.data(), qb.data(), fb.data(), fc.data(), n);
  return rep;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw DomainError("grid needs step > 0 and lo <= hi");
  const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step));
  std::vector<double> g(count + 1);
  for (std::size_t i = 0; i <= count; ++i) g[i] = lo + static_cast<double>(i) * step;
  return g;
}

std::string stability_csv(const std::vector<StabilityRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "n,aw1_lifted,aw1,w1_mu,w1_nu\n";
  for (const auto& r : rows) os << r.n << ',' << r.aw_lifted << ',' << r.aw << ',' << r.w_mu << ',' << r.w_nu << '\n';
  return os.str();
}

#define MOT_INSTANTIATE(T)                                                                                    \
  template MarginalSequence<T> constant_sequence(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&, std::size_t); \
  template MarginalSequence<T> jump_sequence(std::size_t, unsigned, long);                                    \
  template MarginalSequence<T> counterexample_sequence(std::size_t, std::size_t);                            \
  template std::vector<StabilityRow> stability_run(const MarginalSequence<T>&, const Exponent&);              \
  template bool jump_inclusion_check(const MarginalSequence<T>&);                                             \
  template T w1_to_uniform(const DiscreteMeasure<T>&, const T&, const T&);                                    \
  template CounterexampleReport counterexample_run<T>(std::size_t, std::size_t);

MOT_INSTANTIATE(Rational)
MOT_INSTANTIATE(double)

}  // namespace mot
