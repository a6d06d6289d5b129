#include "mot/rearrange.hpp"

#include <algorithm>

namespace mot {

template <class T>
BetaOutput<T> beta_surgery(const BetaInput<T>& in) {
  const T x = mean(in.mu), xt = mean(in.mu_tilde);
  const T &y = in.y, &yt = in.y_tilde;
  if (!(num::lt(x, y) && num::le(y, yt) && num::lt(yt, xt)))
    throw PreconditionError("quantile surgery needs mean(mu) < y <= y_tilde < mean(mu_tilde)");
  const T p = (xt - yt) / (y - x + xt - yt);
  const T one(1);
  const T qmax = p < one - p ? p : T(one - p);
  const bool left = num::le(p, T(one / 2));

  // Mean of nu (p <= 1/2) or of nu_tilde (p > 1/2) as a function of q; affine between candidates.
  auto f = [&](const T& q) -> T {
    const T upper_t = (one - p - q) / (one - p);
    if (left)
      return (one - p) / p * quantile_integral(in.mu_tilde, upper_t, one) + quantile_integral(in.mu, T(q / p), one) - y;
    return p / (one - p) * quantile_integral(in.mu, T(0), T(q / p)) + quantile_integral(in.mu_tilde, T(0), upper_t) - yt;
  };
  std::vector<T> cand{T(0), qmax};
  for (const T& c : in.mu.cumulative()) cand.push_back(p * c);
  for (const T& c : in.mu_tilde.cumulative()) cand.push_back((one - p) * (one - c));
  cand.erase(std::remove_if(cand.begin(), cand.end(), [&](const T& q) { return q < T(0) || qmax < q; }),
             cand.end());
  cand = unique_sorted(std::move(cand));

  T q_star(0);
  bool found = false;
  T f_prev = f(cand.front());
  if (num::is_zero(f_prev)) found = true;
  for (std::size_t k = 1; k < cand.size() && !found; ++k) {
    const T f_cur = f(cand[k]);
    if (num::is_zero(f_cur)) {
      q_star = cand[k];
      found = true;
    } else if (num::sign(f_cur) != num::sign(f_prev)) {
      q_star = cand[k - 1] + (cand[k] - cand[k - 1]) * (-f_prev) / (f_cur - f_prev);
      found = true;
    }
    f_prev = f_cur;
  }
  if (!found) throw InternalError("no root for the quantile surgery mean equation");

  const T cut_t = (one - p - q_star) / (one - p);  // = 1 - q*/(1-p)
  const T cut = q_star / p;
  std::vector<Atom<T>> nu, nut;
  for (auto a : quantile_image(in.mu_tilde, cut_t, one)) nu.push_back({a.x, T((one - p) / p * a.w)});
  for (auto a : quantile_image(in.mu, cut, one)) nu.push_back(a);
  for (auto a : quantile_image(in.mu, T(0), cut)) nut.push_back({a.x, T(p / (one - p) * a.w)});
  for (auto a : quantile_image(in.mu_tilde, T(0), cut_t)) nut.push_back(a);
  return {DiscreteMeasure<T>(combine_atoms(std::move(nu))), DiscreteMeasure<T>(combine_atoms(std::move(nut))), p,
          q_star};
}

namespace {

template <class T>
Intervals<T> runs(const std::vector<T>& breaks, const std::vector<Sign>& sign, Sign which) {
  Intervals<T> out;
  for (std::size_t i = 0; i < sign.size(); ++i) {
    if (sign[i] != which) continue;
    if (!out.empty() && out.back().second == breaks[i])
      out.back().second = breaks[i + 1];
    else
      out.emplace_back(breaks[i], breaks[i + 1]);
  }
  return out;
}

}  // namespace

template <class T>
DeltaSystem<T> build_delta(const DiscreteCoupling<T>& pi) {
  const DiscreteMeasure<T> mu = pi.first_marginal();
  require_convex_order(mu, pi.second_marginal());
  if (!barycentre_dispersion(pi)) throw PreconditionError("the coupling violates barycentre dispersion");
  const Kernel<T> k = disintegrate(pi);
  std::vector<T> means, diff;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    means.push_back(mean(k.entries()[i].law));
    diff.push_back(mu.x(i) - means.back());
  }
  const std::vector<T> qb = mu.quantile_breaks();
  const PiecewiseConstant<T> d(qb, diff);
  const SignedMatching<T> sm = match_signed(d);

  DeltaSystem<T> ds{PiecewiseConstant<T>(qb, means),
                    antiderivative(d.positive_part()),
                    antiderivative(d.negative_part()),
                    PiecewiseLinear<T>::identity(T(0), T(1)),
                    sm.breaks,
                    mu.quantile_fn().values_on(sm.breaks),
                    {},
                    sm.sign,
                    sm.partner,
                    {},
                    {},
                    {},
                    {},
                    {},
                    {}};
  ds.gval = ds.g.values_on(ds.breaks);
  std::vector<T> left, right;
  for (std::size_t i = 0; i < ds.sign.size(); ++i) {
    if (ds.sign[i] == Sign::zero) {
      ds.p.push_back(T(0));
      left.push_back(ds.breaks[i]);
      right.push_back(ds.breaks[i + 1]);
      continue;
    }
    const std::size_t j = ds.partner[i];
    const T here = num::abs(T(ds.qmu[i] - ds.gval[i])), there = num::abs(T(ds.qmu[j] - ds.gval[j]));
    ds.p.push_back(there / (here + there));
    left.push_back(ds.breaks[j]);
    right.push_back(ds.breaks[j + 1]);
    if (ds.sign[i] == Sign::plus) {
      const bool chain = num::lt(ds.gval[i], ds.qmu[i]) && num::le(ds.qmu[i], ds.qmu[j]) &&
                         num::lt(ds.qmu[j], ds.gval[j]) && ds.breaks[i + 1] <= ds.breaks[j];
      if (!chain) throw InternalError("matched pieces break the ordering required for quantile surgery");
    }
  }
  ds.phi = PiecewiseLinear<T>(ds.breaks, left, right);
  ds.u_plus = runs(ds.breaks, ds.sign, Sign::plus);
  ds.u_minus = runs(ds.breaks, ds.sign, Sign::minus);
  ds.u_zero = runs(ds.breaks, ds.sign, Sign::zero);
  ds.a_plus = ds.u_plus;
  ds.a_minus = ds.u_minus;
  return ds;
}

template <class T>
Rearrangement<T> rearrange(const DiscreteCoupling<T>& pi) {
  const DiscreteMeasure<T> mu = pi.first_marginal(), nu = pi.second_marginal();
  if (mu == nu) {
    auto diag = diagonal_coupling(mu);
    return {diag, lift(diag)};
  }
  const DeltaSystem<T> ds = build_delta(pi);
  const Kernel<T> k = disintegrate(pi);
  const std::size_t n = ds.sign.size();
  std::vector<std::optional<DiscreteMeasure<T>>> kern(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (ds.sign[i] == Sign::zero) {
      kern[i] = k.at(ds.qmu[i]);
    } else if (ds.sign[i] == Sign::plus) {
      const std::size_t j = ds.partner[i];
      BetaOutput<T> out = beta_surgery(BetaInput<T>{ds.qmu[i], ds.qmu[j], k.at(ds.qmu[i]), k.at(ds.qmu[j])});
      if (!num::eq(out.p, ds.p[i])) throw InternalError("surgery weight disagrees with the matching weight");
      kern[i] = std::move(out.nu);
      kern[j] = std::move(out.nu_tilde);
    }
  }
  std::vector<Segment<T>> segs;
  for (std::size_t i = 0; i < n; ++i) {
    if (!kern[i]) throw InternalError("a matched piece received no kernel");
    segs.push_back({ds.breaks[i], ds.breaks[i + 1], ds.qmu[i], *kern[i]});
  }
  LiftedCoupling<T> lifted = LiftedCoupling<T>(std::move(segs)).simplified();
  return {collapse(lifted), lifted};
}

template <class T>
SwitchResult<T> wiesel_switch(const DiscreteCoupling<T>& pi, std::size_t max_iterations) {
  if (!barycentre_dispersion(pi)) throw PreconditionError("the coupling violates barycentre dispersion");
  std::vector<T> xs, ys;
  for (const auto& pt : pi.points()) {
    xs.push_back(pt.x);
    ys.push_back(pt.y);
  }
  xs = unique_sorted(std::move(xs));
  ys = unique_sorted(std::move(ys));
  const std::size_t nx = xs.size(), ny = ys.size();
  Matrix<T> w(nx, ny);
  for (const auto& pt : pi.points()) w(find_break(xs, pt.x), find_break(ys, pt.y)) += pt.w;

  std::size_t it = 0;
  std::vector<T> dev(nx);
  for (;; ++it) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < nx; ++i) {
      dev[i] = T(0);
      for (std::size_t j = 0; j < ny; ++j) dev[i] += w(i, j) * (xs[i] - ys[j]);
      if (!num::is_zero(dev[i])) active.push_back(i);
    }
    if (active.empty()) break;
    if (it >= max_iterations) throw InternalError("switching did not terminate within the iteration cap");
    // First adjacent (over, under) pair among the off-centre atoms; switching it keeps dispersion.
    std::size_t lo = npos, hi = npos;
    for (std::size_t t = 0; t + 1 < active.size(); ++t)
      if (dev[active[t]] > T(0) && dev[active[t + 1]] < T(0)) {
        lo = active[t];
        hi = active[t + 1];
        break;
      }
    if (lo == npos) throw InternalError("no admissible switch although kernels are off-centre");
    std::size_t jl = 0, jh = ny - 1;
    while (jl < ny && num::is_zero(w(lo, jl))) ++jl;
    while (jh > 0 && num::is_zero(w(hi, jh))) --jh;
    if (jl >= ny || !(ys[jl] < ys[jh])) throw InternalError("switch endpoints are not ordered");
    const T gap = ys[jh] - ys[jl];
    T lambda = std::min({w(lo, jl), w(hi, jh), T(dev[lo] / gap), T(-dev[hi] / gap)});
    w(lo, jl) -= lambda;
    w(lo, jh) += lambda;
    w(hi, jh) -= lambda;
    w(hi, jl) += lambda;
    for (T* cell : {&w(lo, jl), &w(hi, jh)})
      if (num::is_zero(*cell)) *cell = T(0);
  }
  std::vector<Point<T>> pts;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      if (!num::is_zero(w(i, j))) pts.push_back({xs[i], ys[j], w(i, j)});
  return {DiscreteCoupling<T>(std::move(pts)), it};
}

#define MOT_INSTANTIATE(T)                                                  \
  template BetaOutput<T> beta_surgery(const BetaInput<T>&);                 \
  template DeltaSystem<T> build_delta(const DiscreteCoupling<T>&);          \
  template Rearrangement<T> rearrange(const DiscreteCoupling<T>&);          \
  template SwitchResult<T> wiesel_switch(const DiscreteCoupling<T>&, std::size_t);

MOT_INSTANTIATE(Rational)
MOT_INSTANTIATE(double)

}  // namespace mot
