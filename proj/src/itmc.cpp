#include "mot/itmc.hpp"

#include <algorithm>

namespace mot {

namespace {

template <class T>
Intervals<T> merge_intervals(const std::vector<T>& breaks, const std::vector<Sign>& sign, Sign which) {
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

template <class T>
Sign sign_of(const T& d) {
  const int s = num::sign(d);
  return s > 0 ? Sign::plus : (s < 0 ? Sign::minus : Sign::zero);
}

// Two-point martingale kernel at level `x` between `here` (the own quantile) and `there`.
template <class T>
std::vector<Atom<T>> two_point(const T& x, const T& here, const T& there, const T& weight) {
  const T den = there - here;
  if (num::is_zero(den)) throw InternalError("matched pieces share the same quantile value");
  const T p = (x - here) / den;
  if (num::lt(p, T(0)) || num::lt(T(1), p)) throw InternalError("two-point kernel weight outside [0, 1]");
  return {{there, T(weight * p)}, {here, T(weight * (T(1) - p))}};
}

template <class T>
struct PieceData {
  std::vector<T> qmu, qnu, plus, minus;
  T total = T(0);
};

template <class T>
PieceData<T> piece_data(const std::vector<T>& breaks, const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  PieceData<T> pd;
  pd.qmu = mu.quantile_fn().values_on(breaks);
  pd.qnu = nu.quantile_fn().values_on(breaks);
  for (std::size_t i = 0; i < pd.qmu.size(); ++i) {
    const T d = pd.qmu[i] - pd.qnu[i];
    const int s = num::sign(d);
    pd.plus.push_back(s > 0 ? d : T(0));
    pd.minus.push_back(s < 0 ? T(-d) : T(0));
    pd.total += pd.plus.back() * (breaks[i + 1] - breaks[i]);
  }
  return pd;
}

}  // namespace

template <class T>
PsiSystem<T> build_psi(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  if (!num::eq(mean(mu), mean(nu))) throw OrderError("the two measures have different means");
  std::vector<T> br{T(0)};
  std::vector<T> d;
  for (const auto& p : quantile_pieces(mu, nu)) {
    br.push_back(p.hi);
    d.push_back(p.a - p.b);
  }
  const SignedMatching<T> sm = match_signed(PiecewiseConstant<T>(br, d));
  PsiSystem<T> sys{sm.breaks, {}, {}, sm.sign, sm.partner,
                   PiecewiseLinear<T>::identity(T(0), T(1)), PiecewiseLinear<T>::identity(T(0), T(1)),
                   PiecewiseLinear<T>::identity(T(0), T(1)), {}, {}, {}, sm.total};
  sys.qmu = mu.quantile_fn().values_on(sys.breaks);
  sys.qnu = nu.quantile_fn().values_on(sys.breaks);
  std::vector<T> plus, minus, left, right;
  for (std::size_t i = 0; i < sys.pieces(); ++i) {
    const T diff = sys.qmu[i] - sys.qnu[i];
    plus.push_back(sys.sign[i] == Sign::plus ? diff : T(0));
    minus.push_back(sys.sign[i] == Sign::minus ? T(-diff) : T(0));
    if (sys.sign[i] == Sign::zero) {
      left.push_back(sys.breaks[i]);
      right.push_back(sys.breaks[i + 1]);
    } else {
      const std::size_t j = sys.partner[i];
      left.push_back(sys.breaks[j]);
      right.push_back(sys.breaks[j + 1]);
    }
  }
  sys.psi_plus = antiderivative(PiecewiseConstant<T>(sys.breaks, plus));
  sys.psi_minus = antiderivative(PiecewiseConstant<T>(sys.breaks, minus));
  sys.phi = PiecewiseLinear<T>(sys.breaks, left, right);
  sys.u_plus = merge_intervals(sys.breaks, sys.sign, Sign::plus);
  sys.u_minus = merge_intervals(sys.breaks, sys.sign, Sign::minus);
  sys.u_zero = merge_intervals(sys.breaks, sys.sign, Sign::zero);
  return sys;
}

template <class T>
LiftedCoupling<T> itmc_kernel(const PsiSystem<T>& sys) {
  std::vector<Segment<T>> segs;
  for (std::size_t i = 0; i < sys.pieces(); ++i) {
    std::vector<Atom<T>> k;
    if (sys.sign[i] == Sign::zero)
      k.push_back({sys.qnu[i], T(1)});
    else
      k = two_point(sys.qmu[i], sys.qnu[i], sys.qnu[sys.partner[i]], T(1));
    segs.push_back({sys.breaks[i], sys.breaks[i + 1], sys.qmu[i], DiscreteMeasure<T>(std::move(k))});
  }
  return LiftedCoupling<T>(std::move(segs)).simplified();
}

template <class T>
LiftedCoupling<T> itmc_lifted(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  require_convex_order(mu, nu);
  return itmc_kernel(build_psi(mu, nu));
}

template <class T>
DiscreteCoupling<T> itmc(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  return collapse(itmc_lifted(mu, nu));
}

template <class T>
void validate_q(const QMeasure<T>& q, const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  const auto& br = q.breaks;
  if (br.size() < 2 || !num::is_zero(br.front()) || !num::eq(br.back(), T(1)))
    throw ParameterError("Q partition must span [0, 1]");
  for (std::size_t i = 0; i + 1 < br.size(); ++i)
    if (!(br[i] < br[i + 1])) throw ParameterError("Q partition is not increasing");
  const PieceData<T> pd = piece_data(br, mu, nu);
  if (num::is_zero(pd.total)) throw ParameterError("Q is undefined when the quantile functions agree");
  const std::size_t n = pd.qmu.size();
  std::vector<T> row(n, T(0)), col(n, T(0));
  for (const auto& b : q.blocks) {
    if (b.u >= n || b.v >= n) throw ParameterError("Q block refers to a missing piece");
    if (num::lt(b.mass, T(0))) throw ParameterError("Q block with negative mass");
    if (num::is_zero(pd.plus[b.u]) || num::is_zero(pd.minus[b.v]))
      throw ParameterError("Q block outside the support of its marginals");
    if (br[b.v] < br[b.u + 1]) throw ParameterError("Q must charge only u < v");
    row[b.u] += b.mass;
    col[b.v] += b.mass;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const T len = br[i + 1] - br[i];
    if (!num::eq(row[i], T(pd.plus[i] * len / pd.total)))
      throw ParameterError("Q first marginal differs from the normalised plus part");
    if (!num::eq(col[i], T(pd.minus[i] * len / pd.total)))
      throw ParameterError("Q second marginal differs from the normalised minus part");
  }
}

template <class T>
QMeasure<T> itmc_q(const PsiSystem<T>& sys) {
  QMeasure<T> q{sys.breaks, {}};
  for (std::size_t i = 0; i < sys.pieces(); ++i)
    if (sys.sign[i] == Sign::plus)
      q.blocks.push_back({i, sys.partner[i], T((sys.qmu[i] - sys.qnu[i]) * sys.length(i) / sys.total)});
  return q;
}

template <class T>
LiftedCoupling<T> mq_kernel(const QMeasure<T>& q, const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  validate_q(q, mu, nu);
  const auto& br = q.breaks;
  const PieceData<T> pd = piece_data(br, mu, nu);
  const std::size_t n = pd.qmu.size();
  std::vector<std::vector<Atom<T>>> kern(n);
  std::vector<T> weight(n, T(0));
  for (const auto& b : q.blocks) {
    if (num::is_zero(b.mass)) continue;
    auto add = [&](std::size_t self, std::size_t other) {
      auto k = two_point(pd.qmu[self], pd.qnu[self], pd.qnu[other], b.mass);
      kern[self].insert(kern[self].end(), k.begin(), k.end());
      weight[self] += b.mass;
    };
    add(b.u, b.v);
    add(b.v, b.u);
  }
  std::vector<Segment<T>> segs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Atom<T>> k;
    if (kern[i].empty()) {
      k.push_back({pd.qnu[i], T(1)});
    } else {
      for (auto& a : kern[i]) k.push_back({a.x, T(a.w / weight[i])});
    }
    segs.push_back({br[i], br[i + 1], pd.qmu[i], DiscreteMeasure<T>(combine_atoms(std::move(k)))});
  }
  return LiftedCoupling<T>(std::move(segs)).simplified();
}

template <class T>
QMeasure<T> build_Q_rearrangement(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu, QxChoice choice) {
  if (mu == nu) throw DomainError("the rearrangement Q needs two different marginals");
  require_convex_order(mu, nu);

  // Step 1: a_x and b_x inside each jump of F_mu.
  std::vector<T> br0{T(0)};
  for (const auto& p : quantile_pieces(mu, nu)) br0.push_back(p.hi);
  const PieceData<T> pd0 = piece_data(br0, mu, nu);
  struct Jump {
    T lo, hi, a, b;
  };
  std::vector<Jump> jumps;
  std::vector<T> pts = br0;
  T prev(0);
  for (std::size_t x = 0; x < mu.size(); ++x) {
    Jump jp{prev, mu.cumulative()[x], prev, mu.cumulative()[x]};
    prev = jp.hi;
    std::vector<std::size_t> inside;
    T P(0), N(0);
    for (std::size_t k = 0; k + 1 < br0.size(); ++k) {
      if (num::lt(br0[k], jp.lo) || num::lt(jp.hi, br0[k + 1])) continue;
      inside.push_back(k);
      P += pd0.plus[k] * (br0[k + 1] - br0[k]);
      N += pd0.minus[k] * (br0[k + 1] - br0[k]);
    }
    const T m = P < N ? P : N;
    if (!num::is_zero(m)) {
      T acc(0);
      for (std::size_t k : inside) {
        const T piece = pd0.plus[k] * (br0[k + 1] - br0[k]);
        if (num::is_zero(piece)) continue;
        if (num::le(m, T(acc + piece))) {
          jp.a = br0[k] + (m - acc) / pd0.plus[k];
          break;
        }
        acc += piece;
      }
      acc = T(0);
      for (auto it = inside.rbegin(); it != inside.rend(); ++it) {
        const std::size_t k = *it;
        const T piece = pd0.minus[k] * (br0[k + 1] - br0[k]);
        if (num::is_zero(piece)) continue;
        if (num::le(m, T(acc + piece))) {
          jp.b = br0[k + 1] - (m - acc) / pd0.minus[k];
          break;
        }
        acc += piece;
      }
    }
    pts.push_back(jp.a);
    pts.push_back(jp.b);
    jumps.push_back(jp);
  }
  const std::vector<T> br1 = unique_sorted(std::move(pts));

  // Pieces in V+_x or V-_x, and the residual densities matched by Gamma.
  auto classify = [&](const std::vector<T>& br, const PieceData<T>& pd) {
    std::vector<std::size_t> owner(pd.qmu.size(), npos);
    for (std::size_t k = 0; k < pd.qmu.size(); ++k)
      for (std::size_t x = 0; x < jumps.size(); ++x) {
        const Jump& jp = jumps[x];
        if (num::lt(br[k], jp.lo) || num::lt(jp.hi, br[k + 1])) continue;
        if ((sign_of(pd.plus[k]) == Sign::plus && num::le(br[k + 1], jp.a)) ||
            (sign_of(pd.minus[k]) == Sign::plus && num::le(jp.b, br[k])))
          owner[k] = x;
      }
    return owner;
  };
  auto residual = [](const std::vector<T>& d, const std::vector<std::size_t>& owner) {
    std::vector<T> r(d);
    for (std::size_t k = 0; k < r.size(); ++k)
      if (owner[k] != npos) r[k] = T(0);
    return r;
  };
  auto restricted = [](const std::vector<T>& d, const std::vector<std::size_t>& owner, std::size_t x) {
    std::vector<T> r(d.size(), T(0));
    for (std::size_t k = 0; k < r.size(); ++k)
      if (owner[k] == x) r[k] = d[k];
    return r;
  };

  const PieceData<T> pd1 = piece_data(br1, mu, nu);
  const auto owner1 = classify(br1, pd1);
  auto gamma = monotone_match(br1, residual(pd1.plus, owner1), residual(pd1.minus, owner1));
  std::vector<MatchBlock<T>> local;
  if (choice == QxChoice::monotone)
    for (std::size_t x = 0; x < jumps.size(); ++x) {
      auto blk = monotone_match(br1, restricted(pd1.plus, owner1, x), restricted(pd1.minus, owner1, x));
      local.insert(local.end(), blk.begin(), blk.end());
    }
  pts = br1;
  for (const auto* list : {&gamma, &local})
    for (const auto& b : *list) {
      pts.push_back(b.plus_lo);
      pts.push_back(b.plus_hi);
      pts.push_back(b.minus_lo);
      pts.push_back(b.minus_hi);
    }

  QMeasure<T> q{unique_sorted(std::move(pts)), {}};
  const PieceData<T> pd = piece_data(q.breaks, mu, nu);
  for (const auto* list : {&gamma, &local})
    for (const auto& b : *list)
      q.blocks.push_back({piece_of(q.breaks, b.plus_lo, b.plus_hi), piece_of(q.breaks, b.minus_lo, b.minus_hi),
                          T(b.mass / pd.total)});
  if (choice == QxChoice::product) {
    const auto owner = classify(q.breaks, pd);
    for (std::size_t x = 0; x < jumps.size(); ++x) {
      T m(0);
      for (std::size_t k = 0; k < owner.size(); ++k)
        if (owner[k] == x) m += pd.plus[k] * (q.breaks[k + 1] - q.breaks[k]);
      if (num::is_zero(m)) continue;
      for (std::size_t u = 0; u < owner.size(); ++u) {
        if (owner[u] != x || num::is_zero(pd.plus[u])) continue;
        for (std::size_t v = 0; v < owner.size(); ++v) {
          if (owner[v] != x || num::is_zero(pd.minus[v])) continue;
          const T mu_part = pd.plus[u] * (q.breaks[u + 1] - q.breaks[u]);
          const T mv_part = pd.minus[v] * (q.breaks[v + 1] - q.breaks[v]);
          q.blocks.push_back({u, v, T(mu_part * mv_part / (m * pd.total))});
        }
      }
    }
  }
  validate_q(q, mu, nu);
  return q;
}

#define MOT_INSTANTIATE(T)                                                                                  \
  template PsiSystem<T> build_psi(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&);                    \
  template LiftedCoupling<T> itmc_kernel(const PsiSystem<T>&);                                              \
  template LiftedCoupling<T> itmc_lifted(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&);             \
  template DiscreteCoupling<T> itmc(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&);                  \
  template void validate_q(const QMeasure<T>&, const DiscreteMeasure<T>&, const DiscreteMeasure<T>&);       \
  template QMeasure<T> itmc_q(const PsiSystem<T>&);                                                         \
  template LiftedCoupling<T> mq_kernel(const QMeasure<T>&, const DiscreteMeasure<T>&, const DiscreteMeasure<T>&); \
  template QMeasure<T> build_Q_rearrangement(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&, QxChoice);

MOT_INSTANTIATE(Rational)
MOT_INSTANTIATE(double)

}  // namespace mot
