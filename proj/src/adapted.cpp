#include "mot/adapted.hpp"

#include <cmath>

namespace mot {

template <class T>
AwResult<T> adapted_wasserstein(const DiscreteCoupling<T>& pi, const DiscreteCoupling<T>& other, const Exponent& rho) {
  const Kernel<T> k1 = disintegrate(pi), k2 = disintegrate(other);
  const DiscreteMeasure<T> mu1 = pi.first_marginal(), mu2 = other.first_marginal();
  AwResult<T> res;
  for (const auto& e : k1.entries()) res.xs.push_back(e.x);
  for (const auto& e : k2.entries()) res.xs_other.push_back(e.x);
  Matrix<T> cost = distance_cost(res.xs, res.xs_other, rho);
  for (std::size_t i = 0; i < k1.size(); ++i)
    for (std::size_t j = 0; j < k2.size(); ++j)
      cost(i, j) += wasserstein_pow(k1.entries()[i].law, k2.entries()[j].law, rho);
  OtResult<T> ot = solve_ot(cost, mu1, mu2);
  res.cost = ot.value;
  res.plan = std::move(ot.plan);
  res.distance = std::pow(std::max(0.0, num::to_double(res.cost)), 1.0 / rho.value());
  return res;
}

template <class T>
T nested_wasserstein_bruteforce(const DiscreteCoupling<T>& pi, const DiscreteCoupling<T>& other, const Exponent& rho) {
  const Kernel<T> k1 = disintegrate(pi), k2 = disintegrate(other);
  auto too_big = [](const Kernel<T>& k) {
    if (k.size() > kNestedAtomLimit) return true;
    for (const auto& e : k.entries())
      if (e.law.size() > kNestedAtomLimit) return true;
    return false;
  };
  if (too_big(k1) || too_big(k2)) throw ScaleError("nested brute force is limited to 5 atoms per marginal and kernel");

  const auto& p = pi.points();
  const auto& q = other.points();
  const std::size_t P = p.size(), Q = q.size(), nv = P * Q;
  // Group indices of points sharing a first coordinate.
  auto groups = [](const std::vector<Point<T>>& pts) {
    std::vector<std::size_t> g(pts.size());
    std::size_t id = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k > 0 && !(pts[k].x == pts[k - 1].x)) ++id;
      g[k] = id;
    }
    return g;
  };
  const std::vector<std::size_t> g1 = groups(p), g2 = groups(q);
  const std::size_t n1 = g1.back() + 1, n2 = g2.back() + 1;
  std::vector<T> gw1(n1, T(0)), gw2(n2, T(0));
  for (std::size_t k = 0; k < P; ++k) gw1[g1[k]] += p[k].w;
  for (std::size_t l = 0; l < Q; ++l) gw2[g2[l]] += q[l].w;

  std::vector<std::vector<T>> rows;
  std::vector<T> rhs;
  auto var = [Q](std::size_t k, std::size_t l) { return k * Q + l; };
  for (std::size_t k = 0; k < P; ++k) {
    std::vector<T> r(nv, T(0));
    for (std::size_t l = 0; l < Q; ++l) r[var(k, l)] = T(1);
    rows.push_back(std::move(r));
    rhs.push_back(p[k].w);
  }
  for (std::size_t l = 0; l < Q; ++l) {
    std::vector<T> r(nv, T(0));
    for (std::size_t k = 0; k < P; ++k) r[var(k, l)] = T(1);
    rows.push_back(std::move(r));
    rhs.push_back(q[l].w);
  }
  // Causality in each direction: given (x, x'), the law of y under eta is pi_x, and symmetrically.
  // The last point of each group is implied by the others and the marginal rows.
  for (std::size_t k = 0; k < P; ++k) {
    if (k + 1 == P || g1[k + 1] != g1[k]) continue;
    const T share = p[k].w / gw1[g1[k]];
    for (std::size_t h = 0; h < n2; ++h) {
      std::vector<T> r(nv, T(0));
      for (std::size_t k2 = 0; k2 < P; ++k2) {
        if (g1[k2] != g1[k]) continue;
        for (std::size_t l = 0; l < Q; ++l)
          if (g2[l] == h) r[var(k2, l)] -= share;
      }
      for (std::size_t l = 0; l < Q; ++l)
        if (g2[l] == h) r[var(k, l)] += T(1);
      rows.push_back(std::move(r));
      rhs.push_back(T(0));
    }
  }
  for (std::size_t l = 0; l < Q; ++l) {
    if (l + 1 == Q || g2[l + 1] != g2[l]) continue;
    const T share = q[l].w / gw2[g2[l]];
    for (std::size_t h = 0; h < n1; ++h) {
      std::vector<T> r(nv, T(0));
      for (std::size_t l2 = 0; l2 < Q; ++l2) {
        if (g2[l2] != g2[l]) continue;
        for (std::size_t k = 0; k < P; ++k)
          if (g1[k] == h) r[var(k, l2)] -= share;
      }
      for (std::size_t k = 0; k < P; ++k)
        if (g1[k] == h) r[var(k, l)] += T(1);
      rows.push_back(std::move(r));
      rhs.push_back(T(0));
    }
  }
  Matrix<T> A(rows.size(), nv);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < nv; ++j) A(i, j) = rows[i][j];
  std::vector<T> c(nv);
  for (std::size_t k = 0; k < P; ++k)
    for (std::size_t l = 0; l < Q; ++l)
      c[var(k, l)] = abs_pow(T(p[k].x - q[l].x), rho) + abs_pow(T(p[k].y - q[l].y), rho);
  const LpResult<T> lp = solve_lp(A, rhs, c);
  if (lp.status != LpStatus::optimal) throw InternalError("bicausal LP is not optimal");
  return lp.value;
}

namespace {

template <class T>
std::vector<T> segment_breaks(const LiftedCoupling<T>& a, const LiftedCoupling<T>& b) {
  std::vector<T> ba, bb;
  ba.push_back(T(0));
  bb.push_back(T(0));
  for (const auto& s : a.segments()) ba.push_back(s.b);
  for (const auto& s : b.segments()) bb.push_back(s.b);
  return merge_breaks(ba, bb);
}

// E|U - U'|^rho for independent uniforms on (a, b] and (c, d], times (b - a)(d - c).
template <class T>
T uniform_gap_integral(const T& a, const T& b, const T& c, const T& d, const Exponent& rho) {
  auto g = [&rho](const T& t) -> T {
    if constexpr (std::is_same_v<T, double>) {
      const double r = rho.value();
      return std::pow(std::fabs(t), r + 2.0) / ((r + 1.0) * (r + 2.0));
    } else {
      const unsigned r = rho.integer();
      return abs_pow(t, Exponent(r + 2)) / T((r + 1) * (r + 2));
    }
  };
  return g(T(b - c)) + g(T(a - d)) - g(T(a - c)) - g(T(b - d));
}

template <class T>
std::vector<Segment<T>> bisect(const std::vector<Segment<T>>& segs) {
  std::vector<Segment<T>> out;
  out.reserve(2 * segs.size());
  for (const auto& s : segs) {
    const T mid = (s.a + s.b) / T(2);
    out.push_back({s.a, mid, s.x, s.kernel});
    out.push_back({mid, s.b, s.x, s.kernel});
  }
  return out;
}

// Mixture of independent uniforms on segment pairs, weights optimised by OT.
template <class T>
T block_product_bound(const std::vector<Segment<T>>& sa, const std::vector<Segment<T>>& sb, const Exponent& rho) {
  Matrix<T> cost(sa.size(), sb.size());
  std::vector<T> wa, wb;
  for (const auto& s : sa) wa.push_back(s.b - s.a);
  for (const auto& s : sb) wb.push_back(s.b - s.a);
  for (std::size_t i = 0; i < sa.size(); ++i)
    for (std::size_t j = 0; j < sb.size(); ++j)
      cost(i, j) = abs_pow(T(sa[i].x - sb[j].x), rho) + wasserstein_pow(sa[i].kernel, sb[j].kernel, rho) +
                   uniform_gap_integral(sa[i].a, sa[i].b, sb[j].a, sb[j].b, rho) / (wa[i] * wb[j]);
  return solve_ot(cost, wa, wb).value;
}

}  // namespace

template <class T>
T lifted_diagonal_bound(const LiftedCoupling<T>& a, const LiftedCoupling<T>& b, const Exponent& rho) {
  const std::vector<T> br = segment_breaks(a, b);
  T total(0);
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const T lo = br[i], hi = br[i + 1];
    const auto& s = a.at(hi);
    const auto& t = b.at(hi);
    total += (hi - lo) * (abs_pow(T(s.x - t.x), rho) + wasserstein_pow(s.kernel, t.kernel, rho));
  }
  return total;
}

template <class T>
T lifted_segment_lower_bound(const LiftedCoupling<T>& a, const LiftedCoupling<T>& b, const Exponent& rho) {
  const auto& sa = a.segments();
  const auto& sb = b.segments();
  Matrix<T> cost(sa.size(), sb.size());
  std::vector<T> wa, wb;
  for (const auto& s : sa) wa.push_back(s.b - s.a);
  for (const auto& s : sb) wb.push_back(s.b - s.a);
  for (std::size_t i = 0; i < sa.size(); ++i)
    for (std::size_t j = 0; j < sb.size(); ++j)
      cost(i, j) = abs_pow(T(sa[i].x - sb[j].x), rho) + wasserstein_pow(sa[i].kernel, sb[j].kernel, rho);
  return solve_ot(cost, wa, wb).value;
}

template <class T>
LiftedAwResult<T> lifted_adapted_wasserstein(const LiftedCoupling<T>& a, const LiftedCoupling<T>& b,
                                             const Exponent& rho, const LiftedAwOptions& opts) {
  if constexpr (!std::is_same_v<T, double>)
    if (!rho.is_integer()) throw ParameterError("exact lifted AW needs an integer exponent");
  LiftedAwResult<T> res;
  res.lower = lifted_segment_lower_bound(a, b, rho);
  res.upper = lifted_diagonal_bound(a, b, rho);
  if (num::le(res.upper, res.lower)) {
    res.value = res.upper;
    res.exact = true;
    return res;
  }
  std::vector<Segment<T>> sa = a.simplified().segments(), sb = b.simplified().segments();
  T previous = res.upper;
  for (std::size_t r = 0; r <= opts.max_refinements; ++r) {
    const T bound = block_product_bound(sa, sb, rho);
    if (bound < res.upper) res.upper = bound;
    res.refinements = r;
    if (r > 0 && num::eq(bound, previous)) break;
    previous = bound;
    if (2 * std::max(sa.size(), sb.size()) > opts.max_segments) break;
    sa = bisect(sa);
    sb = bisect(sb);
  }
  res.value = res.upper;
  res.exact = num::le(res.upper, res.lower);
  return res;
}

template <class T>
RhoEquivalence aw_rho_equivalence_check(const std::vector<DiscreteCoupling<T>>& sequence,
                                        const DiscreteCoupling<T>& limit, const Exponent& rho, double eps) {
  RhoEquivalence out;
  if (sequence.empty()) return out;
  const DiscreteCoupling<T>& last = sequence.back();
  const double aw_rho = adapted_wasserstein(last, limit, rho).distance;
  const double aw1 = adapted_wasserstein(last, limit, Exponent(1)).distance;
  const double w_mu = wasserstein(last.first_marginal(), limit.first_marginal(), rho);
  const double w_nu = wasserstein(last.second_marginal(), limit.second_marginal(), rho);
  out.aw_rho_vanishes = aw_rho <= eps;
  out.aw1_and_marginals_vanish = aw1 <= eps && w_mu <= eps && w_nu <= eps;
  return out;
}

#define MOT_INSTANTIATE(T)                                                                                   \
  template AwResult<T> adapted_wasserstein(const DiscreteCoupling<T>&, const DiscreteCoupling<T>&,           \
                                           const Exponent&);                                                 \
  template T nested_wasserstein_bruteforce(const DiscreteCoupling<T>&, const DiscreteCoupling<T>&,           \
                                           const Exponent&);                                                 \
  template T lifted_diagonal_bound(const LiftedCoupling<T>&, const LiftedCoupling<T>&, const Exponent&);     \
  template T lifted_segment_lower_bound(const LiftedCoupling<T>&, const LiftedCoupling<T>&, const Exponent&); \
  template LiftedAwResult<T> lifted_adapted_wasserstein(const LiftedCoupling<T>&, const LiftedCoupling<T>&,  \
                                                        const Exponent&, const LiftedAwOptions&);            \
  template RhoEquivalence aw_rho_equivalence_check(const std::vector<DiscreteCoupling<T>>&,                  \
                                                   const DiscreteCoupling<T>&, const Exponent&, double);

MOT_INSTANTIATE(Rational)
MOT_INSTANTIATE(double)

}  // namespace mot
