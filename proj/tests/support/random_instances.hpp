#pragma once

// Seeded generators of small exact instances shared by the unit and acceptance tests.

#include <algorithm>
#include <random>
#include <vector>

#include "mot/coupling.hpp"
#include "mot/itmc.hpp"
#include "mot/measure.hpp"

namespace mot::testing {

using Rng = std::mt19937_64;

inline long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

// `count` distinct integers in [lo, hi], sorted.
inline std::vector<long> distinct_ints(Rng& rng, std::size_t count, long lo, long hi) {
  std::vector<long> pool;
  for (long v = lo; v <= hi; ++v) pool.push_back(v);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

// Positive integer weights in [1, 6], normalised.
inline std::vector<Rational> random_weights(Rng& rng, std::size_t count) {
  std::vector<Rational> w;
  Rational sum(0);
  for (std::size_t i = 0; i < count; ++i) {
    w.emplace_back(uniform_int(rng, 1, 6));
    sum += w.back();
  }
  for (auto& v : w) v /= sum;
  return w;
}

inline DiscreteMeasure<Rational> random_measure(Rng& rng, std::size_t atoms, long lo, long hi) {
  const auto xs = distinct_ints(rng, atoms, lo, hi);
  const auto ws = random_weights(rng, atoms);
  std::vector<Atom<Rational>> a;
  for (std::size_t i = 0; i < atoms; ++i) a.push_back({Rational(xs[i]), ws[i]});
  return DiscreteMeasure<Rational>(a);
}

// Centred law at x: the Dirac mass or a two-point spread x - l, x + r.
inline std::vector<Atom<Rational>> random_centred_kernel(Rng& rng, const Rational& x, bool allow_dirac) {
  if (allow_dirac && uniform_int(rng, 0, 2) == 0) return {{x, Rational(1)}};
  const long l = uniform_int(rng, 1, 3), r = uniform_int(rng, 1, 3);
  return {{x - l, Rational(r, l + r)}, {x + r, Rational(l, l + r)}};
}

// Martingale coupling with random first marginal on [-3, 3] and centred kernels.
inline DiscreteCoupling<Rational> random_martingale(Rng& rng, std::size_t atoms) {
  const auto mu = random_measure(rng, atoms, -3, 3);
  std::vector<Point<Rational>> pts;
  bool spread = false;
  for (const auto& a : mu.atoms()) {
    // The last atom is forced to spread when none did, so that mu != nu.
    const bool last = &a == &mu.atoms().back();
    for (const auto& k : random_centred_kernel(rng, a.x, spread || !last)) {
      pts.push_back({a.x, k.x, a.w * k.w});
      if (k.x != a.x) spread = true;
    }
  }
  return DiscreteCoupling<Rational>(pts);
}

struct ConvexPair {
  DiscreteMeasure<Rational> mu, nu;
};

// mu <=cx nu with mu != nu and both supports of size <= max_atoms.
inline ConvexPair random_convex_pair(Rng& rng, std::size_t max_atoms) {
  for (;;) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long>(std::min<std::size_t>(max_atoms, 4))));
    const auto m = random_martingale(rng, n);
    auto mu = m.first_marginal();
    auto nu = m.second_marginal();
    if (nu.size() <= max_atoms && mu.size() <= max_atoms && !(mu == nu)) return {mu, nu};
  }
}

// Moves mass lambda so that the kernel at xa loses a high point to xb and gains a low one.
// Every upper tail deviation sum at thresholds in (xa, xb] decreases; the others are unchanged,
// so a martingale start yields a coupling satisfying barycentre dispersion with the same marginals.
inline DiscreteCoupling<Rational> random_bda_coupling(Rng& rng, std::size_t max_atoms) {
  for (;;) {
    const auto m = random_martingale(rng, static_cast<std::size_t>(uniform_int(rng, 2, 3)));
    if (m.first_marginal().size() > max_atoms || m.second_marginal().size() > max_atoms) continue;
    auto pts = m.points();
    const int moves = static_cast<int>(uniform_int(rng, 1, 4));
    for (int s = 0; s < moves; ++s) {
      std::vector<std::pair<std::size_t, std::size_t>> cand;
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
          if (pts[i].x < pts[j].x && pts[i].y > pts[j].y && pts[i].w > 0 && pts[j].w > 0) cand.emplace_back(i, j);
      if (cand.empty()) break;
      const auto [i, j] = cand[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(cand.size()) - 1))];
      const Rational cap = std::min(pts[i].w, pts[j].w);
      const Rational lambda = cap * Rational(uniform_int(rng, 1, 2), 2);
      const Point<Rational> a = pts[i], b = pts[j];
      pts[i].w -= lambda;
      pts[j].w -= lambda;
      pts.push_back({a.x, b.y, lambda});
      pts.push_back({b.x, a.y, lambda});
    }
    std::vector<Point<Rational>> kept;
    for (const auto& p : pts)
      if (p.w > 0) kept.push_back(p);
    return DiscreteCoupling<Rational>(kept);
  }
}

// Random coupling whose first marginal has <= max_x atoms and whose kernels live on a common
// pool of <= max_y points.
inline DiscreteCoupling<Rational> random_coupling(Rng& rng, std::size_t max_x, std::size_t max_y) {
  const auto mu = random_measure(rng, static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long>(max_x))), -3, 3);
  const auto pool = distinct_ints(rng, static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long>(max_y))), -4, 4);
  std::vector<Point<Rational>> pts;
  for (const auto& a : mu.atoms()) {
    auto ys = pool;
    std::shuffle(ys.begin(), ys.end(), rng);
    ys.resize(static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long>(ys.size()))));
    const auto ws = random_weights(rng, ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) pts.push_back({a.x, Rational(ys[j]), a.w * ws[j]});
  }
  return DiscreteCoupling<Rational>(pts);
}

// mu and nu = T#mu for a strictly increasing T, in convex order, so the comonotone coupling is Monge.
inline ConvexPair random_monge_pair(Rng& rng, std::size_t max_atoms) {
  for (;;) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 2, static_cast<long>(max_atoms)));
    const auto mu = random_measure(rng, n, -3, 3);
    const Rational m = mean(mu);
    // Dilation about the mean followed by an increasing integer perturbation, re-centred.
    const Rational c(uniform_int(rng, 1, 3));
    std::vector<Atom<Rational>> img;
    Rational shift(0);
    long bump = 0;
    for (const auto& a : mu.atoms()) {
      bump += uniform_int(rng, 0, 1);
      img.push_back({m + c * (a.x - m) + bump, a.w});
      shift += a.w * bump;
    }
    for (auto& a : img) a.x -= shift;
    DiscreteMeasure<Rational> nu(img);
    if (!(mu == nu) && convex_order(mu, nu)) return {mu, nu};
  }
}

// A random admissible Q on the partition of `sys`: minus pieces are filled left to right from
// random plus pieces lying to their left. Always feasible because Psi_+ >= Psi_- pointwise.
inline QMeasure<Rational> random_q(Rng& rng, const PsiSystem<Rational>& sys) {
  const std::size_t n = sys.pieces();
  std::vector<Rational> left(n, Rational(0));
  QMeasure<Rational> q{sys.breaks, {}};
  for (std::size_t j = 0; j < n; ++j) {
    if (sys.sign[j] == Sign::plus) left[j] = (sys.qmu[j] - sys.qnu[j]) * sys.length(j) / sys.total;
    if (sys.sign[j] != Sign::minus) continue;
    Rational need = (sys.qnu[j] - sys.qmu[j]) * sys.length(j) / sys.total;
    while (need > 0) {
      std::vector<std::size_t> avail;
      for (std::size_t i = 0; i < j; ++i)
        if (left[i] > 0) avail.push_back(i);
      const std::size_t i = avail[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(avail.size()) - 1))];
      Rational take = std::min(left[i], need);
      if (avail.size() > 1 && uniform_int(rng, 0, 1) == 0) take /= 2;
      q.blocks.push_back({i, j, take});
      left[i] -= take;
      need -= take;
    }
  }
  return q;
}

}  // namespace mot::testing
