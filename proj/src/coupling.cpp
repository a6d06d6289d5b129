#include "mot/coupling.hpp"

#include <algorithm>
#include <type_traits>

namespace mot {

namespace {

template <class T>
bool sums_to_one(const T& total, std::size_t n) {
  if constexpr (std::is_same_v<T, double>)
    return std::fabs(total - 1.0) <= tolerance() * std::max<double>(1.0, static_cast<double>(n));
  else
    return total == T(1);
}

}  // namespace

template <class T>
DiscreteCoupling<T>::DiscreteCoupling(std::vector<Point<T>> points) {
  std::sort(points.begin(), points.end(), [](const Point<T>& a, const Point<T>& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  for (auto& p : points) {
    if (!points_.empty() && num::eq(points_.back().x, p.x) && num::eq(points_.back().y, p.y))
      points_.back().w += p.w;
    else
      points_.push_back(std::move(p));
  }
  std::erase_if(points_, [](const Point<T>& p) { return num::is_zero(p.w); });
  if (points_.empty()) throw StructuralError("a coupling needs at least one point");
  T total(0);
  for (const auto& p : points_) {
    if (p.w < T(0)) throw StructuralError("negative weight in coupling");
    total += p.w;
  }
  if (!sums_to_one(total, points_.size()))
    throw StructuralError("coupling weights sum to " + format_scalar(total) + " instead of 1");
}

template <class T>
DiscreteMeasure<T> DiscreteCoupling<T>::first_marginal() const {
  std::vector<Atom<T>> a;
  for (const auto& p : points_) a.push_back({p.x, p.w});
  return DiscreteMeasure<T>(std::move(a));
}

template <class T>
DiscreteMeasure<T> DiscreteCoupling<T>::second_marginal() const {
  std::vector<Atom<T>> a;
  for (const auto& p : points_) a.push_back({p.y, p.w});
  return DiscreteMeasure<T>(std::move(a));
}

template <class T>
bool operator==(const DiscreteCoupling<T>& a, const DiscreteCoupling<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& p = a.points()[i];
    const auto& q = b.points()[i];
    if (!num::eq(p.x, q.x) || !num::eq(p.y, q.y) || !num::eq(p.w, q.w)) return false;
  }
  return true;
}

template <class T>
Kernel<T>::Kernel(std::vector<KernelEntry<T>> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const KernelEntry<T>& a, const KernelEntry<T>& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < entries_.size(); ++i)
    if (num::eq(entries_[i - 1].x, entries_[i].x)) throw StructuralError("kernel lists an atom twice");
}

template <class T>
const DiscreteMeasure<T>& Kernel<T>::at(const T& x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const KernelEntry<T>& e, const T& v) { return num::lt(e.x, v); });
  if (it == entries_.end() || !num::eq(it->x, x))
    throw StructuralError("kernel has no entry for x = " + format_scalar(x));
  return it->law;
}

template <class T>
Kernel<T> disintegrate(const DiscreteCoupling<T>& pi) {
  std::vector<KernelEntry<T>> out;
  const auto& pts = pi.points();
  for (std::size_t i = 0; i < pts.size();) {
    std::size_t j = i;
    T m(0);
    while (j < pts.size() && num::eq(pts[j].x, pts[i].x)) m += pts[j++].w;
    std::vector<Atom<T>> law;
    for (std::size_t k = i; k < j; ++k) law.push_back({pts[k].y, T(pts[k].w / m)});
    out.push_back({pts[i].x, DiscreteMeasure<T>(std::move(law))});
    i = j;
  }
  return Kernel<T>(std::move(out));
}

template <class T>
DiscreteCoupling<T> reassemble(const DiscreteMeasure<T>& mu, const Kernel<T>& k) {
  if (k.size() != mu.size()) throw StructuralError("kernel domain differs from the support of the marginal");
  std::vector<Point<T>> pts;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto& e = k.entries()[i];
    if (!num::eq(e.x, mu.x(i))) throw StructuralError("kernel domain differs from the support of the marginal");
    for (const auto& a : e.law.atoms()) pts.push_back({mu.x(i), a.x, T(mu.w(i) * a.w)});
  }
  return DiscreteCoupling<T>(std::move(pts));
}

template <class T>
DiscreteCoupling<T> hoeffding_frechet(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  std::vector<Point<T>> pts;
  for (const auto& p : quantile_pieces(mu, nu)) pts.push_back({p.a, p.b, T(p.hi - p.lo)});
  return DiscreteCoupling<T>(std::move(pts));
}

template <class T>
DiscreteCoupling<T> product_coupling(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  std::vector<Point<T>> pts;
  for (const auto& a : mu.atoms())
    for (const auto& b : nu.atoms()) pts.push_back({a.x, b.x, T(a.w * b.w)});
  return DiscreteCoupling<T>(std::move(pts));
}

template <class T>
DiscreteCoupling<T> diagonal_coupling(const DiscreteMeasure<T>& mu) {
  std::vector<Point<T>> pts;
  for (const auto& a : mu.atoms()) pts.push_back({a.x, a.x, a.w});
  return DiscreteCoupling<T>(std::move(pts));
}

template <class T>
bool is_martingale(const DiscreteCoupling<T>& pi) {
  const Kernel<T> k = disintegrate(pi);
  for (const auto& e : k.entries())
    if (!num::eq(mean(e.law), e.x)) return false;
  return true;
}

template <class T>
bool is_monge(const DiscreteCoupling<T>& pi) {
  const Kernel<T> k = disintegrate(pi);
  for (const auto& e : k.entries())
    if (e.law.size() != 1) return false;
  return true;
}

template <class T>
T barycentre_deviation(const DiscreteCoupling<T>& pi) {
  const auto mu = pi.first_marginal();
  const auto k = disintegrate(pi);
  T acc(0);
  for (std::size_t i = 0; i < mu.size(); ++i) acc += mu.w(i) * num::abs(T(mean(k.entries()[i].law) - mu.x(i)));
  return acc;
}

template <class T>
bool bda_atom_scan(const DiscreteCoupling<T>& pi) {
  const auto mu = pi.first_marginal();
  const auto k = disintegrate(pi);
  T tail(0);
  for (std::size_t i = mu.size(); i-- > 0;) {
    tail += mu.w(i) * (mu.x(i) - mean(k.entries()[i].law));
    if (num::lt(T(0), tail)) return false;
  }
  return true;
}

template <class T>
bool bda_delta_form(const DiscreteCoupling<T>& pi) {
  const auto mu = pi.first_marginal();
  const auto k = disintegrate(pi);
  std::vector<T> diff;
  for (std::size_t i = 0; i < mu.size(); ++i) diff.push_back(mu.x(i) - mean(k.entries()[i].law));
  PiecewiseConstant<T> d(mu.quantile_breaks(), std::move(diff));
  const auto dp = antiderivative(d.positive_part());
  const auto dm = antiderivative(d.negative_part());
  // Upper-tail integrals of d are D(1) - D(u) with D = dp - dm; with equal means D(1) = 0 and
  // the test reduces to dp >= dm.
  const T end = dp(T(1)) - dm(T(1));
  for (const T& u : d.breaks())
    if (num::lt(T(dp(u) - dm(u)), end)) return false;
  return true;
}

template <class T>
bool barycentre_dispersion(const DiscreteCoupling<T>& pi) {
  const bool a = bda_atom_scan(pi);
  if (a != bda_delta_form(pi)) throw InternalError("barycentre dispersion checks disagree");
  return a;
}

template <class T>
LiftedCoupling<T>::LiftedCoupling(std::vector<Segment<T>> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw StructuralError("a lifted coupling needs at least one segment");
  if (!num::eq(segments_.front().a, T(0)) || !num::eq(segments_.back().b, T(1)))
    throw StructuralError("lifted coupling segments must cover (0, 1]");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!(s.a < s.b)) throw StructuralError("lifted coupling segment with a >= b");
    if (i > 0) {
      if (!num::eq(segments_[i - 1].b, s.a)) throw StructuralError("lifted coupling segments are not contiguous");
      if (num::lt(s.x, segments_[i - 1].x))
        throw StructuralError("lifted coupling first coordinate must be nondecreasing in u");
    }
  }
}

template <class T>
DiscreteMeasure<T> LiftedCoupling<T>::first_marginal() const {
  std::vector<Atom<T>> a;
  for (const auto& s : segments_) a.push_back({s.x, T(s.b - s.a)});
  return DiscreteMeasure<T>(std::move(a));
}

template <class T>
DiscreteMeasure<T> LiftedCoupling<T>::second_marginal() const {
  std::vector<Atom<T>> a;
  for (const auto& s : segments_)
    for (const auto& k : s.kernel.atoms()) a.push_back({k.x, T((s.b - s.a) * k.w)});
  return DiscreteMeasure<T>(std::move(a));
}

template <class T>
bool LiftedCoupling<T>::is_martingale() const {
  for (const auto& s : segments_)
    if (!num::eq(mean(s.kernel), s.x)) return false;
  return true;
}

template <class T>
LiftedCoupling<T> LiftedCoupling<T>::simplified() const {
  std::vector<Segment<T>> out;
  for (const auto& s : segments_) {
    if (!out.empty() && num::eq(out.back().x, s.x) && out.back().kernel == s.kernel)
      out.back().b = s.b;
    else
      out.push_back(s);
  }
  return LiftedCoupling(std::move(out));
}

template <class T>
const Segment<T>& LiftedCoupling<T>::at(const T& u) const {
  auto it = std::lower_bound(segments_.begin(), segments_.end(), u,
                             [](const Segment<T>& s, const T& v) { return num::lt(s.b, v); });
  if (it == segments_.end()) throw DomainError("u outside (0, 1]");
  return *it;
}

template <class T>
bool operator==(const LiftedCoupling<T>& a, const LiftedCoupling<T>& b) {
  auto sa = a.simplified();
  auto sb = b.simplified();
  if (sa.size() != sb.size()) return false;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const auto& p = sa.segments()[i];
    const auto& q = sb.segments()[i];
    if (!num::eq(p.a, q.a) || !num::eq(p.b, q.b) || !num::eq(p.x, q.x) || !(p.kernel == q.kernel)) return false;
  }
  return true;
}

template <class T>
LiftedCoupling<T> lift(const DiscreteCoupling<T>& pi) {
  const auto mu = pi.first_marginal();
  const auto k = disintegrate(pi);
  std::vector<Segment<T>> segs;
  T lo(0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    segs.push_back({lo, mu.cumulative()[i], mu.x(i), k.entries()[i].law});
    lo = mu.cumulative()[i];
  }
  return LiftedCoupling<T>(std::move(segs));
}

template <class T>
LiftedCoupling<T> lifted_hoeffding_frechet(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  std::vector<Segment<T>> segs;
  for (const auto& p : quantile_pieces(mu, nu)) segs.push_back({p.lo, p.hi, p.a, DiscreteMeasure<T>::dirac(p.b)});
  return LiftedCoupling<T>(std::move(segs));
}

template <class T>
DiscreteCoupling<T> collapse(const LiftedCoupling<T>& lifted) {
  std::vector<Point<T>> pts;
  for (const auto& s : lifted.segments())
    for (const auto& k : s.kernel.atoms()) pts.push_back({s.x, k.x, T((s.b - s.a) * k.w)});
  return DiscreteCoupling<T>(std::move(pts));
}

#define MOT_INSTANTIATE(T)                                                                        \
  template class DiscreteCoupling<T>;                                                             \
  template bool operator==(const DiscreteCoupling<T>&, const DiscreteCoupling<T>&);               \
  template class Kernel<T>;                                                                       \
  template Kernel<T> disintegrate(const DiscreteCoupling<T>&);                                    \
  template DiscreteCoupling<T> reassemble(const DiscreteMeasure<T>&, const Kernel<T>&);           \
  template DiscreteCoupling<T> hoeffding_frechet(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&); \
  template DiscreteCoupling<T> product_coupling(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&);  \
  template DiscreteCoupling<T> diagonal_coupling(const DiscreteMeasure<T>&);                      \
  template bool is_martingale(const DiscreteCoupling<T>&);                                        \
  template bool is_monge(const DiscreteCoupling<T>&);                                             \
  template T barycentre_deviation(const DiscreteCoupling<T>&);                                    \
  template bool bda_atom_scan(const DiscreteCoupling<T>&);                                        \
  template bool bda_delta_form(const DiscreteCoupling<T>&);                                       \
  template bool barycentre_dispersion(const DiscreteCoupling<T>&);                                \
  template class LiftedCoupling<T>;                                                               \
  template bool operator==(const LiftedCoupling<T>&, const LiftedCoupling<T>&);                   \
  template LiftedCoupling<T> lift(const DiscreteCoupling<T>&);                                    \
  template LiftedCoupling<T> lifted_hoeffding_frechet(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&); \
  template DiscreteCoupling<T> collapse(const LiftedCoupling<T>&);

MOT_INSTANTIATE(Rational)
MOT_INSTANTIATE(double)

}  // namespace mot
