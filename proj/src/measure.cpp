#include "mot/measure.hpp"

#include <algorithm>
#include <type_traits>

#include "mot/kernels.hpp"

namespace mot {

template <class T>
std::vector<Atom<T>> combine_atoms(std::vector<Atom<T>> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom<T>& a, const Atom<T>& b) { return a.x < b.x; });
  std::vector<Atom<T>> out;
  out.reserve(atoms.size());
  for (auto& a : atoms) {
    if (!out.empty() && num::eq(out.back().x, a.x))
      out.back().w += a.w;
    else
      out.push_back(std::move(a));
  }
  std::erase_if(out, [](const Atom<T>& a) { return num::is_zero(a.w); });
  return out;
}

template <class T>
DiscreteMeasure<T>::DiscreteMeasure(std::vector<Atom<T>> atoms) : atoms_(combine_atoms(std::move(atoms))) {
  if (atoms_.empty()) throw StructuralError("a probability measure needs at least one atom");
  T total(0);
  for (const auto& a : atoms_) {
    if (a.w < T(0)) throw StructuralError("negative weight at x = " + format_scalar(a.x));
    total += a.w;
    cumulative_.push_back(total);
  }
  bool ok;
  if constexpr (std::is_same_v<T, double>)
    ok = std::fabs(total - 1.0) <= tolerance() * std::max<double>(1.0, static_cast<double>(atoms_.size()));
  else
    ok = total == T(1);
  if (!ok) throw StructuralError("weights sum to " + format_scalar(total) + " instead of 1");
  cumulative_.back() = T(1);
}

template <class T>
DiscreteMeasure<T> DiscreteMeasure<T>::dirac(const T& x) {
  return DiscreteMeasure({{x, T(1)}});
}

template <class T>
std::vector<T> DiscreteMeasure<T>::quantile_breaks() const {
  std::vector<T> b{T(0)};
  b.insert(b.end(), cumulative_.begin(), cumulative_.end());
  return b;
}

template <class T>
T DiscreteMeasure<T>::cdf(const T& x) const {
  T acc(0);
  for (const auto& a : atoms_)
    if (num::le(a.x, x)) acc += a.w;
  return acc;
}

template <class T>
T DiscreteMeasure<T>::cdf_left(const T& x) const {
  T acc(0);
  for (const auto& a : atoms_)
    if (num::lt(a.x, x)) acc += a.w;
  return acc;
}

template <class T>
std::optional<std::size_t> DiscreteMeasure<T>::index_of(const T& x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x, [](const Atom<T>& a, const T& v) {
    return num::lt(a.x, v);
  });
  if (it != atoms_.end() && num::eq(it->x, x)) return static_cast<std::size_t>(it - atoms_.begin());
  return std::nullopt;
}

template <class T>
T DiscreteMeasure<T>::mass(const T& x) const {
  auto i = index_of(x);
  return i ? atoms_[*i].w : T(0);
}

template <class T>
T DiscreteMeasure<T>::quantile(const T& u) const {
  if (num::lt(u, T(0)) || num::lt(T(1), u)) throw DomainError("quantile level outside [0, 1]");
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u,
                             [](const T& c, const T& v) { return num::lt(c, v); });
  if (it == cumulative_.end()) return atoms_.back().x;
  return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].x;
}

template <class T>
PiecewiseConstant<T> DiscreteMeasure<T>::quantile_fn() const {
  std::vector<T> v;
  for (const auto& a : atoms_) v.push_back(a.x);
  return PiecewiseConstant<T>(quantile_breaks(), std::move(v));
}

template <class T>
bool operator==(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!num::eq(a.x(i), b.x(i)) || !num::eq(a.w(i), b.w(i))) return false;
  return true;
}

template <class T>
T mean(const DiscreteMeasure<T>& eta) {
  T acc(0);
  for (const auto& a : eta.atoms()) acc += a.w * a.x;
  return acc;
}

template <class T>
T abs_moment(const DiscreteMeasure<T>& eta, const Exponent& rho) {
  T acc(0);
  for (const auto& a : eta.atoms()) acc += a.w * abs_pow(a.x, rho);
  return acc;
}

template <class T>
T potential(const DiscreteMeasure<T>& eta, const T& x) {
  T acc(0);
  for (const auto& a : eta.atoms()) acc += a.w * num::abs(T(x - a.x));
  return acc;
}

template <class T>
std::vector<QuantilePiece<T>> quantile_pieces(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b) {
  std::vector<QuantilePiece<T>> out;
  out.reserve(a.size() + b.size());
  const auto& ca = a.cumulative();
  const auto& cb = b.cumulative();
  std::size_t i = 0, j = 0;
  T lo(0);
  while (i < a.size() && j < b.size()) {
    const bool adv_a = !(cb[j] < ca[i]) || num::eq(ca[i], cb[j]);
    const bool adv_b = !(ca[i] < cb[j]) || num::eq(ca[i], cb[j]);
    T hi = adv_a ? ca[i] : cb[j];
    if (num::lt(lo, hi)) {
      out.push_back({lo, hi, a.x(i), b.x(j)});
      lo = hi;
    }
    if (adv_a) ++i;
    if (adv_b) ++j;
  }
  if (!out.empty()) out.back().hi = T(1);
  return out;
}

template <class T>
std::vector<Atom<T>> quantile_image(const DiscreteMeasure<T>& eta, const T& lo, const T& hi) {
  if (num::lt(lo, T(0)) || num::lt(T(1), hi)) throw DomainError("quantile image range outside [0, 1]");
  std::vector<Atom<T>> out;
  T prev(0);
  for (std::size_t i = 0; i < eta.size(); ++i) {
    const T& c = eta.cumulative()[i];
    T a = prev < lo ? lo : prev;
    T b = c < hi ? c : hi;
    if (a < b && !num::eq(a, b)) out.push_back({eta.x(i), T(b - a)});
    prev = c;
  }
  return out;
}

template <class T>
T quantile_integral(const DiscreteMeasure<T>& eta, const T& lo, const T& hi) {
  T acc(0);
  for (const auto& a : quantile_image(eta, lo, hi)) acc += a.x * a.w;
  return acc;
}

template <class T>
T wasserstein_pow(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b, const Exponent& rho) {
  auto pieces = quantile_pieces(a, b);
  if constexpr (std::is_same_v<T, double>) {
    std::vector<double> xa, xb, len;
    xa.reserve(pieces.size());
    xb.reserve(pieces.size());
    len.reserve(pieces.size());
    for (const auto& p : pieces) {
      xa.push_back(p.a);
      xb.push_back(p.b);
      len.push_back(p.hi - p.lo);
    }
    return kernels::weighted_abs_pow_sum(xa.data(), xb.data(), len.data(), pieces.size(), rho);
  } else {
    T acc(0);
    for (const auto& p : pieces) acc += (p.hi - p.lo) * abs_pow(T(p.a - p.b), rho);
    return acc;
  }
}

template <class T>
double wasserstein(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b, const Exponent& rho) {
  double v = num::to_double(wasserstein_pow(a, b, rho));
  if (rho.is_integer() && rho.integer() == 1) return v;
  return std::pow(v, 1.0 / rho.value());
}

template <class T>
ConvexOrderCheck<T> check_convex_order(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  ConvexOrderCheck<T> r;
  r.means_equal = num::eq(mean(mu), mean(nu));
  if (!r.means_equal) return r;
  std::vector<T> pts;
  for (const auto& a : mu.atoms()) pts.push_back(a.x);
  for (const auto& a : nu.atoms()) pts.push_back(a.x);
  for (const T& x : unique_sorted(std::move(pts))) {
    if (num::lt(potential(nu, x), potential(mu, x))) {
      r.violating_point = x;
      return r;
    }
  }
  r.holds = true;
  return r;
}

template <class T>
bool convex_order(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  return check_convex_order(mu, nu).holds;
}

template <class T>
void require_convex_order(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  auto r = check_convex_order(mu, nu);
  if (r.holds) return;
  if (!r.means_equal)
    throw OrderError("marginals are not in convex order: means differ (" + format_scalar(mean(mu)) + " vs " +
                     format_scalar(mean(nu)) + ")");
  const T& x = *r.violating_point;
  throw OrderError("marginals are not in convex order: potential of the first marginal exceeds that of the "
                   "second at x = " + format_scalar(x) + " (" + format_scalar(potential(mu, x)) + " > " +
                   format_scalar(potential(nu, x)) + ")");
}

template <class T>
StochasticOrder stochastic_order(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  bool below = false, above = false;
  for (const auto& p : quantile_pieces(mu, nu)) {
    if (num::lt(p.a, p.b)) below = true;
    if (num::lt(p.b, p.a)) above = true;
  }
  if (below && above) return StochasticOrder::incomparable;
  if (below) return StochasticOrder::less;
  if (above) return StochasticOrder::greater;
  return StochasticOrder::equal;
}

const char* to_string(StochasticOrder o) {
  switch (o) {
    case StochasticOrder::less:
      return "<=st";
    case StochasticOrder::greater:
      return ">=st";
    case StochasticOrder::equal:
      return "equal";
    default:
      return "incomparable";
  }
}

#define MOT_INSTANTIATE(T)                                                                               \
  template std::vector<Atom<T>> combine_atoms(std::vector<Atom<T>>);                                     \
  template class DiscreteMeasure<T>;                                                                     \
  template bool operator==(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&);                        \
  template T mean(const DiscreteMeasure<T>&);                                                            \
  template T abs_moment(const DiscreteMeasure<T>&, const Exponent&);                                     \
  template T potential(const DiscreteMeasure<T>&, const T&);                                             \
  template std::vector<QuantilePiece<T>> quantile_pieces(const DiscreteMeasure<T>&,                      \
                                                         const DiscreteMeasure<T>&);                     \
  template std::vector<Atom<T>> quantile_image(const DiscreteMeasure<T>&, const T&, const T&);           \
  template T quantile_integral(const DiscreteMeasure<T>&, const T&, const T&);                           \
  template T wasserstein_pow(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&, const Exponent&);     \
  template double wasserstein(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&, const Exponent&);    \
  template ConvexOrderCheck<T> check_convex_order(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&); \
  template bool convex_order(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&);                      \
  template void require_convex_order(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&);              \
  template StochasticOrder stochastic_order(const DiscreteMeasure<T>&, const DiscreteMeasure<T>&);

MOT_INSTANTIATE(Rational)
MOT_INSTANTIATE(double)

}  // namespace mot
