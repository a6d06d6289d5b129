#include "mot/piecewise.hpp"

#include <algorithm>
#include <string>

namespace mot {

namespace {

template <class T>
void check_breaks(const std::vector<T>& breaks) {
  if (breaks.size() < 2) throw DomainError("a piecewise function needs at least one piece");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (!(breaks[i] < breaks[i + 1])) throw DomainError("breakpoints must be strictly increasing");
}

template <class T>
std::size_t locate(const std::vector<T>& breaks, const T& u) {
  if (num::lt(u, breaks.front()) || num::lt(breaks.back(), u))
    throw DomainError("evaluation point outside the function domain");
  auto it = std::lower_bound(breaks.begin() + 1, breaks.end(), u);
  if (it == breaks.end()) return breaks.size() - 2;
  return static_cast<std::size_t>(it - breaks.begin()) - 1;
}

template <class T>
T midpoint(const T& a, const T& b) {
  return (a + b) / T(2);
}

template <class T>
T affine(const T& a, const T& b, const T& fa, const T& fb, const T& u) {
  return fa + (fb - fa) * (u - a) / (b - a);
}

}  // namespace

template <class T>
PiecewiseConstant<T>::PiecewiseConstant(std::vector<T> breaks, std::vector<T> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
  check_breaks(breaks_);
  if (values_.size() + 1 != breaks_.size()) throw DomainError("one value per piece is required");
}

template <class T>
std::size_t PiecewiseConstant<T>::piece_index(const T& u) const {
  return locate(breaks_, u);
}

template <class T>
T PiecewiseConstant<T>::operator()(const T& u) const {
  return values_[piece_index(u)];
}

template <class T>
std::vector<T> PiecewiseConstant<T>::values_on(const std::vector<T>& finer) const {
  std::vector<T> out;
  out.reserve(finer.size() - 1);
  for (std::size_t i = 0; i + 1 < finer.size(); ++i)
    out.push_back(values_[piece_index(midpoint(finer[i], finer[i + 1]))]);
  return out;
}

template <class T>
PiecewiseConstant<T> PiecewiseConstant<T>::refined(const std::vector<T>& finer) const {
  return PiecewiseConstant(finer, values_on(finer));
}

template <class T>
PiecewiseConstant<T> PiecewiseConstant<T>::simplified() const {
  std::vector<T> b{breaks_.front()};
  std::vector<T> v;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!v.empty() && num::eq(v.back(), values_[i])) {
      b.back() = breaks_[i + 1];
    } else {
      v.push_back(values_[i]);
      b.push_back(breaks_[i + 1]);
    }
  }
  return PiecewiseConstant(std::move(b), std::move(v));
}

template <class T>
PiecewiseConstant<T> PiecewiseConstant<T>::positive_part() const {
  std::vector<T> v;
  for (const T& x : values_) v.push_back(num::sign(x) > 0 ? x : T(0));
  return PiecewiseConstant(breaks_, std::move(v));
}

template <class T>
PiecewiseConstant<T> PiecewiseConstant<T>::negative_part() const {
  std::vector<T> v;
  for (const T& x : values_) v.push_back(num::sign(x) < 0 ? T(-x) : T(0));
  return PiecewiseConstant(breaks_, std::move(v));
}

template <class T>
PiecewiseLinear<T>::PiecewiseLinear(std::vector<T> breaks, std::vector<T> left, std::vector<T> right)
    : breaks_(std::move(breaks)), left_(std::move(left)), right_(std::move(right)) {
  check_breaks(breaks_);
  if (left_.size() + 1 != breaks_.size() || right_.size() != left_.size())
    throw DomainError("one (left, right) value pair per piece is required");
}

template <class T>
PiecewiseLinear<T> PiecewiseLinear<T>::continuous(std::vector<T> breaks, std::vector<T> values) {
  if (values.size() != breaks.size()) throw DomainError("one value per breakpoint is required");
  std::vector<T> l(values.begin(), values.end() - 1);
  std::vector<T> r(values.begin() + 1, values.end());
  return PiecewiseLinear(std::move(breaks), std::move(l), std::move(r));
}

template <class T>
PiecewiseLinear<T> PiecewiseLinear<T>::identity(const T& lo, const T& hi) {
  return PiecewiseLinear({lo, hi}, {lo}, {hi});
}

template <class T>
std::size_t PiecewiseLinear<T>::piece_index(const T& u) const {
  return locate(breaks_, u);
}

template <class T>
T PiecewiseLinear<T>::piece_value(std::size_t i, const T& u) const {
  return affine(breaks_[i], breaks_[i + 1], left_[i], right_[i], u);
}

template <class T>
T PiecewiseLinear<T>::operator()(const T& u) const {
  return piece_value(piece_index(u), u);
}

template <class T>
bool PiecewiseLinear<T>::is_continuous() const {
  for (std::size_t i = 0; i + 1 < left_.size(); ++i)
    if (!num::eq(right_[i], left_[i + 1])) return false;
  return true;
}

template <class T>
bool PiecewiseLinear<T>::is_nondecreasing() const {
  for (std::size_t i = 0; i < left_.size(); ++i) {
    if (num::lt(right_[i], left_[i])) return false;
    if (i + 1 < left_.size() && num::lt(left_[i + 1], right_[i])) return false;
  }
  return true;
}

template <class T>
PiecewiseLinear<T> PiecewiseLinear<T>::restricted(const T& lo, const T& hi) const {
  if (!(lo < hi)) throw DomainError("restriction needs lo < hi");
  if (num::lt(lo, lower()) || num::lt(upper(), hi)) throw DomainError("restriction outside the domain");
  std::vector<T> b{lo};
  for (const T& x : breaks_)
    if (x > lo && x < hi && !num::eq(x, lo) && !num::eq(x, hi)) b.push_back(x);
  b.push_back(hi);
  std::vector<T> l, r;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    std::size_t k = piece_index(midpoint(b[i], b[i + 1]));
    l.push_back(piece_value(k, b[i]));
    r.push_back(piece_value(k, b[i + 1]));
  }
  return PiecewiseLinear(std::move(b), std::move(l), std::move(r));
}

template <class T>
PiecewiseLinear<T> PiecewiseLinear<T>::simplified() const {
  std::vector<T> b{breaks_.front()};
  std::vector<T> l, r;
  for (std::size_t i = 0; i < left_.size(); ++i) {
    if (!l.empty() && num::eq(r.back(), left_[i])) {
      T len0 = b.back() - b[b.size() - 2];
      T len1 = breaks_[i + 1] - breaks_[i];
      T s0 = (r.back() - l.back()) / len0;
      T s1 = (right_[i] - left_[i]) / len1;
      if (num::eq(s0, s1)) {
        b.back() = breaks_[i + 1];
        r.back() = right_[i];
        continue;
      }
    }
    l.push_back(left_[i]);
    r.push_back(right_[i]);
    b.push_back(breaks_[i + 1]);
  }
  return PiecewiseLinear(std::move(b), std::move(l), std::move(r));
}

template <class T>
bool operator==(const PiecewiseConstant<T>& a, const PiecewiseConstant<T>& b) {
  auto sa = a.simplified();
  auto sb = b.simplified();
  if (sa.pieces() != sb.pieces()) return false;
  for (std::size_t i = 0; i < sa.pieces(); ++i)
    if (!num::eq(sa.values()[i], sb.values()[i])) return false;
  for (std::size_t i = 0; i < sa.breaks().size(); ++i)
    if (!num::eq(sa.breaks()[i], sb.breaks()[i])) return false;
  return true;
}

template <class T>
bool operator==(const PiecewiseLinear<T>& a, const PiecewiseLinear<T>& b) {
  auto sa = a.simplified();
  auto sb = b.simplified();
  if (sa.pieces() != sb.pieces()) return false;
  for (std::size_t i = 0; i < sa.pieces(); ++i)
    if (!num::eq(sa.left_values()[i], sb.left_values()[i]) ||
        !num::eq(sa.right_values()[i], sb.right_values()[i]))
      return false;
  for (std::size_t i = 0; i < sa.breaks().size(); ++i)
    if (!num::eq(sa.breaks()[i], sb.breaks()[i])) return false;
  return true;
}

template <class T>
std::vector<T> unique_sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  std::vector<T> out;
  out.reserve(v.size());
  for (T& x : v)
    if (out.empty() || !num::eq(out.back(), x)) out.push_back(std::move(x));
  return out;
}

template <class T>
std::vector<T> merge_breaks(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> all(a);
  all.insert(all.end(), b.begin(), b.end());
  return unique_sorted(std::move(all));
}

template <class T>
std::size_t find_break(const std::vector<T>& breaks, const T& x) {
  auto it = std::lower_bound(breaks.begin(), breaks.end(), x);
  if (it != breaks.end() && num::eq(*it, x)) return static_cast<std::size_t>(it - breaks.begin());
  if (it != breaks.begin() && num::eq(*(it - 1), x)) return static_cast<std::size_t>(it - breaks.begin()) - 1;
  return npos;
}

template <class T>
PiecewiseConstant<T> operator-(const PiecewiseConstant<T>& f, const PiecewiseConstant<T>& g) {
  if (!num::eq(f.lower(), g.lower()) || !num::eq(f.upper(), g.upper()))
    throw DomainError("difference of step functions with different domains");
  std::vector<T> b = merge_breaks(f.breaks(), g.breaks());
  std::vector<T> fv = f.values_on(b);
  std::vector<T> gv = g.values_on(b);
  for (std::size_t i = 0; i < fv.size(); ++i) fv[i] -= gv[i];
  return PiecewiseConstant<T>(std::move(b), std::move(fv));
}

template <class T>
T integrate(const PiecewiseConstant<T>& f, const T& upper) {
  if (num::lt(upper, f.lower()) || num::lt(f.upper(), upper))
    throw DomainError("integration bound outside the function domain");
  T acc(0);
  const auto& b = f.breaks();
  for (std::size_t i = 0; i < f.pieces() && b[i] < upper; ++i) {
    const T& hi = b[i + 1] < upper ? b[i + 1] : upper;
    acc += f.values()[i] * (hi - b[i]);
  }
  return acc;
}

template <class T>
T integrate_positive_part(const PiecewiseConstant<T>& f, const T& upper) {
  return integrate(f.positive_part(), upper);
}

template <class T>
PiecewiseLinear<T> antiderivative(const PiecewiseConstant<T>& f) {
  std::vector<T> vals{T(0)};
  for (std::size_t i = 0; i < f.pieces(); ++i)
    vals.push_back(vals.back() + f.values()[i] * (f.breaks()[i + 1] - f.breaks()[i]));
  return PiecewiseLinear<T>::continuous(f.breaks(), std::move(vals));
}

template <class T>
PiecewiseLinear<T> generalized_left_inverse(const PiecewiseLinear<T>& F) {
  if (!F.is_continuous() || !F.is_nondecreasing())
    throw DomainError("generalized inverse needs a continuous nondecreasing function");
  std::vector<T> b, l, r;
  for (std::size_t i = 0; i < F.pieces(); ++i) {
    const T& lo = F.left_values()[i];
    const T& hi = F.right_values()[i];
    if (!num::lt(lo, hi)) continue;  // plateau: the inverse jumps across it
    if (b.empty()) b.push_back(lo);
    if (!num::lt(b.back(), hi)) continue;
    l.push_back(F.breaks()[i]);
    r.push_back(F.breaks()[i + 1]);
    b.push_back(hi);
  }
  if (l.empty()) throw DomainError("generalized inverse of a constant function is not a function");
  return PiecewiseLinear<T>(std::move(b), std::move(l), std::move(r));
}

namespace {

// Splits piece i of f at the f-preimages of g's breakpoints; calls emit(u0, u1, v0, v1).
template <class T, class G, class Emit>
void split_piece(const PiecewiseLinear<T>& f, std::size_t i, const G& g, Emit&& emit) {
  const T& a = f.breaks()[i];
  const T& b = f.breaks()[i + 1];
  const T& fl = f.left_values()[i];
  const T& fr = f.right_values()[i];
  if (num::lt(fl, g.lower()) || num::lt(g.upper(), fl) || num::lt(fr, g.lower()) || num::lt(g.upper(), fr))
    throw DomainError("range of the inner function is not inside the domain of the outer one");
  if (num::eq(fl, fr)) {
    emit(a, b, fl, fr);
    return;
  }
  const T& vlo = fl < fr ? fl : fr;
  const T& vhi = fl < fr ? fr : fl;
  std::vector<T> cuts{a};
  std::vector<T> vals{fl};
  std::vector<T> inner;
  for (const T& beta : g.breaks())
    if (num::lt(vlo, beta) && num::lt(beta, vhi)) inner.push_back(beta);
  if (fr < fl) std::reverse(inner.begin(), inner.end());
  for (const T& beta : inner) {
    cuts.push_back(a + (beta - fl) * (b - a) / (fr - fl));
    vals.push_back(beta);
  }
  cuts.push_back(b);
  vals.push_back(fr);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) emit(cuts[k], cuts[k + 1], vals[k], vals[k + 1]);
}

}  // namespace

template <class T>
PiecewiseLinear<T> compose(const PiecewiseLinear<T>& g, const PiecewiseLinear<T>& f) {
  std::vector<T> b{f.lower()};
  std::vector<T> l, r;
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    split_piece(f, i, g, [&](const T&, const T& u1, const T& v0, const T& v1) {
      if (num::eq(v0, v1)) {
        T gv = g(v0);
        l.push_back(gv);
        r.push_back(gv);
      } else {
        std::size_t j = g.piece_index(midpoint(v0, v1));
        l.push_back(g.piece_value(j, v0));
        r.push_back(g.piece_value(j, v1));
      }
      b.push_back(u1);
    });
  }
  return PiecewiseLinear<T>(std::move(b), std::move(l), std::move(r));
}

template <class T>
PiecewiseConstant<T> compose_pc(const PiecewiseConstant<T>& g, const PiecewiseLinear<T>& f) {
  std::vector<T> b{f.lower()};
  std::vector<T> v;
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    split_piece(f, i, g, [&](const T&, const T& u1, const T& v0, const T& v1) {
      v.push_back(num::eq(v0, v1) ? g(v0) : g.values()[g.piece_index(midpoint(v0, v1))]);
      b.push_back(u1);
    });
  }
  return PiecewiseConstant<T>(std::move(b), std::move(v));
}

template <class T>
std::vector<MatchBlock<T>> monotone_match(const std::vector<T>& breaks, const std::vector<T>& plus,
                                          const std::vector<T>& minus) {
  const std::size_t k = breaks.size() - 1;
  if (plus.size() != k || minus.size() != k) throw DomainError("one density value per piece is required");
  auto next = [&](const std::vector<T>& d, std::size_t from) {
    while (from < k && num::sign(d[from]) <= 0) ++from;
    return from;
  };
  std::vector<MatchBlock<T>> out;
  std::size_t ip = next(plus, 0), im = next(minus, 0);
  T pos_p = ip < k ? breaks[ip] : T(0), pos_m = im < k ? breaks[im] : T(0);
  T rem_p = ip < k ? plus[ip] * (breaks[ip + 1] - breaks[ip]) : T(0);
  T rem_m = im < k ? minus[im] * (breaks[im + 1] - breaks[im]) : T(0);
  while (ip < k && im < k) {
    const bool p_done = !(rem_m < rem_p) || num::eq(rem_p, rem_m);
    const bool m_done = !(rem_p < rem_m) || num::eq(rem_p, rem_m);
    T t = p_done ? rem_p : rem_m;
    T p_end = p_done ? breaks[ip + 1] : T(pos_p + t / plus[ip]);
    T m_end = m_done ? breaks[im + 1] : T(pos_m + t / minus[im]);
    if (!num::is_zero(t) && num::lt(pos_p, p_end) && num::lt(pos_m, m_end))
      out.push_back({pos_p, p_end, pos_m, m_end, t});
    pos_p = p_end;
    pos_m = m_end;
    rem_p -= t;
    rem_m -= t;
    if (p_done) {
      ip = next(plus, ip + 1);
      if (ip < k) {
        pos_p = breaks[ip];
        rem_p = plus[ip] * (breaks[ip + 1] - breaks[ip]);
      }
    }
    if (m_done) {
      im = next(minus, im + 1);
      if (im < k) {
        pos_m = breaks[im];
        rem_m = minus[im] * (breaks[im + 1] - breaks[im]);
      }
    }
  }
  T left(0);
  if (ip < k) {
    left += rem_p;
    for (std::size_t i = ip + 1; i < k; ++i)
      if (num::sign(plus[i]) > 0) left += plus[i] * (breaks[i + 1] - breaks[i]);
  }
  if (im < k) {
    left += rem_m;
    for (std::size_t i = im + 1; i < k; ++i)
      if (num::sign(minus[i]) > 0) left += minus[i] * (breaks[i + 1] - breaks[i]);
  }
  if (!num::is_zero(left)) throw DomainError("monotone matching of densities with different total mass");
  return out;
}

template <class T>
std::size_t piece_of(const std::vector<T>& breaks, const T& lo, const T& hi) {
  std::size_t i = find_break(breaks, lo);
  if (i == npos || i + 1 >= breaks.size() || !num::eq(breaks[i + 1], hi))
    throw InternalError("matched interval does not align with the refined partition");
  return i;
}

template <class T>
SignedMatching<T> match_signed(const PiecewiseConstant<T>& density) {
  const auto pos = density.positive_part();
  const auto neg = density.negative_part();
  auto blocks = monotone_match(density.breaks(), pos.values(), neg.values());
  std::vector<T> pts = density.breaks();
  for (const auto& blk : blocks) {
    pts.push_back(blk.plus_lo);
    pts.push_back(blk.plus_hi);
    pts.push_back(blk.minus_lo);
    pts.push_back(blk.minus_hi);
  }
  SignedMatching<T> sm;
  sm.breaks = unique_sorted(std::move(pts));
  sm.total = T(0);
  const std::size_t n = sm.breaks.size() - 1;
  sm.partner.assign(n, npos);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t bp = density.piece_index(midpoint(sm.breaks[i], sm.breaks[i + 1]));
    sm.base_piece.push_back(bp);
    int s = num::sign(density.values()[bp]);
    sm.sign.push_back(s > 0 ? Sign::plus : (s < 0 ? Sign::minus : Sign::zero));
  }
  for (const auto& blk : blocks) {
    std::size_t ip = piece_of(sm.breaks, blk.plus_lo, blk.plus_hi);
    std::size_t im = piece_of(sm.breaks, blk.minus_lo, blk.minus_hi);
    sm.partner[ip] = im;
    sm.partner[im] = ip;
    sm.total += blk.mass;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (sm.sign[i] != Sign::zero && sm.partner[i] == npos)
      throw InternalError("a signed piece was left unmatched");
  return sm;
}

#define MOT_INSTANTIATE(T)                                                                          \
  template class PiecewiseConstant<T>;                                                              \
  template class PiecewiseLinear<T>;                                                                \
  template bool operator==(const PiecewiseConstant<T>&, const PiecewiseConstant<T>&);              \
  template bool operator==(const PiecewiseLinear<T>&, const PiecewiseLinear<T>&);                  \
  template std::vector<T> merge_breaks(const std::vector<T>&, const std::vector<T>&);              \
  template std::vector<T> unique_sorted(std::vector<T>);                                            \
  template std::size_t find_break(const std::vector<T>&, const T&);                                 \
  template PiecewiseConstant<T> operator-(const PiecewiseConstant<T>&, const PiecewiseConstant<T>&); \
  template T integrate(const PiecewiseConstant<T>&, const T&);                                      \
  template T integrate_positive_part(const PiecewiseConstant<T>&, const T&);                        \
  template PiecewiseLinear<T> antiderivative(const PiecewiseConstant<T>&);                          \
  template PiecewiseLinear<T> generalized_left_inverse(const PiecewiseLinear<T>&);                  \
  template PiecewiseLinear<T> compose(const PiecewiseLinear<T>&, const PiecewiseLinear<T>&);        \
  template PiecewiseConstant<T> compose_pc(const PiecewiseConstant<T>&, const PiecewiseLinear<T>&); \
  template std::vector<MatchBlock<T>> monotone_match(const std::vector<T>&, const std::vector<T>&,  \
                                                     const std::vector<T>&);                        \
  template std::size_t piece_of(const std::vector<T>&, const T&, const T&);                         \
  template SignedMatching<T> match_signed(const PiecewiseConstant<T>&);

MOT_INSTANTIATE(Rational)
MOT_INSTANTIATE(double)

}  // namespace mot
