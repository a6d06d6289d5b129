#include "mot/lp.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace mot {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

template <class T>
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t width) : m_(m), w_(width), t_(m + 1, width) {}

  T& at(std::size_t i, std::size_t j) { return t_(i, j); }
  const T& at(std::size_t i, std::size_t j) const { return t_(i, j); }
  std::size_t rhs() const { return w_ - 1; }
  std::size_t obj() const { return m_; }

  void pivot(std::size_t p, std::size_t q) {
    const T piv = t_(p, q);
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < w_; ++j) {
      if (num::is_zero(t_(p, j))) {
        t_(p, j) = T(0);
        continue;
      }
      t_(p, j) /= piv;
      nz.push_back(j);
    }
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == p || num::is_zero(t_(i, q))) continue;
      const T f = t_(i, q);
      for (std::size_t j : nz) t_(i, j) -= f * t_(p, j);
      t_(i, q) = T(0);
    }
  }

 private:
  std::size_t m_, w_;
  Matrix<T> t_;
};

// Runs simplex iterations on columns flagged in `allowed`; returns false when unbounded.
template <class T>
bool iterate(Tableau<T>& tab, std::vector<std::size_t>& basis, const std::vector<bool>& allowed) {
  const std::size_t m = basis.size();
  bool bland = false;
  std::size_t degenerate_run = 0;
  for (std::size_t guard = 0;; ++guard) {
    if (guard > 50'000'000) throw InternalError("simplex iteration cap reached");
    std::size_t q = kNone;
    T best(0);
    for (std::size_t j = 0; j < allowed.size(); ++j) {
      if (!allowed[j]) continue;
      const T& z = tab.at(tab.obj(), j);
      if (!num::lt(z, T(0))) continue;
      if (bland) {
        q = j;
        break;
      }
      if (q == kNone || z < best) {
        q = j;
        best = z;
      }
    }
    if (q == kNone) return true;
    std::size_t p = kNone;
    T ratio(0);
    for (std::size_t i = 0; i < m; ++i) {
      const T& a = tab.at(i, q);
      if (!num::lt(T(0), a)) continue;
      T r = tab.at(i, tab.rhs()) / a;
      if (p == kNone || num::lt(r, ratio) || (num::eq(r, ratio) && basis[i] < basis[p])) {
        p = i;
        ratio = r;
      }
    }
    if (p == kNone) return false;
    if (num::is_zero(ratio)) {
      if (++degenerate_run > 2 * (m + allowed.size())) bland = true;
    } else {
      degenerate_run = 0;
    }
    tab.pivot(p, q);
    basis[p] = q;
  }
}

}  // namespace

template <class T>
LpResult<T> solve_lp(const Matrix<T>& A, const std::vector<T>& b, const std::vector<T>& c) {
  const std::size_t m = A.rows(), n = A.cols();
  if (b.size() != m || c.size() != n) throw StructuralError("LP dimensions do not match");
  const std::size_t width = n + m + 1;
  Tableau<T> tab(m, width);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < T(0);
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = flip ? T(-A(i, j)) : A(i, j);
    tab.at(i, n + i) = T(1);
    tab.at(i, tab.rhs()) = flip ? T(-b[i]) : b[i];
    basis[i] = n + i;
  }
  // Phase 1: minimise the sum of artificials.
  for (std::size_t j = 0; j < n; ++j) {
    T s(0);
    for (std::size_t i = 0; i < m; ++i) s += tab.at(i, j);
    tab.at(tab.obj(), j) = -s;
  }
  {
    T s(0);
    for (std::size_t i = 0; i < m; ++i) s += tab.at(i, tab.rhs());
    tab.at(tab.obj(), tab.rhs()) = -s;
  }
  std::vector<bool> allowed(n + m, true);
  iterate(tab, basis, allowed);
  LpResult<T> res;
  if (!num::is_zero(tab.at(tab.obj(), tab.rhs()))) return res;

  // Drive artificials out of the basis; rows where that fails are redundant.
  std::vector<bool> dead(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    std::size_t q = kNone;
    for (std::size_t j = 0; j < n && q == kNone; ++j)
      if (!num::is_zero(tab.at(i, j))) q = j;
    if (q == kNone) {
      dead[i] = true;
      continue;
    }
    tab.pivot(i, q);
    basis[i] = q;
  }
  for (std::size_t j = n; j < n + m; ++j) allowed[j] = false;
  for (std::size_t i = 0; i < m; ++i)
    if (dead[i])
      for (std::size_t j = 0; j < width; ++j) tab.at(i, j) = T(0);

  // Phase 2 objective row: z_j = c_j - c_B B^{-1} A_j.
  for (std::size_t j = 0; j < width; ++j) tab.at(tab.obj(), j) = j < n ? c[j] : T(0);
  for (std::size_t i = 0; i < m; ++i) {
    if (dead[i] || basis[i] >= n) continue;
    const T cb = c[basis[i]];
    if (num::is_zero(cb)) continue;
    for (std::size_t j = 0; j < width; ++j)
      if (!num::is_zero(tab.at(i, j))) tab.at(tab.obj(), j) -= cb * tab.at(i, j);
  }
  // Dead rows keep an artificial basis entry that never re-enters (its column is disallowed).
  if (!iterate(tab, basis, allowed)) {
    res.status = LpStatus::unbounded;
    return res;
  }
  res.status = LpStatus::optimal;
  res.x.assign(n, T(0));
  for (std::size_t i = 0; i < m; ++i)
    if (!dead[i] && basis[i] < n) res.x[basis[i]] = tab.at(i, tab.rhs());
  res.value = T(0);
  for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
  return res;
}

namespace {

// Row-reduces [A | b]; returns the independent rows, or nothing when inconsistent.
template <class T>
bool independent_rows(const Matrix<T>& A, const std::vector<T>& b, Matrix<T>& Ar, std::vector<T>& br) {
  const std::size_t m = A.rows(), n = A.cols();
  Matrix<T> M(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) M(i, j) = A(i, j);
    M(i, n) = b[i];
  }
  std::size_t r = 0;
  for (std::size_t j = 0; j < n && r < m; ++j) {
    std::size_t p = r;
    while (p < m && num::is_zero(M(p, j))) ++p;
    if (p == m) continue;
    for (std::size_t k = 0; k <= n; ++k) std::swap(M(p, k), M(r, k));
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || num::is_zero(M(i, j))) continue;
      const T f = M(i, j) / M(r, j);
      for (std::size_t k = 0; k <= n; ++k) M(i, k) -= f * M(r, k);
    }
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (!num::is_zero(M(i, n))) return false;
  Ar = Matrix<T>(r, n);
  br.assign(r, T(0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n; ++j) Ar(i, j) = M(i, j);
    br[i] = M(i, n);
  }
  return true;
}

template <class T>
bool solve_square(Matrix<T> B, std::vector<T> rhs, std::vector<T>& x) {
  const std::size_t r = B.rows();
  for (std::size_t j = 0; j < r; ++j) {
    std::size_t p = j;
    while (p < r && num::is_zero(B(p, j))) ++p;
    if (p == r) return false;
    if (p != j) {
      for (std::size_t k = 0; k < r; ++k) std::swap(B(p, k), B(j, k));
      std::swap(rhs[p], rhs[j]);
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (i == j || num::is_zero(B(i, j))) continue;
      const T f = B(i, j) / B(j, j);
      for (std::size_t k = j; k < r; ++k) B(i, k) -= f * B(j, k);
      rhs[i] -= f * rhs[j];
    }
  }
  x.resize(r);
  for (std::size_t i = 0; i < r; ++i) x[i] = rhs[i] / B(i, i);
  return true;
}

}  // namespace

template <class T>
std::vector<std::vector<T>> enumerate_vertices(const Matrix<T>& A, const std::vector<T>& b, std::size_t limit) {
  Matrix<T> Ar;
  std::vector<T> br;
  if (!independent_rows(A, b, Ar, br)) return {};
  const std::size_t r = Ar.rows(), n = Ar.cols();
  std::vector<std::vector<T>> out;
  if (r == 0) {
    out.push_back(std::vector<T>(n, T(0)));
    return out;
  }
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  std::size_t visited = 0;
  auto less = [](const std::vector<T>& a, const std::vector<T>& c) {
    return std::lexicographical_compare(a.begin(), a.end(), c.begin(), c.end());
  };
  std::set<std::vector<T>, decltype(less)> seen(less);
  while (true) {
    if (++visited > limit) throw ScaleError("vertex enumeration exceeds the basis limit");
    Matrix<T> B(r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < r; ++k) B(i, k) = Ar(i, idx[k]);
    std::vector<T> xb;
    if (solve_square(B, br, xb) &&
        std::all_of(xb.begin(), xb.end(), [](const T& v) { return !num::lt(v, T(0)); })) {
      std::vector<T> x(n, T(0));
      for (std::size_t k = 0; k < r; ++k) x[idx[k]] = num::is_zero(xb[k]) ? T(0) : xb[k];
      if (seen.insert(x).second) out.push_back(std::move(x));
    }
    // Next combination in lexicographic order.
    std::size_t k = r;
    while (k > 0 && idx[k - 1] == n - r + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t t = k; t < r; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

template LpResult<Rational> solve_lp(const Matrix<Rational>&, const std::vector<Rational>&,
                                     const std::vector<Rational>&);
template LpResult<double> solve_lp(const Matrix<double>&, const std::vector<double>&, const std::vector<double>&);
template std::vector<std::vector<Rational>> enumerate_vertices(const Matrix<Rational>&, const std::vector<Rational>&,
                                                               std::size_t);
template std::vector<std::vector<double>> enumerate_vertices(const Matrix<double>&, const std::vector<double>&,
                                                             std::size_t);

}  // namespace mot
