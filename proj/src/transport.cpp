#include "mot/transport.hpp"

#include <algorithm>
#include <deque>

#include "mot/kernels.hpp"

namespace mot {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

template <class T>
void check_problem(const Matrix<T>& cost, const std::vector<T>& a, const std::vector<T>& b) {
  if (a.empty() || b.empty()) throw StructuralError("transport marginals must be nonempty");
  if (cost.rows() != a.size() || cost.cols() != b.size())
    throw StructuralError("cost matrix does not match the marginals");
  T sa(0), sb(0);
  for (const T& v : a) {
    if (num::lt(v, T(0))) throw StructuralError("negative marginal weight");
    sa += v;
  }
  for (const T& v : b) {
    if (num::lt(v, T(0))) throw StructuralError("negative marginal weight");
    sb += v;
  }
  if (!num::eq(sa, sb)) throw StructuralError("transport marginals have different total mass");
}

struct Cell {
  std::size_t i, j;
};

}  // namespace

template <class T>
OtResult<T> solve_ot(const Matrix<T>& c, const std::vector<T>& a, const std::vector<T>& b) {
  check_problem(c, a, b);
  const std::size_t m = a.size(), n = b.size(), nodes = m + n;

  std::vector<Cell> basis;
  std::vector<T> flow;
  basis.reserve(nodes - 1);
  flow.reserve(nodes - 1);
  {
    std::vector<T> ra(a), cb(b);
    std::size_t i = 0, j = 0;
    while (true) {
      T x = std::min(ra[i], cb[j]);
      if (num::lt(x, T(0)) || num::is_zero(x)) x = T(0);
      basis.push_back({i, j});
      flow.push_back(x);
      ra[i] -= x;
      cb[j] -= x;
      if (i == m - 1 && j == n - 1) break;
      if (i == m - 1)
        ++j;
      else if (j == n - 1)
        ++i;
      else if (num::is_zero(ra[i]))
        ++i;
      else
        ++j;
    }
  }

  std::vector<std::size_t> cell_of(m * n, kNone);
  for (std::size_t k = 0; k < basis.size(); ++k) cell_of[basis[k].i * n + basis[k].j] = k;

  std::vector<std::vector<std::size_t>> adj(nodes);
  std::vector<T> pot(nodes);
  std::vector<std::size_t> parent_edge(nodes);
  std::vector<bool> seen(nodes);
  std::deque<std::size_t> queue;

  auto rebuild_adjacency = [&] {
    for (auto& l : adj) l.clear();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      adj[basis[k].i].push_back(k);
      adj[m + basis[k].j].push_back(k);
    }
  };
  auto other_end = [&](std::size_t k, std::size_t node) {
    return node < m ? m + basis[k].j : basis[k].i;
  };
  // BFS over the basis tree from `root`, recording the edge used to reach each node.
  auto bfs = [&](std::size_t root, bool with_potentials) {
    std::fill(seen.begin(), seen.end(), false);
    std::fill(parent_edge.begin(), parent_edge.end(), kNone);
    seen[root] = true;
    if (with_potentials) pot[root] = T(0);
    queue.assign(1, root);
    while (!queue.empty()) {
      const std::size_t node = queue.front();
      queue.pop_front();
      for (std::size_t k : adj[node]) {
        const std::size_t next = other_end(k, node);
        if (seen[next]) continue;
        seen[next] = true;
        parent_edge[next] = k;
        // u_i + v_j = c_ij on basic cells.
        if (with_potentials) pot[next] = c(basis[k].i, basis[k].j) - pot[node];
        queue.push_back(next);
      }
    }
  };

  OtResult<T> res;
  bool bland = false;
  std::size_t degenerate_run = 0;
  std::vector<std::size_t> path;
  for (;;) {
    if (res.pivots > 100'000'000) throw InternalError("transportation simplex iteration cap reached");
    rebuild_adjacency();
    bfs(0, true);

    std::size_t ei = kNone, ej = kNone;
    T best(0);
    for (std::size_t i = 0; i < m && !(bland && ei != kNone); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (cell_of[i * n + j] != kNone) continue;
        const T r = c(i, j) - pot[i] - pot[m + j];
        if (!num::lt(r, T(0))) continue;
        if (bland) {
          ei = i;
          ej = j;
          break;
        }
        if (ei == kNone || r < best) {
          ei = i;
          ej = j;
          best = r;
        }
      }
    }
    if (ei == kNone) break;

    // Cycle: entering cell, then the tree path from row ei back to column ej.
    bfs(m + ej, false);
    path.clear();
    for (std::size_t node = ei; node != m + ej;) {
      const std::size_t k = parent_edge[node];
      path.push_back(k);
      node = other_end(k, node);
    }
    // Path edges alternate -, +, -, ... starting at row ei.
    std::size_t leave = kNone;
    T theta(0);
    for (std::size_t t = 0; t < path.size(); t += 2) {
      const std::size_t k = path[t];
      const bool better = leave == kNone || num::lt(flow[k], theta) ||
                          (num::eq(flow[k], theta) && basis[k].i * n + basis[k].j < basis[leave].i * n + basis[leave].j);
      if (better) {
        leave = k;
        theta = flow[k];
      }
    }
    if (num::is_zero(theta)) {
      if (++degenerate_run > 2 * nodes) bland = true;
    } else {
      degenerate_run = 0;
    }
    for (std::size_t t = 0; t < path.size(); ++t) {
      T& f = flow[path[t]];
      f = t % 2 == 0 ? T(f - theta) : T(f + theta);
      if (num::is_zero(f)) f = T(0);
    }
    cell_of[basis[leave].i * n + basis[leave].j] = kNone;
    basis[leave] = {ei, ej};
    flow[leave] = theta;
    cell_of[ei * n + ej] = leave;
    ++res.pivots;
  }

  res.plan.row_weights = a;
  res.plan.col_weights = b;
  res.plan.mass = Matrix<T>(m, n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    res.plan.mass(basis[k].i, basis[k].j) = flow[k];
    res.value += c(basis[k].i, basis[k].j) * flow[k];
  }
  return res;
}

template <class T>
OtResult<T> solve_ot(const Matrix<T>& cost, const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
  std::vector<T> a, b;
  for (const auto& at : mu.atoms()) a.push_back(at.w);
  for (const auto& at : nu.atoms()) b.push_back(at.w);
  return solve_ot(cost, a, b);
}

template <class T>
OtResult<T> solve_ot_lp(const Matrix<T>& cost, const std::vector<T>& a, const std::vector<T>& b) {
  check_problem(cost, a, b);
  const std::size_t m = a.size(), n = b.size();
  Matrix<T> A(m + n, m * n);
  std::vector<T> rhs(m + n), c(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      A(i, i * n + j) = T(1);
      A(m + j, i * n + j) = T(1);
      c[i * n + j] = cost(i, j);
    }
  std::copy(a.begin(), a.end(), rhs.begin());
  std::copy(b.begin(), b.end(), rhs.begin() + m);
  const LpResult<T> lp = solve_lp(A, rhs, c);
  if (lp.status != LpStatus::optimal) throw InternalError("transport LP is not optimal");
  OtResult<T> res;
  res.value = lp.value;
  res.plan.row_weights = a;
  res.plan.col_weights = b;
  res.plan.mass = Matrix<T>(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) res.plan.mass(i, j) = lp.x[i * n + j];
  return res;
}

template <>
Matrix<double> distance_cost(const std::vector<double>& xs, const std::vector<double>& ys, const Exponent& rho) {
  Matrix<double> c(xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) kernels::abs_pow_diff(xs[i], ys.data(), ys.size(), rho, c.row(i));
  return c;
}

template <>
Matrix<Rational> distance_cost(const std::vector<Rational>& xs, const std::vector<Rational>& ys,
                               const Exponent& rho) {
  Matrix<Rational> c(xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) c(i, j) = abs_pow(Rational(xs[i] - ys[j]), rho);
  return c;
}

template <class T>
std::size_t support_size(const TransportPlan<T>& plan) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < plan.mass.rows(); ++i)
    for (std::size_t j = 0; j < plan.mass.cols(); ++j)
      if (!num::is_zero(plan.mass(i, j))) ++k;
  return k;
}

#define MOT_INSTANTIATE(T)                                                                            \
  template OtResult<T> solve_ot(const Matrix<T>&, const std::vector<T>&, const std::vector<T>&);     \
  template OtResult<T> solve_ot(const Matrix<T>&, const DiscreteMeasure<T>&, const DiscreteMeasure<T>&); \
  template OtResult<T> solve_ot_lp(const Matrix<T>&, const std::vector<T>&, const std::vector<T>&);  \
  template std::size_t support_size(const TransportPlan<T>&);

MOT_INSTANTIATE(Rational)
MOT_INSTANTIATE(double)

}  // namespace mot
