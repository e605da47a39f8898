#pragma once

// Dense two-phase simplex for small standard-form problems
//   minimize cost.y  subject to  M y = r,  y >= 0
// with Bland's anti-cycling rule. Templated on the scalar so the same code
// runs in double precision and in exact rational arithmetic.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cogrates::lp {

enum class Status { Optimal, Infeasible, Unbounded };

template <class T>
struct Result {
  Status status = Status::Infeasible;
  T value{};
  std::vector<T> y;
};

template <class T>
T abs_of(const T& v) {
  return v < T(0) ? T(-v) : v;
}

template <class T>
Result<T> minimize_standard_form(const std::vector<std::vector<T>>& M, const std::vector<T>& r,
                                 const std::vector<T>& cost, const T& eps) {
  const std::size_t n_eq = M.size();
  const std::size_t n = cost.size();
  const std::size_t cols = n + n_eq;  // structural + artificial
  // tab[i] holds the constraint row, followed by its right-hand side.
  std::vector<std::vector<T>> tab(n_eq, std::vector<T>(cols + 1, T(0)));
  std::vector<std::size_t> basis(n_eq);
  for (std::size_t i = 0; i < n_eq; ++i) {
    bool flip = r[i] < T(0);
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = flip ? T(-M[i][j]) : M[i][j];
    tab[i][n + i] = T(1);
    tab[i][cols] = flip ? T(-r[i]) : r[i];
    basis[i] = n + i;
  }

  std::size_t iterations = 0;
  const std::size_t max_iterations = 200000;

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    T inv = T(1) / tab[pr][pc];
    for (auto& v : tab[pr]) v *= inv;
    tab[pr][pc] = T(1);
    for (std::size_t i = 0; i < n_eq; ++i) {
      if (i == pr) continue;
      T f = tab[i][pc];
      if (f == T(0)) continue;
      for (std::size_t j = 0; j <= cols; ++j) {
        if (tab[pr][j] != T(0)) tab[i][j] -= f * tab[pr][j];
      }
      tab[i][pc] = T(0);
    }
    basis[pr] = pc;
  };

  // Runs simplex iterations for the given column costs; columns with
  // allowed[j] == false never enter. Returns false when unbounded.
  auto run = [&](const std::vector<T>& c, const std::vector<bool>& allowed) -> bool {
    for (;;) {
      if (++iterations > max_iterations) throw std::runtime_error("simplex iteration limit");
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!allowed[j]) continue;
        T d = c[j];
        for (std::size_t i = 0; i < n_eq; ++i) {
          if (tab[i][j] != T(0)) d -= c[basis[i]] * tab[i][j];
        }
        if (d < -eps) {
          enter = j;
          break;
        }
      }
      if (enter == cols) return true;
      std::size_t leave = n_eq;
      T best{};
      for (std::size_t i = 0; i < n_eq; ++i) {
        if (tab[i][enter] > eps) {
          T ratio = tab[i][cols] / tab[i][enter];
          if (leave == n_eq || ratio < best || (ratio == best && basis[i] < basis[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave == n_eq) return false;
      pivot(leave, enter);
    }
  };

  Result<T> out;
  std::vector<T> phase1(cols, T(0));
  for (std::size_t j = n; j < cols; ++j) phase1[j] = T(1);
  std::vector<bool> allowed(cols, true);
  run(phase1, allowed);
  T infeas(0);
  for (std::size_t i = 0; i < n_eq; ++i)
    if (basis[i] >= n) infeas += tab[i][cols];
  T scale(1);
  for (const auto& v : r) scale = abs_of(v) > scale ? abs_of(v) : scale;
  if (infeas > eps * scale * T(10)) {
    out.status = Status::Infeasible;
    return out;
  }
  // Drive remaining artificials out of the basis where possible.
  for (std::size_t i = 0; i < n_eq; ++i) {
    if (basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (abs_of(tab[i][j]) > eps) {
        pivot(i, j);
        break;
      }
    }
  }
  std::vector<T> phase2(cols, T(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = cost[j];
  for (std::size_t j = n; j < cols; ++j) allowed[j] = false;
  if (!run(phase2, allowed)) {
    out.status = Status::Unbounded;
    return out;
  }
  out.status = Status::Optimal;
  out.y.assign(n, T(0));
  T value(0);
  for (std::size_t i = 0; i < n_eq; ++i) {
    if (basis[i] < n) {
      out.y[basis[i]] = tab[i][cols];
      value += cost[basis[i]] * tab[i][cols];
    }
  }
  out.value = value;
  return out;
}

}  // namespace cogrates::lp
