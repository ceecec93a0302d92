#pragma once

// Tiny dense two-phase simplex for the desk-scale linear programs used by
// the convex module (Minkowski gauges, extreme-point filters). Bland's
// rule, standard form: min c.x  s.t.  A x = b, x >= 0.

#include <cmath>
#include <limits>
#include <vector>

namespace lipspace::detail {

struct LpResult {
  bool feasible = false;
  double objective = 0;
  std::vector<double> x;
};

class Simplex {
public:
  LpResult solve(std::vector<std::vector<double>> A, std::vector<double> b,
                 std::vector<double> c) {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    for (std::size_t i = 0; i < m; ++i)
      if (b[i] < 0) {
        b[i] = -b[i];
        for (auto& v : A[i]) v = -v;
      }
    // Tableau columns: n structural + m artificial + rhs.
    tab_.assign(m + 1, std::vector<double>(n + m + 1, 0.0));
    basis_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) tab_[i][j] = A[i][j];
      tab_[i][n + i] = 1.0;
      tab_[i].back() = b[i];
      basis_[i] = n + i;
    }
    ncols_ = n + m;
    // Phase 1: minimize sum of artificials.
    for (std::size_t j = 0; j < ncols_ + 1; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < m; ++i) s += tab_[i][j];
      tab_[m][j] = (j >= n && j < n + m) ? s - 1.0 : s;
    }
    run(m, n + m);
    if (std::abs(tab_[m].back()) > 1e-8) return {};
    // Drive artificials out of the basis when possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis_[i] < n) continue;
      std::size_t enter = n;
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(tab_[i][j]) > 1e-10) {
          enter = j;
          break;
        }
      if (enter < n) pivot(i, enter);
    }
    // Phase 2 objective row.
    std::vector<double>& obj = tab_[m];
    std::fill(obj.begin(), obj.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) obj[j] = -c[j];
    for (std::size_t i = 0; i < m; ++i) {
      if (basis_[i] >= n) continue;
      double coef = obj[basis_[i]];
      if (coef == 0) continue;
      for (std::size_t j = 0; j < ncols_ + 1; ++j) obj[j] -= coef * tab_[i][j];
    }
    run(m, n);  // artificial columns excluded from pricing
    LpResult r;
    r.feasible = true;
    r.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      if (basis_[i] < n) r.x[basis_[i]] = tab_[i].back();
    r.objective = 0;
    for (std::size_t j = 0; j < n; ++j) r.objective += c[j] * r.x[j];
    return r;
  }

private:
  void pivot(std::size_t row, std::size_t col) {
    const std::size_t m = basis_.size();
    double p = tab_[row][col];
    for (auto& v : tab_[row]) v /= p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == row) continue;
      double f = tab_[i][col];
      if (f == 0) continue;
      for (std::size_t j = 0; j < ncols_ + 1; ++j) tab_[i][j] -= f * tab_[row][j];
    }
    basis_[row] = col;
  }

  void run(std::size_t m, std::size_t price_cols) {
    for (;;) {
      std::size_t enter = ncols_;
      for (std::size_t j = 0; j < price_cols; ++j)  // Bland: first improving
        if (tab_[m][j] > 1e-10) {
          enter = j;
          break;
        }
      if (enter == ncols_) return;
      std::size_t leave = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (tab_[i][enter] <= 1e-10) continue;
        double ratio = tab_[i].back() / tab_[i][enter];
        if (ratio < best - 1e-12 ||
            (ratio < best + 1e-12 && (leave == m || basis_[i] < basis_[leave]))) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m) return;  // unbounded; callers' problems are bounded
      pivot(leave, enter);
    }
  }

  std::vector<std::vector<double>> tab_;
  std::vector<std::size_t> basis_;
  std::size_t ncols_ = 0;
};

inline LpResult solve_lp(std::vector<std::vector<double>> A, std::vector<double> b,
                         std::vector<double> c) {
  return Simplex{}.solve(std::move(A), std::move(b), std::move(c));
}

}  // namespace lipspace::detail
