// Small dense two-phase simplex (Bland's rule) used as an independent
// reference for tiny LPs in the tests. Not meant for anything large.
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace oracle {

enum class RowSense { Le, Eq, Ge };

struct DenseLp {
  int n = 0;
  std::vector<double> cost;
  std::vector<double> lower;  // finite
  std::vector<double> upper;  // may be +inf
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> sense;
  std::vector<double> rhs;

  int add_var(double lo, double hi, double c) {
    lower.push_back(lo);
    upper.push_back(hi);
    cost.push_back(c);
    for (auto& r : rows) r.push_back(0.0);
    return n++;
  }
  void add_row(std::vector<std::pair<int, double>> terms, RowSense s, double b) {
    std::vector<double> r(n, 0.0);
    for (auto [j, a] : terms) r[j] += a;
    rows.push_back(std::move(r));
    sense.push_back(s);
    rhs.push_back(b);
  }
};

struct DenseLpResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> x;
};

inline DenseLpResult solve_dense(const DenseLp& lp) {
  using Real = long double;
  constexpr Real eps = 1e-10L;
  const int n = lp.n;

  // Shift x = lower + y, y >= 0; finite upper bounds become rows.
  std::vector<std::vector<Real>> A;
  std::vector<RowSense> S;
  std::vector<Real> b;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    std::vector<Real> r(lp.rows[i].begin(), lp.rows[i].end());
    Real bi = lp.rhs[i];
    for (int j = 0; j < n; ++j) bi -= r[j] * lp.lower[j];
    A.push_back(std::move(r));
    S.push_back(lp.sense[i]);
    b.push_back(bi);
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower[j])) throw std::invalid_argument("dense LP needs finite lower bounds");
    if (std::isfinite(lp.upper[j])) {
      std::vector<Real> r(n, 0.0L);
      r[j] = 1.0L;
      A.push_back(std::move(r));
      S.push_back(RowSense::Le);
      b.push_back(static_cast<Real>(lp.upper[j]) - lp.lower[j]);
    }
  }
  const int m = static_cast<int>(A.size());
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0) {
      for (auto& a : A[i]) a = -a;
      b[i] = -b[i];
      if (S[i] == RowSense::Le) S[i] = RowSense::Ge;
      else if (S[i] == RowSense::Ge) S[i] = RowSense::Le;
    }
  }

  // Columns: y | slack/surplus | artificial | rhs.
  int n_slack = 0, n_art = 0;
  for (auto s : S) {
    if (s != RowSense::Eq) ++n_slack;
    if (s != RowSense::Le) ++n_art;
  }
  const int cols = n + n_slack + n_art;
  std::vector<std::vector<Real>> T(m, std::vector<Real>(cols + 1, 0.0L));
  std::vector<int> basis(m);
  {
    int sc = n, ac = n + n_slack;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) T[i][j] = A[i][j];
      T[i][cols] = b[i];
      if (S[i] == RowSense::Le) {
        T[i][sc] = 1.0L;
        basis[i] = sc++;
      } else {
        if (S[i] == RowSense::Ge) T[i][sc++] = -1.0L;
        T[i][ac] = 1.0L;
        basis[i] = ac++;
      }
    }
  }

  const auto pivot = [&](int r, int c) {
    const Real p = T[r][c];
    for (auto& v : T[r]) v /= p;
    for (int i = 0; i < m; ++i) {
      if (i == r || std::fabs(T[i][c]) < 1e-18L) continue;
      const Real f = T[i][c];
      for (int j = 0; j <= cols; ++j) T[i][j] -= f * T[r][j];
    }
    basis[r] = c;
  };

  // Minimises sum over allowed columns of cvec; returns false if unbounded.
  const auto run = [&](const std::vector<Real>& cvec, int allowed) {
    for (int iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        Real d = cvec[j];
        for (int i = 0; i < m; ++i) d -= cvec[basis[i]] * T[i][j];
        if (d < -eps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Real best = 0;
      for (int i = 0; i < m; ++i) {
        if (T[i][enter] > eps) {
          const Real ratio = T[i][cols] / T[i][enter];
          if (leave < 0 || ratio < best - eps ||
              (std::fabs(ratio - best) <= eps && basis[i] < basis[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("dense simplex did not terminate");
  };

  std::vector<Real> phase1(cols, 0.0L);
  for (int j = n + n_slack; j < cols; ++j) phase1[j] = 1.0L;
  run(phase1, cols);
  Real infeas = 0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n + n_slack) infeas += T[i][cols];
  DenseLpResult res;
  if (infeas > 1e-7L) return res;

  // Drive zero-level artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n + n_slack) continue;
    for (int j = 0; j < n + n_slack; ++j)
      if (std::fabs(T[i][j]) > 1e-9L) {
        pivot(i, j);
        break;
      }
  }

  std::vector<Real> phase2(cols, 0.0L);
  for (int j = 0; j < n; ++j) phase2[j] = lp.cost[j];
  // Artificials still basic are redundant rows at zero; bar them by
  // restricting entering columns to the non-artificial ones.
  if (!run(phase2, n + n_slack)) throw std::runtime_error("dense LP unbounded");

  res.feasible = true;
  res.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = static_cast<double>(T[i][cols]);
  res.objective = 0.0;
  for (int j = 0; j < n; ++j) {
    res.x[j] += lp.lower[j];
    res.objective += lp.cost[j] * res.x[j];
  }
  return res;
}

}  // namespace oracle
