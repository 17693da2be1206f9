#include "povar/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace povar {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

struct Tableau {
  // rows: m x (ncols + 1), rhs stored in the last column.
  std::vector<std::vector<double>> row;
  std::vector<double> cost;  // reduced-cost row, size ncols + 1 (last = -objective)
  std::vector<int> basis;    // basic column per row
  std::vector<char> allowed; // columns permitted to enter
  std::size_t ncols = 0;

  double& rhs(std::size_t i) { return row[i][ncols]; }

  void pivot(std::size_t pr, std::size_t pc) {
    std::vector<double>& prow = row[pr];
    const double pv = prow[pc];
    for (double& v : prow) v /= pv;
    prow[pc] = 1.0;  // avoid roundoff drift on the pivot itself
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == pr) continue;
      const double f = row[i][pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= ncols; ++j) row[i][j] -= f * prow[j];
      row[i][pc] = 0.0;
    }
    const double fc = cost[pc];
    if (fc != 0.0) {
      for (std::size_t j = 0; j <= ncols; ++j) cost[j] -= fc * prow[j];
      cost[pc] = 0.0;
    }
    basis[pr] = static_cast<int>(pc);
  }
};

// Bland's rule simplex on the tableau. Returns optimal/unbounded/
// iteration_limit; `iters` accumulates pivots.
LpStatus run_simplex(Tableau& t, double tol, int max_iter, int& iters) {
  const std::size_t m = t.row.size();
  while (true) {
    std::size_t enter = t.ncols;
    for (std::size_t j = 0; j < t.ncols; ++j) {  // smallest eligible index
      if (t.allowed[j] && t.cost[j] < -tol) {
        enter = j;
        break;
      }
    }
    if (enter == t.ncols) return LpStatus::optimal;

    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double a = t.row[i][enter];
      if (a > tol) {
        const double ratio = t.rhs(i) / a;
        if (ratio < best_ratio - 1e-15 ||
            (std::fabs(ratio - best_ratio) <= 1e-15 &&
             (leave == m || t.basis[i] < t.basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) return LpStatus::unbounded;
    t.pivot(leave, enter);
    if (++iters >= max_iter) return LpStatus::iteration_limit;
  }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, double tol, int max_iter) {
  const std::size_t m = lp.A.rows();
  const std::size_t n = lp.A.cols();
  if (lp.rhs.size() != m || lp.is_le.size() != m)
    throw std::invalid_argument("solve_lp: row metadata sizes do not match A");
  if (lp.cost.size() != n || lp.nonneg.size() != n)
    throw std::invalid_argument("solve_lp: column metadata sizes do not match A");
  for (double v : lp.rhs)
    if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite rhs");
  for (double v : lp.cost)
    if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite cost");
  if (tol <= 0.0) throw std::invalid_argument("solve_lp: tol must be positive");

  // Column layout: structural variables first (free ones split into x+ - x-),
  // then slacks for "<=" rows, then artificials as needed.
  std::vector<std::size_t> col_of(n);     // first column of variable j
  std::size_t nstruct = 0;
  for (std::size_t j = 0; j < n; ++j) {
    col_of[j] = nstruct;
    nstruct += lp.nonneg[j] ? 1 : 2;
  }
  std::size_t nslack = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (lp.is_le[i]) ++nslack;

  Tableau t;
  t.ncols = nstruct + nslack;  // artificials appended below
  t.row.assign(m, std::vector<double>(t.ncols + 1, 0.0));
  t.basis.assign(m, -1);

  std::size_t slack_at = nstruct;
  std::vector<long long> slack_col(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = lp.A(i, j);
      t.row[i][col_of[j]] = v;
      if (!lp.nonneg[j]) t.row[i][col_of[j] + 1] = -v;
    }
    if (lp.is_le[i]) {
      slack_col[i] = static_cast<long long>(slack_at);
      t.row[i][slack_at++] = 1.0;
    }
    t.rhs(i) = lp.rhs[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (t.rhs(i) < 0.0)
      for (std::size_t j = 0; j <= t.ncols; ++j) t.row[i][j] = -t.row[i][j];
  }

  // Choose the initial basis: a slack with +1 coefficient where available,
  // otherwise an artificial.
  std::vector<std::size_t> artificial_rows;
  for (std::size_t i = 0; i < m; ++i) {
    if (slack_col[i] >= 0 && t.row[i][static_cast<std::size_t>(slack_col[i])] == 1.0)
      t.basis[i] = static_cast<int>(slack_col[i]);
    else
      artificial_rows.push_back(i);
  }
  const std::size_t nart = artificial_rows.size();
  const std::size_t art_base = t.ncols;
  if (nart > 0) {
    t.ncols += nart;
    for (auto& r : t.row) r.insert(r.end() - 1, nart, 0.0);
    for (std::size_t k = 0; k < nart; ++k) {
      t.row[artificial_rows[k]][art_base + k] = 1.0;
      t.basis[artificial_rows[k]] = static_cast<int>(art_base + k);
    }
  }
  t.allowed.assign(t.ncols, 1);

  if (max_iter <= 0) max_iter = 2000 + 200 * static_cast<int>(m + t.ncols);

  LpSolution sol;
  sol.iterations = 0;

  if (nart > 0) {  // phase 1: minimize the sum of artificials
    t.cost.assign(t.ncols + 1, 0.0);
    for (std::size_t k = 0; k < nart; ++k) t.cost[art_base + k] = 1.0;
    for (std::size_t i : artificial_rows)  // make basic reduced costs zero
      for (std::size_t j = 0; j <= t.ncols; ++j) t.cost[j] -= t.row[i][j];
    LpStatus st = run_simplex(t, tol, max_iter, sol.iterations);
    if (st == LpStatus::iteration_limit) {
      sol.status = st;
      return sol;
    }
    const double phase1_obj = -t.cost[t.ncols];
    if (phase1_obj > tol) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    // Drive remaining artificials out of the basis (degenerate pivots), or
    // drop redundant rows.
    std::vector<char> drop(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] < static_cast<int>(art_base)) continue;
      std::size_t piv = art_base;
      for (std::size_t j = 0; j < art_base; ++j)
        if (std::fabs(t.row[i][j]) > tol) {
          piv = j;
          break;
        }
      if (piv < art_base)
        t.pivot(i, piv);
      else
        drop[i] = 1;  // all-zero structural row: redundant constraint
    }
    if (std::find(drop.begin(), drop.end(), 1) != drop.end()) {
      std::vector<std::vector<double>> rows;
      std::vector<int> basis;
      for (std::size_t i = 0; i < m; ++i)
        if (!drop[i]) {
          rows.push_back(std::move(t.row[i]));
          basis.push_back(t.basis[i]);
        }
      t.row = std::move(rows);
      t.basis = std::move(basis);
    }
    for (std::size_t k = 0; k < nart; ++k) t.allowed[art_base + k] = 0;
  }

  // Phase 2: original objective over the structural/slack columns.
  t.cost.assign(t.ncols + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    t.cost[col_of[j]] = lp.cost[j];
    if (!lp.nonneg[j]) t.cost[col_of[j] + 1] = -lp.cost[j];
  }
  for (std::size_t i = 0; i < t.row.size(); ++i) {  // restore reduced costs
    const double cb = t.cost[static_cast<std::size_t>(t.basis[i])];
    if (cb != 0.0)
      for (std::size_t j = 0; j <= t.ncols; ++j) t.cost[j] -= cb * t.row[i][j];
  }
  LpStatus st = run_simplex(t, tol, max_iter, sol.iterations);
  sol.status = st;
  if (st != LpStatus::optimal) return sol;

  std::vector<double> z(t.ncols, 0.0);
  for (std::size_t i = 0; i < t.row.size(); ++i)
    z[static_cast<std::size_t>(t.basis[i])] = t.rhs(i);
  sol.x.assign(n, 0.0);
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sol.x[j] = lp.nonneg[j] ? z[col_of[j]] : z[col_of[j]] - z[col_of[j] + 1];
    sol.objective += lp.cost[j] * sol.x[j];
  }
  return sol;
}

}  // namespace povar
