#include "povar/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "povar/parallel.hpp"

namespace povar {

namespace {

void check_square_pair(const Matrix& g0, const Matrix& g1) {
  if (g0.rows() != g0.cols()) throw std::invalid_argument("gamma0_hat must be square");
  if (g1.rows() != g0.rows() || g1.cols() != g0.cols())
    throw std::invalid_argument("gamma matrices must share shape");
  g0.check_finite("gamma0_hat");
  g1.check_finite("gamma1_hat");
}

}  // namespace

int row_support_count(const Matrix& m, std::size_t row, double eps) {
  if (row >= m.rows()) throw std::out_of_range("row index out of range");
  int count = 0;
  for (std::size_t k = 0; k < m.cols(); ++k)
    if (std::fabs(m(row, k)) > eps) ++count;
  return count;
}

Matrix dense_estimate(const Matrix& gamma_h0, const Matrix& gamma_h0p1, double rank_tol) {
  check_square_pair(gamma_h0, gamma_h0p1);
  return matmul(gamma_h0p1, pseudo_inverse(gamma_h0, rank_tol));
}

DantzigRow dantzig_row(const Matrix& gamma0_hat, const std::vector<double>& target_row,
                       double lambda, double tol) {
  if (gamma0_hat.rows() != gamma0_hat.cols())
    throw std::invalid_argument("gamma0_hat must be square");
  const std::size_t d = gamma0_hat.rows();
  if (target_row.size() != d) throw std::invalid_argument("target row has wrong length");
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw std::domain_error("lambda must be finite and nonnegative");

  // Split m = mp - mn, both nonnegative; variables are [mp_0..mp_{d-1},
  // mn_0..mn_{d-1}]. For each column j of gamma0_hat two one-sided rows pin
  //   -(lambda) <= (m' G0)_j - t_j <= lambda.
  LinearProgram lp;
  lp.cost.assign(2 * d, 1.0);
  lp.nonneg.assign(2 * d, 1);
  lp.A = Matrix(2 * d, 2 * d);
  lp.rhs.assign(2 * d, 0.0);
  lp.is_le.assign(2 * d, 1);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      double g = gamma0_hat(k, j);
      lp.A(2 * j, k) = g;
      lp.A(2 * j, d + k) = -g;
      lp.A(2 * j + 1, k) = -g;
      lp.A(2 * j + 1, d + k) = g;
    }
    lp.rhs[2 * j] = lambda + target_row[j];
    lp.rhs[2 * j + 1] = lambda - target_row[j];
  }

  LpSolution sol = solve_lp(lp, tol);
  DantzigRow out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.m.assign(d, 0.0);
  if (sol.status == LpStatus::optimal)
    for (std::size_t k = 0; k < d; ++k) out.m[k] = sol.x[k] - sol.x[d + k];
  return out;
}

int EstimateReport::max_row_support() const {
  int best = 0;
  for (int s : row_support) best = std::max(best, s);
  return best;
}

bool EstimateReport::all_rows_optimal() const {
  for (LpStatus st : row_status)
    if (st != LpStatus::optimal) return false;
  return true;
}

EstimateReport dantzig_estimate(const Matrix& gamma0_hat, const Matrix& gamma1_hat,
                                double lambda, int jobs) {
  check_square_pair(gamma0_hat, gamma1_hat);
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw std::domain_error("lambda must be finite and nonnegative");
  const std::size_t d = gamma0_hat.rows();

  std::vector<DantzigRow> rows(d);
  parallel_for(d, jobs, [&](std::size_t i) {
    std::vector<double> target(d);
    for (std::size_t j = 0; j < d; ++j) target[j] = gamma1_hat(i, j);
    rows[i] = dantzig_row(gamma0_hat, target, lambda);
  });

  EstimateReport rep;
  rep.theta_hat = Matrix(d, d);
  rep.method = "dantzig";
  rep.lambda = lambda;
  rep.row_support.resize(d);
  rep.row_status.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    rep.row_status[i] = rows[i].status;
    if (rows[i].status == LpStatus::optimal)
      for (std::size_t j = 0; j < d; ++j) rep.theta_hat(i, j) = rows[i].m[j];
    rep.row_support[i] = row_support_count(rep.theta_hat, i);
  }
  return rep;
}

EstimateReport dense_report(const Matrix& gamma_h0, const Matrix& gamma_h0p1,
                            double rank_tol) {
  EstimateReport rep;
  rep.theta_hat = dense_estimate(gamma_h0, gamma_h0p1, rank_tol);
  rep.method = "dense";
  rep.row_support.resize(rep.theta_hat.rows());
  for (std::size_t i = 0; i < rep.theta_hat.rows(); ++i)
    rep.row_support[i] = row_support_count(rep.theta_hat, i);
  return rep;
}

TuneResult tune_lambda(const Matrix& gamma0_hat, const Matrix& gamma1_hat,
                       int target_s, int max_iter, int jobs) {
  check_square_pair(gamma0_hat, gamma1_hat);
  if (target_s < 0) throw std::domain_error("target_s must be nonnegative");
  if (max_iter < 1) throw std::domain_error("max_iter must be positive");

  TuneResult best;
  best.support_gap = std::numeric_limits<int>::max();
  auto consider = [&](double lam, EstimateReport&& rep, int evals) {
    int gap = std::abs(rep.max_row_support() - target_s);
    if (gap <= best.support_gap) {
      best.lambda = lam;
      best.report = std::move(rep);
      best.support_gap = gap;
    }
    best.evaluations = evals;
    return gap;
  };

  // At lambda = ||gamma1_hat||_max the zero matrix is feasible for every row,
  // so this end of the bracket has support <= target for any target >= 0.
  const double hi0 = max_norm(gamma1_hat);
  int evals = 1;
  int gap_hi = consider(hi0, dantzig_estimate(gamma0_hat, gamma1_hat, hi0, jobs), evals);
  if (gap_hi == 0 || hi0 == 0.0) return best;

  double lo = 0.0, hi = hi0;
  while (evals < max_iter) {
    double mid = 0.5 * (lo + hi);
    EstimateReport rep = dantzig_estimate(gamma0_hat, gamma1_hat, mid, jobs);
    int support = rep.max_row_support();
    ++evals;
    int gap = consider(mid, std::move(rep), evals);
    if (gap == 0) break;
    if (support > target_s)
      lo = mid;  // too dense: tighten by raising lambda
    else
      hi = mid;
    if (hi - lo <= 1e-15 * (1.0 + hi0)) break;
  }
  return best;
}

}  // namespace povar
