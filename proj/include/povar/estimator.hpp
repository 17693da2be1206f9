#pragma once
// Transition-matrix estimators. Dense route: Gamma_{h0+1} pinv(Gamma_{h0}).
// Sparse route: per-row l1 minimization
//     min ||m||_1   s.t.   ||m' G0 - target||_inf <= lambda
// encoded as an LP with split variables and solved row-by-row (rows are
// independent and can run in parallel), plus a sparsity-targeted dichotomy
// search over lambda.

#include <limits>
#include <string>
#include <vector>

#include "povar/lp.hpp"
#include "povar/matrix.hpp"

namespace povar {

// |entry| above this counts as support when reporting row sparsity.
inline constexpr double kSupportEps = 1e-6;

int row_support_count(const Matrix& m, std::size_t row, double eps = kSupportEps);

Matrix dense_estimate(const Matrix& gamma_h0, const Matrix& gamma_h0p1,
                      double rank_tol = 1e-10);

struct DantzigRow {
  std::vector<double> m;
  LpStatus status = LpStatus::iteration_limit;
  int iterations = 0;
};

DantzigRow dantzig_row(const Matrix& gamma0_hat, const std::vector<double>& target_row,
                       double lambda, double tol = 1e-9);

struct EstimateReport {
  Matrix theta_hat;
  std::string method;  // "dense" | "dantzig"
  double lambda = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> row_support;
  std::vector<LpStatus> row_status;  // empty for the dense method

  int max_row_support() const;
  bool all_rows_optimal() const;
};

// Row-decomposed Dantzig estimate at a fixed lambda. Rows are solved in
// parallel when jobs > 1; assembly order is fixed, so the result does not
// depend on jobs.
EstimateReport dantzig_estimate(const Matrix& gamma0_hat, const Matrix& gamma1_hat,
                                double lambda, int jobs = 1);

// Dense estimate wrapped in the same report shape.
EstimateReport dense_report(const Matrix& gamma_h0, const Matrix& gamma_h0p1,
                            double rank_tol = 1e-10);

struct TuneResult {
  double lambda = 0.0;
  EstimateReport report;
  int evaluations = 0;   // dantzig_estimate calls made
  int support_gap = 0;   // |max row support - target_s| achieved
};

// Bisection on lambda in [0, max_norm(gamma1_hat)] targeting
// max_row_support == target_s (zero slack); keeps the best iterate seen and
// returns it after at most max_iter evaluations.
TuneResult tune_lambda(const Matrix& gamma0_hat, const Matrix& gamma1_hat,
                       int target_s, int max_iter = 50, int jobs = 1);

}  // namespace povar
