#include "povar/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "povar/covariance.hpp"
#include "povar/estimator.hpp"
#include "povar/parallel.hpp"
#include "povar/rng.hpp"
#include "povar/simulate.hpp"

namespace povar {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kLogFloor = 1e-15;  // zero errors floored before taking logs

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Stationarity p = a/(a+b) pins a given (p, b); returns NaN when no a in
// (0,1] works (the heatmap's blank region).
double stationary_a(double p, double b) {
  if (p == 1.0) return b == 0.0 ? 1.0 : kNan;
  double a = p * b / (1.0 - p);
  return a > 0.0 && a <= 1.0 ? a : kNan;
}

int as_count(double v, const char* what) {
  double r = std::llround(v);
  if (!(std::fabs(v - r) < 1e-9) || r < 1)
    throw std::domain_error(std::string(what) + " grid values must be positive integers");
  return static_cast<int>(r);
}

bool isotropic(const Matrix& sigma) {
  if (sigma.rows() == 0) return false;
  double d0 = sigma(0, 0);
  for (std::size_t i = 0; i < sigma.rows(); ++i)
    for (std::size_t j = 0; j < sigma.cols(); ++j)
      if (sigma(i, j) != (i == j ? d0 : 0.0)) return false;
  return d0 > 0.0;
}

struct Task {
  std::size_t gi = 0;
  std::size_t gj = 0;
  int rep = 0;
};

struct CellOut {
  std::vector<SweepRow> rows;
  bool failed = false;
  CellNote failure;
};

}  // namespace

const char* swept_name(Swept swept) {
  switch (swept) {
    case Swept::T: return "T";
    case Swept::omega: return "omega";
    case Swept::D_fixed_s: return "D_fixed_s";
    case Swept::s_fixed_D: return "s_fixed_D";
    case Swept::p_h0: return "p_h0";
    case Swept::p_b_heatmap: return "p_b_heatmap";
  }
  return "?";
}

char panel_letter(Swept swept) {
  switch (swept) {
    case Swept::T: return 'a';
    case Swept::omega: return 'b';
    case Swept::D_fixed_s: return 'c';
    case Swept::s_fixed_D: return 'd';
    case Swept::p_h0: return 'e';
    case Swept::p_b_heatmap: return 'f';
  }
  return '?';
}

Swept swept_from_string(const std::string& name) {
  for (Swept s : {Swept::T, Swept::omega, Swept::D_fixed_s, Swept::s_fixed_D,
                  Swept::p_h0, Swept::p_b_heatmap}) {
    if (name == swept_name(s)) return s;
    if (name.size() == 1 && name[0] == panel_letter(s)) return s;
  }
  throw std::invalid_argument("unknown panel: " + name);
}

EstimatorChoice estimator_from_string(const std::string& name) {
  if (name == "dense") return EstimatorChoice::dense;
  if (name == "dantzig") return EstimatorChoice::dantzig;
  if (name == "both") return EstimatorChoice::both;
  throw std::invalid_argument("unknown estimator: " + name);
}

const char* estimator_name(EstimatorChoice choice) {
  switch (choice) {
    case EstimatorChoice::dense: return "dense";
    case EstimatorChoice::dantzig: return "dantzig";
    case EstimatorChoice::both: return "both";
  }
  return "?";
}

std::vector<std::string> check_sweep_spec(const SweepSpec& spec) {
  std::vector<std::string> out;
  if (spec.grid.empty()) out.push_back("grid is empty");
  if (spec.replications < 1) out.push_back("replications must be >= 1");
  if (spec.swept == Swept::p_b_heatmap && spec.grid2.empty())
    out.push_back("heatmap needs a second grid");
  if (spec.swept != Swept::p_b_heatmap && !spec.grid2.empty())
    out.push_back("grid2 only applies to the heatmap panel");
  if (!spec.fixed_theta) {
    if (spec.s < 1) out.push_back("s must be >= 1 to draw transition matrices");
    if (!(spec.vartheta > 0.0 && spec.vartheta < 1.0))
      out.push_back("vartheta out of (0, 1)");
  } else if (spec.swept == Swept::D_fixed_s || spec.swept == Swept::s_fixed_D) {
    out.push_back("fixed_theta is incompatible with panels that reshape theta");
  }
  if (spec.swept == Swept::D_fixed_s && !isotropic(spec.base.Sigma))
    out.push_back("the D panel needs an isotropic base Sigma");
  if (spec.base.T < 2) out.push_back("base T must be >= 2");
  if (spec.base.N < 1) out.push_back("base N must be >= 1");
  return out;
}

double error_metric(const Matrix& theta_hat, const Matrix& theta) {
  if (theta_hat.rows() != theta.rows() || theta_hat.cols() != theta.cols())
    throw std::invalid_argument("estimate and truth have different shapes");
  return op_norm_inf(theta_hat - theta);
}

std::pair<double, double> theil_sen(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::domain_error("need at least two points");
  std::vector<double> slopes;
  slopes.reserve(points.size() * (points.size() - 1) / 2);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i].first != points[j].first)
        slopes.push_back((points[j].second - points[i].second) /
                         (points[j].first - points[i].first));
  if (slopes.empty()) throw std::domain_error("all x values identical");
  double slope = median(std::move(slopes));
  std::vector<double> residuals;
  residuals.reserve(points.size());
  for (const auto& pt : points) residuals.push_back(pt.second - slope * pt.first);
  return {slope, median(std::move(residuals))};
}

SweepResult run_sweep(const SweepSpec& spec, int jobs) {
  auto problems = check_sweep_spec(spec);
  if (!problems.empty()) throw std::invalid_argument("invalid sweep spec: " + problems.front());

  const char panel = panel_letter(spec.swept);
  SweepResult result;

  // Second-axis size: h0 series for panel e, b grid for panel f, else one.
  std::size_t nj = 1;
  if (spec.swept == Swept::p_h0) nj = 2;
  if (spec.swept == Swept::p_b_heatmap) nj = spec.grid2.size();

  std::vector<Task> tasks;
  for (std::size_t gi = 0; gi < spec.grid.size(); ++gi)
    for (std::size_t gj = 0; gj < nj; ++gj) {
      if (spec.swept == Swept::p_b_heatmap &&
          std::isnan(stationary_a(spec.grid[gi], spec.grid2[gj]))) {
        result.skipped.push_back({panel, spec.grid[gi], spec.grid2[gj], -1,
                                  "no a in (0,1] keeps the chain stationary"});
        continue;
      }
      for (int rep = 0; rep < spec.replications; ++rep) tasks.push_back({gi, gj, rep});
    }

  std::vector<std::string> series;
  if (spec.estimator != EstimatorChoice::dantzig) series.push_back("dense");
  if (spec.estimator != EstimatorChoice::dense) series.push_back("dantzig");

  std::vector<CellOut> slots(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t ti) {
    const Task& task = tasks[ti];
    CellOut& out = slots[ti];
    const double value = spec.grid[task.gi];
    double value2 = kNan;

    std::uint64_t cell_seed =
        derive_seed(spec.master_seed, task.gi, task.gj, static_cast<std::uint64_t>(task.rep));
    try {
      ModelConfig cfg = spec.base;
      int s_cell = spec.s;
      const char* param_name = "?";
      switch (spec.swept) {
        case Swept::T:
          cfg.T = as_count(value, "T");
          param_name = "T";
          break;
        case Swept::omega:
          if (!(value >= 0.0)) throw std::domain_error("omega must be nonnegative");
          cfg.omega2 = value * value;
          param_name = "omega";
          break;
        case Swept::D_fixed_s: {
          cfg.D = as_count(value, "D");
          double s2 = spec.base.Sigma(0, 0);
          cfg.Sigma = s2 * Matrix::identity(static_cast<std::size_t>(cfg.D));
          param_name = "D";
          break;
        }
        case Swept::s_fixed_D:
          s_cell = as_count(value, "s");
          param_name = "s";
          break;
        case Swept::p_h0:
          cfg.p = value;
          cfg.a = value;
          cfg.b = 1.0 - value;
          cfg.h0 = static_cast<int>(task.gj);
          param_name = "p";
          value2 = static_cast<double>(task.gj);
          break;
        case Swept::p_b_heatmap:
          cfg.p = value;
          cfg.b = spec.grid2[task.gj];
          cfg.a = stationary_a(cfg.p, cfg.b);
          param_name = "p";
          value2 = spec.grid2[task.gj];
          break;
      }

      if (spec.fixed_theta) {
        cfg.theta = spec.base.theta;
      } else {
        Rng theta_rng(derive_seed(cell_seed, 101));
        cfg.theta = gen_sparse_theta(cfg.D, s_cell, spec.vartheta, theta_rng);
      }
      cfg.seed = derive_seed(cell_seed, 202);

      auto violations = validate_config(cfg);
      if (!violations.empty()) throw std::domain_error(violations.front());
      std::vector<Trajectory> sims = simulate(cfg);

      for (const std::string& est : series) {
        auto t0 = std::chrono::steady_clock::now();
        Matrix s_h0 = scaling_matrix(cfg.p, cfg.a, cfg.b, cfg.h0, cfg.D);
        Matrix s_h1 = scaling_matrix(cfg.p, cfg.a, cfg.b, cfg.h0 + 1, cfg.D);
        CovarianceEstimate g0 = estimate_covariance(sims, cfg.h0, cfg.omega2, s_h0);
        CovarianceEstimate g1 = estimate_covariance(sims, cfg.h0 + 1, cfg.omega2, s_h1);

        SweepRow row;
        row.panel = panel;
        row.param_name = param_name;
        row.param_value = value;
        row.param_value2 = value2;
        row.replicate = task.rep;
        row.seed = cell_seed;
        row.estimator = est;
        row.lambda = kNan;
        if (est == "dense") {
          EstimateReport rep = dense_report(g0.gamma_hat, g1.gamma_hat);
          row.error_linf_op = error_metric(rep.theta_hat, cfg.theta.entries);
          row.error_max = max_norm(rep.theta_hat - cfg.theta.entries);
        } else {
          TuneResult tuned = tune_lambda(g0.gamma_hat, g1.gamma_hat, s_cell);
          row.lambda = tuned.lambda;
          row.error_linf_op = error_metric(tuned.report.theta_hat, cfg.theta.entries);
          row.error_max = max_norm(tuned.report.theta_hat - cfg.theta.entries);
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        out.rows.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      out.failed = true;
      out.failure = {panel, value, value2, task.rep, e.what()};
    }
  });

  for (CellOut& slot : slots) {
    if (slot.failed) result.failures.push_back(std::move(slot.failure));
    for (SweepRow& row : slot.rows) result.rows.push_back(std::move(row));
  }

  if (spec.swept != Swept::p_b_heatmap) {
    std::map<std::string, std::vector<std::pair<double, double>>> by_series;
    for (const SweepRow& row : result.rows) {
      std::string label = row.estimator;
      if (spec.swept == Swept::p_h0)
        label += row.param_value2 == 0.0 ? "_h0=0" : "_h0=1";
      if (row.param_value > 0.0)
        by_series[label].push_back({std::log(row.param_value),
                                    std::log(std::max(row.error_linf_op, kLogFloor))});
    }
    for (const auto& [label, pts] : by_series) {
      try {
        auto [slope, intercept] = theil_sen(pts);
        result.fits.push_back({label, slope, intercept, static_cast<int>(pts.size())});
      } catch (const std::domain_error&) {
        // single grid point or degenerate series: scatter only, no fit
      }
    }
  }
  return result;
}

}  // namespace povar
