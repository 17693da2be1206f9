#pragma once
// Parameter sweeps over the six study panels, with replication management,
// error metrics and robust (Theil-Sen) slope fits on log-log scatters.
//
// Panels: a = horizon T, b = noise level omega, c = dimension D at fixed s,
// d = sparsity s at fixed D, e = sampling rate p for h0 in {0,1},
// f = (p, b) heatmap with a chosen to keep the sampling chain stationary.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "povar/matrix.hpp"
#include "povar/model.hpp"

namespace povar {

enum class Swept { T, omega, D_fixed_s, s_fixed_D, p_h0, p_b_heatmap };
enum class EstimatorChoice { dense, dantzig, both };

const char* swept_name(Swept swept);
char panel_letter(Swept swept);
Swept swept_from_string(const std::string& name);  // accepts letter or name
EstimatorChoice estimator_from_string(const std::string& name);
const char* estimator_name(EstimatorChoice choice);

struct SweepSpec {
  ModelConfig base;
  int s = 0;               // row sparsity of freshly drawn transition matrices
  double vartheta = 0.5;   // spectral normalization of those draws
  Swept swept = Swept::T;
  std::vector<double> grid;
  std::vector<double> grid2;  // second axis, heatmap only
  int replications = 1;
  EstimatorChoice estimator = EstimatorChoice::dense;
  std::uint64_t master_seed = 0;
  bool fixed_theta = false;  // reuse base.theta instead of per-replicate draws
};

std::vector<std::string> check_sweep_spec(const SweepSpec& spec);

struct SweepRow {
  char panel = '?';
  std::string param_name;
  double param_value = 0.0;
  double param_value2 = 0.0;  // NaN when the panel has a single axis
  int replicate = 0;
  std::uint64_t seed = 0;
  std::string estimator;
  double error_linf_op = 0.0;
  double error_max = 0.0;
  double lambda = 0.0;  // NaN for the dense estimator
  double wall_ms = 0.0;
};

struct SeriesFit {
  std::string series;
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

struct CellNote {
  char panel = '?';
  double param_value = 0.0;
  double param_value2 = 0.0;
  int replicate = -1;  // -1 for whole-cell notes (skipped heatmap cells)
  std::string reason;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SeriesFit> fits;      // log-log slopes, scatter panels only
  std::vector<CellNote> skipped;    // inadmissible heatmap cells
  std::vector<CellNote> failures;   // cells whose estimation threw
};

double error_metric(const Matrix& theta_hat, const Matrix& theta);

// Median-of-pairwise-slopes line fit; needs two points with distinct x.
std::pair<double, double> theil_sen(const std::vector<std::pair<double, double>>& points);

SweepResult run_sweep(const SweepSpec& spec, int jobs = 1);

}  // namespace povar
