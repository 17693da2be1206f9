// povar command-line tool: simulate partially observed sparse VAR(1)
// processes, estimate transition matrices, run parameter sweeps, and report
// theoretical bound values and KL checks. Every run that writes files also
// writes a JSON manifest next to them.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "povar/config.hpp"
#include "povar/covariance.hpp"
#include "povar/csv.hpp"
#include "povar/estimator.hpp"
#include "povar/experiments.hpp"
#include "povar/log.hpp"
#include "povar/manifest.hpp"
#include "povar/matrix.hpp"
#include "povar/model.hpp"
#include "povar/plot.hpp"
#include "povar/rng.hpp"
#include "povar/simulate.hpp"
#include "povar/theory.hpp"

namespace fs = std::filesystem;
using namespace povar;

namespace {

// Overrides land in the parsed config text, not in the built objects, so
// derived quantities (like a seed-generated theta) stay consistent.
void set_key(Config& cfg, const std::string& section, const std::string& key,
             const std::string& value) {
  for (auto& sec : cfg.sections) {
    if (sec.name != section) continue;
    for (auto& e : sec.entries)
      if (e.key == key) {
        e.value = value;
        return;
      }
    sec.entries.push_back({key, value, sec.line});
    return;
  }
  cfg.sections.push_back({section, {{key, value, 0}}, 0});
}

RunManifest start_manifest(const std::string& command, const std::string& config_path,
                           std::uint64_t master_seed) {
  RunManifest m;
  m.command = command;
  m.config_path = config_path;
  m.config_hash = git_blob_sha1(read_file(config_path));
  m.master_seed = master_seed;
  m.started_utc = utc_timestamp_now();
  return m;
}

void finish_manifest(RunManifest m, const std::vector<std::string>& outputs,
                     const std::string& manifest_path) {
  for (const auto& p : outputs) m.outputs.push_back({p, git_blob_sha1(read_file(p))});
  m.finished_utc = utc_timestamp_now();
  write_manifest(m, manifest_path);
  log_line(LogLevel::info, "manifest " + manifest_path);
}

std::string csv_cell(double v) { return std::isnan(v) ? "" : format_double(v); }

struct SimulateArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateArgs& args) {
  Config raw = load_config(args.config);
  if (args.seed) set_key(raw, "model", "seed", std::to_string(*args.seed));
  ModelBundle bundle = build_model_config(raw, fs::path(args.config).parent_path());
  const ModelConfig& cfg = bundle.config;

  RunManifest m = start_manifest("simulate", args.config, cfg.seed);
  std::vector<Trajectory> trajs = simulate(cfg);
  write_trajectory_csv(args.out, trajs);
  finish_manifest(std::move(m), {args.out}, args.out + ".manifest.json");

  std::cout << "realizations = " << cfg.N << "\nT = " << cfg.T << "\nD = " << cfg.D
            << "\noutput = " << args.out << "\n";
  return 0;
}

struct EstimateArgs {
  std::string config, out;
  std::optional<std::string> trajectory;
  std::string method = "dense";
  std::optional<double> lambda;
  std::optional<int> target_s;
  std::optional<int> h0;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

int run_estimate(const EstimateArgs& args) {
  Config raw = load_config(args.config);
  if (args.seed) set_key(raw, "model", "seed", std::to_string(*args.seed));
  if (args.h0) set_key(raw, "model", "h0", std::to_string(*args.h0));
  ModelBundle bundle = build_model_config(raw, fs::path(args.config).parent_path());
  const ModelConfig& cfg = bundle.config;

  if ((args.lambda || args.target_s) && args.method == "dense")
    throw std::invalid_argument("--lambda/--target-s only apply to the dantzig method");

  RunManifest m = start_manifest("estimate", args.config, cfg.seed);
  std::vector<Trajectory> trajs;
  if (args.trajectory) {
    trajs = read_trajectory_csv(*args.trajectory);
    if (trajs.front().X.cols() != static_cast<std::size_t>(cfg.D))
      throw std::invalid_argument("trajectory dimension does not match config D");
  } else {
    trajs = simulate(cfg);
  }

  Matrix s0 = scaling_matrix(cfg.p, cfg.a, cfg.b, cfg.h0, cfg.D);
  Matrix s1 = scaling_matrix(cfg.p, cfg.a, cfg.b, cfg.h0 + 1, cfg.D);
  CovarianceEstimate g0 = estimate_covariance(trajs, cfg.h0, cfg.omega2, s0);
  CovarianceEstimate g1 = estimate_covariance(trajs, cfg.h0 + 1, cfg.omega2, s1);

  std::vector<std::pair<std::string, EstimateReport>> reports;
  if (args.method == "dense" || args.method == "both")
    reports.emplace_back("dense", dense_report(g0.gamma_hat, g1.gamma_hat));
  if (args.method == "dantzig" || args.method == "both") {
    if (args.lambda) {
      reports.emplace_back("dantzig",
                           dantzig_estimate(g0.gamma_hat, g1.gamma_hat, *args.lambda,
                                            args.jobs));
    } else {
      TuneResult tuned = tune_lambda(g0.gamma_hat, g1.gamma_hat,
                                     args.target_s.value_or(bundle.s), 50, args.jobs);
      log_line(LogLevel::info,
               "tuned lambda in " + std::to_string(tuned.evaluations) + " evaluations");
      reports.emplace_back("dantzig", tuned.report);
    }
  }

  std::vector<std::string> outputs;
  bool ok = true;
  for (auto& [name, rep] : reports) {
    std::string path = args.out;
    if (reports.size() > 1) {
      fs::path p(args.out);
      fs::path stem = p.parent_path() / p.stem();
      path = stem.string() + "_" + name + p.extension().string();
    }
    write_matrix_csv(path, rep.theta_hat);
    outputs.push_back(path);

    std::cout << "method = " << name << "\noutput = " << path << "\n";
    if (name == "dantzig") std::cout << "lambda = " << format_double(rep.lambda) << "\n";
    std::cout << "max_row_support = " << rep.max_row_support() << "\n"
              << "error_linf_op = "
              << format_double(error_metric(rep.theta_hat, cfg.theta.entries)) << "\n"
              << "error_max = "
              << format_double(max_norm(rep.theta_hat - cfg.theta.entries)) << "\n";
    if (!rep.all_rows_optimal()) {
      ok = false;
      for (std::size_t i = 0; i < rep.row_status.size(); ++i)
        if (rep.row_status[i] != LpStatus::optimal)
          std::cerr << "povar: estimate: row " << i << " LP "
                    << to_string(rep.row_status[i]) << "\n";
    }
  }
  finish_manifest(std::move(m), outputs, args.out + ".manifest.json");
  return ok ? 0 : 1;
}

struct SweepArgs {
  std::string config, out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool plot = false;
};

int run_sweep_cmd(const SweepArgs& args) {
  Config raw = load_config(args.config);
  if (args.seed) set_key(raw, "sweep", "master_seed", std::to_string(*args.seed));
  SweepSpec spec = build_sweep_spec(raw, fs::path(args.config).parent_path());

  RunManifest m = start_manifest("sweep", args.config, spec.master_seed);
  SweepResult result = run_sweep(spec, args.jobs);

  fs::create_directories(args.out_dir);
  fs::path dir(args.out_dir);
  std::vector<std::string> outputs;

  {
    std::string path = (dir / "sweep.csv").string();
    std::string body =
        "panel,param_name,param_value,param_value2,replicate,seed,estimator,"
        "error_linf_op,error_max,lambda,wall_ms\n";
    for (const SweepRow& r : result.rows) {
      body += r.panel;
      body += ',' + r.param_name + ',' + format_double(r.param_value) + ',' +
              csv_cell(r.param_value2) + ',' + std::to_string(r.replicate) + ',' +
              std::to_string(r.seed) + ',' + r.estimator + ',' +
              format_double(r.error_linf_op) + ',' + format_double(r.error_max) + ',' +
              csv_cell(r.lambda) + ',' + format_double(r.wall_ms) + '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << body;
    outputs.push_back(path);
  }
  {
    std::string path = (dir / "fits.csv").string();
    std::string body = "panel,series,slope,intercept,points\n";
    for (const SeriesFit& fit : result.fits) {
      body += panel_letter(spec.swept);
      body += ',' + fit.series + ',' + format_double(fit.slope) + ',' +
              format_double(fit.intercept) + ',' + std::to_string(fit.points) + '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << body;
    outputs.push_back(path);
  }
  {
    std::string path = (dir / "notes.csv").string();
    std::string body = "kind,param_value,param_value2,replicate,reason\n";
    auto add = [&body](const char* kind, const CellNote& n) {
      std::string reason = n.reason;
      for (char& c : reason)
        if (c == ',' || c == '\n') c = ';';
      body += std::string(kind) + ',' + format_double(n.param_value) + ',' +
              csv_cell(n.param_value2) + ',' + std::to_string(n.replicate) + ',' +
              reason + '\n';
    };
    for (const CellNote& n : result.skipped) add("skipped", n);
    for (const CellNote& n : result.failures) add("failed", n);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << body;
    outputs.push_back(path);
  }

  if (args.plot) {
    std::string path = (dir / "sweep.svg").string();
    std::string title = std::string("panel ") + panel_letter(spec.swept);
    if (spec.swept == Swept::p_b_heatmap) {
      std::vector<std::vector<double>> cells(
          spec.grid2.size(),
          std::vector<double>(spec.grid.size(), std::numeric_limits<double>::quiet_NaN()));
      for (std::size_t gi = 0; gi < spec.grid.size(); ++gi)
        for (std::size_t gj = 0; gj < spec.grid2.size(); ++gj) {
          std::vector<double> errs;
          for (const SweepRow& r : result.rows)
            if (r.param_value == spec.grid[gi] && r.param_value2 == spec.grid2[gj])
              errs.push_back(r.error_linf_op);
          if (!errs.empty()) {
            std::sort(errs.begin(), errs.end());
            cells[gj][gi] = errs.size() % 2 == 1
                                ? errs[errs.size() / 2]
                                : 0.5 * (errs[errs.size() / 2 - 1] + errs[errs.size() / 2]);
          }
        }
      svg_heatmap(path, title, spec.grid, spec.grid2, cells);
    } else {
      std::map<std::string, PlotSeries> series;
      for (const SweepRow& r : result.rows) {
        std::string label = r.estimator;
        if (spec.swept == Swept::p_h0) label += r.param_value2 == 0.0 ? "_h0=0" : "_h0=1";
        series[label].label = label;
        series[label].points.push_back({r.param_value, r.error_linf_op});
      }
      std::vector<PlotSeries> list;
      for (auto& [_, s] : series) list.push_back(std::move(s));
      svg_scatter(path, title, list, true, true);
    }
    outputs.push_back(path);
  }

  finish_manifest(std::move(m), outputs, (dir / "run_manifest.json").string());

  std::cerr << "sweep panel " << panel_letter(spec.swept) << ": " << result.rows.size()
            << " rows";
  if (!result.skipped.empty()) std::cerr << ", " << result.skipped.size() << " skipped";
  if (!result.failures.empty()) std::cerr << ", " << result.failures.size() << " failed";
  std::cerr << "\n";
  for (const SeriesFit& fit : result.fits)
    std::cerr << "  " << fit.series << ": slope = " << format_double(fit.slope)
              << ", intercept = " << format_double(fit.intercept) << " (" << fit.points
              << " points)\n";
  return 0;
}

void emit_report(const std::vector<std::pair<std::string, std::string>>& kv,
                 const std::optional<std::string>& out, RunManifest m) {
  for (const auto& [k, v] : kv) std::cout << k << " = " << v << "\n";
  if (out) {
    std::string body = "key,value\n";
    for (const auto& [k, v] : kv) {
      std::string clean = v;
      for (char& c : clean)
        if (c == ',') c = ';';
      body += k + ',' + clean + '\n';
    }
    std::ofstream f(*out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + *out);
    f << body;
    f.close();
    finish_manifest(std::move(m), {*out}, *out + ".manifest.json");
  }
}

struct ReportArgs {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

int run_bounds(const ReportArgs& args) {
  Config raw = load_config(args.config);
  if (args.seed) set_key(raw, "model", "seed", std::to_string(*args.seed));
  ModelBundle bundle = build_model_config(raw, fs::path(args.config).parent_path());
  const ModelConfig& cfg = bundle.config;
  double delta = get_double(raw, "bounds", "delta", 0.05);

  RunManifest m = start_manifest("bounds", args.config, cfg.seed);
  BoundReport rep = bound_quantities(cfg.theta, cfg.Sigma, cfg.omega2, cfg.p, cfg.a,
                                     cfg.b, cfg.T, static_cast<std::size_t>(cfg.D),
                                     static_cast<std::size_t>(bundle.s), delta);

  auto flag = [](bool ok) { return ok ? std::string("true") : std::string("false"); };
  std::vector<std::pair<std::string, std::string>> kv = {
      {"q_u", format_double(rep.q_u)},
      {"q_l", format_double(rep.q_l)},
      {"gamma_u", format_double(rep.gamma_u)},
      {"gamma_l", format_double(rep.gamma_l)},
      {"err_delta", format_double(rep.err_delta)},
      {"upper_bound", format_double(rep.upper_bound)},
      {"lower_bound_threshold", format_double(rep.lower_bound_threshold)},
      {"delta", format_double(rep.delta)},
      {"sigma2_min", format_double(rep.sigma2_min)},
      {"sigma2_max", format_double(rep.sigma2_max)},
      {"theta_linf", format_double(rep.theta_linf)},
      {"theta_l2", format_double(rep.theta_l2)},
      {"vartheta", format_double(rep.vartheta)},
      {"theoretical_lambda", format_double(theoretical_lambda(rep))},
      {"t_ok_convergence1", flag(rep.t_ok_convergence1)},
      {"t_ok_convergence2", flag(rep.t_ok_convergence2)},
      {"t_ok_minimax1", flag(rep.t_ok_minimax1)},
      {"t_ok_minimax2", flag(rep.t_ok_minimax2)},
      {"constants_note", rep.constants_note},
  };
  if (!rep.t_ok_convergence1 || !rep.t_ok_convergence2 || !rep.t_ok_minimax1 ||
      !rep.t_ok_minimax2)
    log_line(LogLevel::warn, "a T-largeness condition is violated at these parameters");
  emit_report(kv, args.out, std::move(m));
  return 0;
}

int run_klcheck(const ReportArgs& args) {
  Config raw = load_config(args.config);
  if (args.seed) set_key(raw, "model", "seed", std::to_string(*args.seed));
  ModelBundle bundle = build_model_config(raw, fs::path(args.config).parent_path());
  ModelConfig cfg = bundle.config;

  long long t_kl = get_int(raw, "klcheck", "T", 5);
  if (t_kl < 1) throw ConfigError("klcheck T must be >= 1");
  if (t_kl * cfg.D > static_cast<long long>(kVerifyMaxDim))
    throw ConfigError("klcheck T*D exceeds the verification cap");
  cfg.T = static_cast<int>(t_kl);

  RunManifest m = start_manifest("klcheck", args.config, cfg.seed);
  Rng mask_rng(derive_seed(cfg.seed, 0x4B4C));
  Matrix mask = simulate_sampling(cfg, mask_rng);
  KlCheck chk = kl_bound_check(cfg.theta, cfg.Sigma, cfg.omega2, mask);
  bool pass = chk.exact_kl <= chk.bound + 1e-10;

  std::vector<std::pair<std::string, std::string>> kv = {
      {"T", std::to_string(cfg.T)},
      {"D", std::to_string(cfg.D)},
      {"exact_kl", format_double(chk.exact_kl)},
      {"bound", format_double(chk.bound)},
      {"delta_lambda_min", format_double(chk.delta_lambda_min)},
  };
  emit_report(kv, args.out, std::move(m));
  std::cout << "exact <= bound: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and estimation toolkit for partially observed sparse VAR(1) processes"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "generate trajectories");
  sim->add_option("--config", sim_args.config, "config file")->required();
  sim->add_option("--out", sim_args.out, "output trajectory CSV")->required();
  sim->add_option("--seed", sim_args.seed, "override the config seed");

  EstimateArgs est_args;
  CLI::App* est = app.add_subcommand("estimate", "estimate the transition matrix");
  est->add_option("--config", est_args.config, "config file")->required();
  est->add_option("--out", est_args.out, "output matrix CSV")->required();
  est->add_option("--trajectory", est_args.trajectory,
                  "trajectory CSV (default: simulate from config)");
  est->add_option("--method", est_args.method, "dense|dantzig|both")
      ->check(CLI::IsMember({"dense", "dantzig", "both"}));
  CLI::Option* lam = est->add_option("--lambda", est_args.lambda,
                                     "fixed regularization level (dantzig)");
  CLI::Option* tgt = est->add_option("--target-s", est_args.target_s,
                                     "sparsity target for lambda tuning (dantzig)");
  lam->excludes(tgt);
  tgt->excludes(lam);
  est->add_option("--h0", est_args.h0, "base lag (0 or 1)")->check(CLI::Range(0, 1));
  est->add_option("--jobs", est_args.jobs, "worker threads")->check(CLI::PositiveNumber);
  est->add_option("--seed", est_args.seed, "override the config seed");

  SweepArgs sweep_args;
  CLI::App* swp = app.add_subcommand("sweep", "run a parameter sweep");
  swp->add_option("--config", sweep_args.config, "config file")->required();
  swp->add_option("--out", sweep_args.out_dir, "output directory")->required();
  swp->add_option("--jobs", sweep_args.jobs, "worker threads")->check(CLI::PositiveNumber);
  swp->add_option("--seed", sweep_args.seed, "override the sweep master seed");
  swp->add_flag("--plot", sweep_args.plot, "also write an SVG rendering");

  ReportArgs bounds_args;
  CLI::App* bnd = app.add_subcommand("bounds", "report theoretical bound quantities");
  bnd->add_option("--config", bounds_args.config, "config file")->required();
  bnd->add_option("--out", bounds_args.out, "also write key,value CSV");
  bnd->add_option("--seed", bounds_args.seed, "override the config seed");

  ReportArgs kl_args;
  CLI::App* klc = app.add_subcommand("klcheck", "verify the KL bound on a small instance");
  klc->add_option("--config", kl_args.config, "config file")->required();
  klc->add_option("--out", kl_args.out, "also write key,value CSV");
  klc->add_option("--seed", kl_args.seed, "override the config seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_simulate(sim_args);
    if (est->parsed()) return run_estimate(est_args);
    if (swp->parsed()) return run_sweep_cmd(sweep_args);
    if (bnd->parsed()) return run_bounds(bounds_args);
    if (klc->parsed()) return run_klcheck(kl_args);
  } catch (const ConfigError& e) {
    std::cerr << "povar: " << (sim->parsed() ? sim_args.config
                               : est->parsed() ? est_args.config
                               : swp->parsed() ? sweep_args.config
                               : bnd->parsed() ? bounds_args.config
                                               : kl_args.config)
              << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "povar: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
