// maxstab command-line driver: benchmark scenarios, variance-profile export,
// discrete min-max measures and the critical-alpha scan.
//
// Exit codes: 0 success, 2 calibration failure, 3 numeric failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "maxstab/bench.hpp"
#include "maxstab/csv.hpp"
#include "maxstab/errors.hpp"

namespace fs = std::filesystem;
using namespace maxstab;

namespace {

int run_bench(const std::string& config, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override) {
  std::vector<Scenario> scenarios = scenarios_from_file(config);
  if (const char* env = std::getenv("MAXSTAB_SEED")) seed_override = std::stoull(env);
  if (seed_override)
    for (auto& sc : scenarios) sc.seed = *seed_override;

  fs::create_directories(out_dir);
  std::vector<BenchResult> results;
  for (const auto& sc : scenarios) {
    std::cout << "running scenario " << sc.id << " (alpha=" << sc.alpha
              << ", N=" << sc.n_Z << "/" << sc.n_V << ") ..." << std::endl;
    try {
      results.push_back(run_scenario(sc));
    } catch (const std::exception&) {
      // flush whatever finished before propagating
      if (!results.empty()) {
        write_bench_csv(results, fs::path(out_dir) / "results_partial.csv");
        std::cerr << "partial results flushed to results_partial.csv" << std::endl;
      }
      throw;
    }
    const BenchResult& res = results.back();
    for (const auto& row : res.rows)
      std::cout << "  " << row.algorithm << ": tau=" << row.tau << " ET=" << row.et_mean
                << " Phat=" << row.p_hat << " +- " << row.p_se << std::endl;
  }
  write_bench_csv(results, fs::path(out_dir) / "results.csv");
  write_diagnostics_csv(results, fs::path(out_dir) / "diagnostics.csv");
  std::cout << "wrote " << (fs::path(out_dir) / "results.csv").string() << std::endl;
  return 0;
}

int run_profile(double alpha, double sigma2, int dim, const std::string& rep_name,
                std::optional<double> scale_opt, int count, const std::string& out) {
  Eigen::VectorXd hw = Eigen::VectorXd::Ones(dim);
  const Hyperrectangle rect(hw);
  const double s =
      scale_opt ? *scale_opt
                : scale_for_target_variance_ball(alpha, dim, rect.enclosing_radius(), sigma2);
  const Variogram v(alpha, s);
  const Grid grid = regular_grid(rect, std::vector<int>(static_cast<std::size_t>(dim), count));

  std::optional<Representation> rep;
  if (rep_name == "original") {
    rep = covariance_from_measure(v, grid, dirac_measure(grid, grid.find_point(Eigen::VectorXd::Zero(dim))));
  } else if (rep_name == "lambda") {
    rep = covariance_from_measure(v, grid, uniform_vertex_measure(grid, rect));
  } else if (rep_name == "kstat") {
    rep = k_stationary_covariance(v, grid, rect.enclosing_radius());
  } else if (rep_name == "optimized") {
    rep = optimized_representation(v, grid);
  } else {
    throw contract_error("profile: --rep must be original|lambda|kstat|optimized");
  }
  variance_profile_export(*rep, out);
  const MaxVariance mv = max_variance(*rep);
  std::cout << "provenance=" << to_string(rep->provenance()) << " scale=" << s
            << " max_variance=" << mv.value << " at index " << mv.index << std::endl;
  return 0;
}

int run_solve_measure(double alpha, const std::string& grid_file, const std::string& out) {
  const Grid grid = read_grid_csv(grid_file);
  const Variogram v(alpha, 1.0);
  const MinMaxSolution sol = solve_min_max_measure(v, grid, 1e-8, 2000000);
  CsvWriter csv(out, [&] {
    std::vector<std::string> h;
    for (int a = 0; a < grid.dim(); ++a) h.push_back("x" + std::to_string(a + 1));
    h.push_back("weight");
    return h;
  }());
  for (int i = 0; i < grid.size(); ++i) {
    std::vector<std::string> cells;
    for (int a = 0; a < grid.dim(); ++a) cells.push_back(format_double(grid.points()(i, a)));
    cells.push_back(format_double(sol.measure[i]));
    csv.row(cells);
  }
  std::cout << "max_variance=" << sol.max_variance << " gap=" << sol.gap
            << " iterations=" << sol.iterations << std::endl;
  return 0;
}

int run_critical_alpha(const std::string& grid_file, double tol) {
  const Grid grid = read_grid_csv(grid_file);
  std::cout << "critical_alpha=" << critical_alpha(grid, tol) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brown-Resnick max-stable simulation benchmark"};
  app.require_subcommand(1);

  std::string config, out_dir = "bench_out";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  auto* bench = app.add_subcommand("bench", "run benchmark scenarios from a JSON config");
  bench->add_option("--config", config, "scenario JSON file")->required();
  bench->add_option("--out", out_dir, "output directory");
  bench->add_option("--seed", seed, "override config seed");
  bench->add_option("--threads", threads, "worker threads (0 = default)");

  double alpha = 1.0, sigma2 = 1.0;
  int dim = 1, count = 0;
  std::optional<double> scale_opt;
  std::string rep_name = "lambda", out_file = "profile.csv";
  auto* profile = app.add_subcommand("profile", "export a variance profile as CSV");
  profile->add_option("--alpha", alpha, "smoothness exponent in (0,2)")->required();
  profile->add_option("--sigma2", sigma2, "target K-stationary variance");
  profile->add_option("--scale", scale_opt, "explicit scale (overrides --sigma2)");
  profile->add_option("--dim", dim, "domain dimension");
  profile->add_option("--counts", count, "grid points per axis (default 501 / 21)");
  profile->add_option("--rep", rep_name, "original|lambda|kstat|optimized");
  profile->add_option("--out", out_file, "output CSV")->required();

  double sm_alpha = 1.0;
  std::string grid_file, measure_out = "measure.csv";
  auto* solve = app.add_subcommand("solve-measure", "discrete min-max measure on a grid CSV");
  solve->add_option("--alpha", sm_alpha, "smoothness exponent in (0,2)")->required();
  solve->add_option("--grid", grid_file, "grid CSV (header x1..xd)")->required();
  solve->add_option("--out", measure_out, "output CSV");

  std::string ca_grid;
  double ca_tol = 1e-4;
  auto* crit = app.add_subcommand("critical-alpha", "largest alpha with nonnegative Gamma^-1 e");
  crit->add_option("--grid", ca_grid, "grid CSV (header x1..xd)")->required();
  crit->add_option("--tol", ca_tol, "bisection tolerance (>= 1e-6)");

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (bench->parsed()) return run_bench(config, out_dir, seed);
    if (profile->parsed()) {
      if (count == 0) count = (dim == 1) ? 501 : 21;
      return run_profile(alpha, sigma2, dim, rep_name, scale_opt, count, out_file);
    }
    if (solve->parsed()) return run_solve_measure(sm_alpha, grid_file, measure_out);
    if (crit->parsed()) return run_critical_alpha(ca_grid, ca_tol);
  } catch (const calibration_error& e) {
    std::cerr << "calibration failure: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
  return 0;
}
