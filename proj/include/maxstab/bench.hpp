#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "maxstab/simulate.hpp"

namespace maxstab {

/// Declarative benchmark configuration (one table row group). Parsed from a
/// JSON document mirroring these fields; unknown keys are rejected.
struct Scenario {
  std::string id;
  double alpha = 1.0;
  std::optional<double> scale;     // exactly one of scale / sigma2_K
  std::optional<double> sigma2K;
  int dim = 1;
  std::vector<double> half_widths; // one per axis
  std::vector<int> counts;         // grid points per axis
  std::vector<std::string> algorithms;
  int n_Z = 5000;                  // stopped-field replicates
  int n_V = 2000;                  // spectral-pool replicates
  std::uint64_t seed = 20180817;
  std::optional<double> anchor_tau;
  std::optional<double> target_ET;
  double anchor_error = 0.1;       // anchor error-probability target
  std::optional<int> n_extremal;   // override for the extremal-functions budget

  void validate() const;
  /// Resolved variogram scale (explicit, or from sigma2_K on the enclosing ball).
  double resolved_scale() const;
};

Scenario scenario_from_json_text(const std::string& text);
/// File may hold one scenario object or an array of them.
std::vector<Scenario> scenarios_from_file(const std::filesystem::path& path);

struct ErrorEstimate {
  double p;
  double se;  // bootstrap over the Z index, 200 resamples
};

/// Plug-in estimator of the approximation-error probability
///   P = 1 - E_Z exp(-E_V (sup_x V/Z - sup_x tau/Z)_+)
/// with the spectral pool shared across all stopped fields.
ErrorEstimate error_probability(const std::vector<StoppedField>& stopped,
                                const std::vector<SpectralSample>& pool, double tau,
                                int bootstrap = 200, std::uint64_t bootstrap_seed = 7);

/// Matrix core used by both estimators: rows of `z` are the stopped fields,
/// rows of `v` the spectral pool.
ErrorEstimate error_probability_fields(const Eigen::MatrixXd& z, const Eigen::MatrixXd& v,
                                       double tau, int bootstrap = 200,
                                       std::uint64_t bootstrap_seed = 7);

/// Error probability of the extremal-functions output: the unexplored Poisson
/// points are those below the output at every exact location, so sup tau/Z is
/// replaced by the max of V/Z over the exact subset:
///   P = 1 - E_Z exp(-E_V (sup_{x in K} V/Z - sup_{x in subset} V/Z)_+).
ErrorEstimate error_probability_subset(const Eigen::MatrixXd& z, const Eigen::MatrixXd& v,
                                       const std::vector<int>& subset, int bootstrap = 200,
                                       std::uint64_t bootstrap_seed = 7);

struct PairEstimate {
  int i;
  int j;
  double value;  // estimate of gamma(x_i - x_j)
  double se;
};

/// Empirical variogram mean[(W(x_i) - W(x_j))^2] per pair with MC standard
/// errors; needs at least 1000 draws (rows of `draws`).
std::vector<PairEstimate> empirical_variogram(const Eigen::MatrixXd& draws, const Grid& grid,
                                              const std::vector<std::pair<int, int>>& pairs);
/// All-pairs overload (empty for a single-point grid).
std::vector<PairEstimate> empirical_variogram(const Eigen::MatrixXd& draws, const Grid& grid);

struct KsResult {
  double statistic;
  double p_value;
};

/// One-sample Kolmogorov-Smirnov test against the standard Frechet CDF
/// exp(-1/z); asymptotic p-value. Requires >= 1000 strictly positive samples.
KsResult frechet_ks_test(const std::vector<double>& samples);

/// Per-algorithm benchmark row.
struct AlgoResult {
  std::string algorithm;
  double tau;                          // NaN for extremal_functions
  int n_extr = 0;                      // extremal-functions budget, else 0
  double et_mean = 0.0;
  double et_se = 0.0;
  double p_hat = 0.0;
  double p_se = 0.0;
  double seconds_per_rep = 0.0;
  std::array<double, 3> exceedance{};  // P(max_x V > u), u in {5, 10, 20}
};

struct BenchResult {
  std::string scenario_id;
  std::string anchor_algorithm;
  double anchor_tau = 0.0;
  double target_ET = 0.0;
  std::vector<AlgoResult> rows;
};

/// Full benchmark protocol: fix the anchor threshold (given, or calibrated to
/// the anchor error target), calibrate every other threshold to the anchor's
/// mean cost within 1%, then estimate the error probabilities.
BenchResult run_scenario(const Scenario& sc);

/// results CSV: scenario,algorithm,tau,ET_mean,ET_se,Phat,Phat_se,seconds_per_rep.
/// `include_timing` drops the wall-clock column (it is the one
/// non-reproducible output).
void write_bench_csv(const std::vector<BenchResult>& results,
                     const std::filesystem::path& path, bool include_timing = true);

/// diagnostics CSV: spectral exceedance ratios and extremal-functions budgets.
void write_diagnostics_csv(const std::vector<BenchResult>& results,
                           const std::filesystem::path& path);

/// Variance profile as plot data: x1..xd,sigma2, one row per grid point.
void variance_profile_export(const Representation& rep, const std::filesystem::path& path);

}  // namespace maxstab
