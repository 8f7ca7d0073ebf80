#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "maxstab/sample.hpp"

namespace maxstab {

/// Closed description of how one spectral realization V is produced on the
/// grid. Every draw costs one Gaussian vector (the benchmark cost unit); the
/// constant sampler (V = 1) exists for tests and hand traces.
class SpectralSampler {
 public:
  enum class Kind { log_gaussian, random_shift, dieker_mikosch, constant };

  static SpectralSampler log_gaussian(std::shared_ptr<const Representation> rep);
  static SpectralSampler constant(int n);

  void draw_into(Eigen::VectorXd& v, RandomSource& rng) const;
  Eigen::VectorXd draw(RandomSource& rng) const;

  int size() const { return n_; }
  Kind kind() const { return kind_; }
  int cost_unit() const { return 1; }
  const std::shared_ptr<const Representation>& representation() const { return rep_; }

 private:
  friend SpectralSampler random_shift_sampler(const Representation& base);
  friend SpectralSampler dieker_mikosch_sampler(const Representation& base);
  SpectralSampler() = default;
  static SpectralSampler make_shift(const Representation& base, Kind kind);

  Kind kind_ = Kind::constant;
  int n_ = 0;
  std::shared_ptr<const Representation> rep_;  // target rep, or the difference-grid rep
  // shift machinery: per-axis index decomposition of (i - s) into the
  // difference grid, first axis slowest (lexicographic order)
  std::vector<int> counts_;
  std::vector<long> diff_strides_;
  long diff_origin_ = 0;
  long diff_flat(int i, int s) const;
};

/// Original log-Gaussian spectral process evaluated at uniformly shifted
/// arguments x - S, S uniform on the grid. The Gaussian field is drawn on the
/// (2 counts - 1)-point difference grid pinned at the origin, so every
/// difference x_i - x_s is evaluated exactly. Requires a regular grid.
SpectralSampler random_shift_sampler(const Representation& base);

/// Sum-normalized shifted spectral process
///   V(x) = N exp(W(x - S)) / sum_k exp(W(x - x_k)),
/// bounded above by N pointwise. Same difference-grid semantics as
/// random_shift_sampler.
SpectralSampler dieker_mikosch_sampler(const Representation& base);

/// Result of one threshold-stopped run: the field, the number of spectral
/// realizations consumed and stopping-rule diagnostics for the first-hit
/// property (U_{T+1} tau <= min Z^{(T)} and, for T > 1, U_T tau > min Z^{(T-1)}).
struct StoppedField {
  Eigen::VectorXd values;
  long T = 0;
  double tau = 0.0;
  double u_stop = 0.0;   // U_{T+1}
  double u_last = 0.0;   // U_T
  double min_prev = 0.0; // min Z^{(T-1)}, +inf when T == 1
  double min_final = 0.0;
};

/// Threshold stopping: iterate Z^{(k)} = max(Z^{(k-1)}, U_k V_k) until
/// U_{k+1} tau <= min_x Z^{(k)}. Fails loudly after 1e7 iterations.
StoppedField threshold_stopping(const SpectralSampler& sampler, double tau,
                                RandomSource& rng);

/// Extremal-functions output: exact in law at the subset locations, a
/// possibly under-approximated max elsewhere. gaussian_draws is the cost in
/// benchmark units.
struct ExtremalField {
  Eigen::VectorXd values;
  long gaussian_draws = 0;
};

/// For each subset location x_j in order, enumerates the Poisson arrivals
/// above the running maximum at x_j with candidate functions
///   phi = zeta * exp(W(.) - W(x_j) - gamma(. - x_j)/2)
/// and keeps those not exceeding the running maximum at the previously
/// processed locations. Caps candidates per location at 1e5.
ExtremalField extremal_functions_simulate(const Representation& base,
                                          const std::vector<int>& subset,
                                          RandomSource& rng);

/// n equi-spaced grid indices including both endpoints (n = 1 picks index 0).
std::vector<int> equispaced_subset(int grid_size, int n);

struct MeanSe {
  double mean;
  double se;
};

/// Monte-Carlo mean of T over n_rep independent runs (disjoint streams, so
/// the estimate does not depend on thread count).
MeanSe estimate_expected_T(const SpectralSampler& sampler, double tau, int n_rep,
                           const StreamFamily& streams);

/// Monotone search for tau with E T_{K,tau} = target within rel_tol, using
/// common random numbers across tau evaluations and an adaptive replicate
/// count so the match holds at 2-se confidence. Bracket [1e-6, 1e9].
double calibrate_tau(const SpectralSampler& sampler, double target_ET,
                     double rel_tol, const StreamFamily& streams);

}  // namespace maxstab
