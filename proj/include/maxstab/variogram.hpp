#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>

#include "maxstab/rng.hpp"

namespace maxstab {

/// Fractional variogram gamma(h) = ||M h / s||^alpha with smoothness exponent
/// alpha in (0,2), scale s > 0 and an optional symmetric invertible anisotropy
/// matrix M (identity when absent). gamma(0) = 0 and gamma(-h) = gamma(h) hold
/// exactly by construction.
class Variogram {
 public:
  Variogram(double alpha, double scale);
  Variogram(double alpha, double scale, Eigen::MatrixXd anisotropy);

  double alpha() const { return alpha_; }
  double scale() const { return scale_; }
  bool isotropic() const { return !anisotropy_.has_value(); }
  const std::optional<Eigen::MatrixXd>& anisotropy() const { return anisotropy_; }

  /// The Bernstein-family generator psi(t) = (sqrt(t)/s)^alpha, so that
  /// gamma(h) = psi(||M h||^2).
  double psi(double t) const;

 private:
  double alpha_;
  double scale_;
  std::optional<Eigen::MatrixXd> anisotropy_;
};

/// gamma(h) = ||M h / s||^alpha. Throws on non-finite input.
double eval_variogram(const Variogram& v, const Eigen::VectorXd& h);
double eval_variogram(const Variogram& v, double h);  // d = 1 shorthand

/// N x N matrix Gamma_ij = gamma(x_i - x_j) for the rows of `points`.
Eigen::MatrixXd variogram_matrix(const Variogram& v, const Eigen::MatrixXd& points);

/// Alternating forward difference
///   Delta_{s_1} ... Delta_{s_n} f(s) = sum_{A subset {1..n}} (-1)^|A| f(s + sum_{i in A} s_i).
/// Requires n >= 1 and nonnegative shifts.
double alternating_difference(const std::function<double(double)>& f, double s,
                              std::span<const double> shifts);

struct AlternationReport {
  bool alternating = false;  // all sampled differences <= 1e-10
  double worst = 0.0;        // maximum difference observed
};

/// Samples `trials` random (s, s_1..s_n) tuples on [0,100]^{n+1} and checks the
/// n-th alternating difference of psi stays <= 1e-10. n must be 1, 2 or 3.
AlternationReport check_n_alternating(const Variogram& v, int n, int trials,
                                      RandomSource& rng);

/// Test hook: same check for an arbitrary scalar function.
AlternationReport check_n_alternating_psi(const std::function<double(double)>& psi,
                                          int n, int trials, RandomSource& rng);

/// Quadratic form sum_ij w_i gamma(x_i - x_j) w_j for weights summing to zero
/// (|sum| <= 1e-12 enforced). Negative semidefiniteness means the value is <= 0.
double check_negative_definite(const Variogram& v, const Eigen::MatrixXd& points,
                               const Eigen::VectorXd& weights);

/// Gneiting constant A_{alpha,d} = Gamma((2-alpha)/2) Gamma((d+alpha)/2) / Gamma(d/2),
/// the sharp positive-definiteness constant on a ball. alpha in (0,2), d >= 1.
double gneiting_constant(double alpha, int d);

/// Scale s making the minimal stationary variance on [-1,1] (d = 1) equal
/// sigma2K: s = ((1/(2 sqrt(pi) sigma2K)) Gamma((2-alpha)/2) Gamma((1+alpha)/2))^{1/alpha}.
double scale_for_target_variance(double alpha, double sigma2K);

/// Generalization to the enclosing ball of radius R in dimension d:
/// s = R * (A_{alpha,d} / (2 sigma2K))^{1/alpha}. Coincides with
/// scale_for_target_variance for d = 1, R = 1.
double scale_for_target_variance_ball(double alpha, int d, double radius, double sigma2K);

}  // namespace maxstab
