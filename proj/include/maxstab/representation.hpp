#pragma once

#include <Eigen/Dense>
#include <string>

#include "maxstab/domain.hpp"
#include "maxstab/variogram.hpp"

namespace maxstab {

enum class Provenance { original, lambda_modified, k_stationary, optimized, custom_measure };

std::string to_string(Provenance p);

/// A Gaussian representation of a variogram on a grid: covariance matrix,
/// variance profile and a lower-triangular factor L with L L^T = C + jitter*I.
/// Provenance is derived from the construction path, never user-supplied.
///
/// Invariants (exercised in the test suite):
///   - C is symmetric,
///   - C(i,i) - 2 C(i,j) + C(j,j) = gamma(x_i - x_j) for all i, j,
///   - L L^T reproduces C + jitter_used * I within 1e-8 relative.
class Representation {
 public:
  const Grid& grid() const { return grid_; }
  const Variogram& variogram() const { return variogram_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::VectorXd& variance_profile() const { return variance_profile_; }
  const Eigen::MatrixXd& factor() const { return factor_; }
  double jitter_used() const { return jitter_used_; }
  Provenance provenance() const { return provenance_; }
  int size() const { return static_cast<int>(covariance_.rows()); }

 private:
  friend Representation covariance_from_measure(const Variogram&, const Grid&,
                                                const DiscreteMeasure&);
  friend Representation k_stationary_covariance(const Variogram&, const Grid&, double);
  friend Representation optimized_representation(const Variogram&, const Grid&, double,
                                                 long);
  Representation(Grid grid, Variogram v, Eigen::MatrixXd cov, Provenance prov);

  Grid grid_;
  Variogram variogram_;
  Eigen::MatrixXd covariance_;
  Eigen::VectorXd variance_profile_;
  Eigen::MatrixXd factor_;
  double jitter_used_ = 0.0;
  Provenance provenance_;
};

/// Covariance induced by a probability measure lambda on the grid:
///   2 C(x,y) = -gamma(x-y) + sum_k l_k gamma(x-x_k) + sum_k l_k gamma(y-x_k)
///              - sum_k sum_l l_k l_l gamma(x_k-x_l).
/// Provenance: dirac at the origin -> original, uniform vertex weights ->
/// lambda_modified, anything else -> custom_measure. Factorization is
/// attempted immediately (jitter policy below).
Representation covariance_from_measure(const Variogram& v, const Grid& grid,
                                       const DiscreteMeasure& lambda);

/// Stationary covariance on the enclosing ball of radius R:
///   C(x,y) = (A_{alpha,d} R^alpha - ||x-y||^alpha) / (2 s^alpha),
/// constant variance (A_{alpha,d}/2)(R/s)^alpha. Requires an isotropic
/// variogram and R covering the grid.
Representation k_stationary_covariance(const Variogram& v, const Grid& grid, double radius);

/// Runs solve_min_max_measure and builds the induced representation,
/// tagged `optimized`.
Representation optimized_representation(const Variogram& v, const Grid& grid,
                                        double tol = 1e-8, long max_iter = 500000);

/// Maximum of the variance profile and the first index attaining it.
struct MaxVariance {
  double value;
  int index;
};
MaxVariance max_variance(const Representation& rep);

/// Solution of Gamma w = e (e = ones). When all entries are >= -1e-10 the
/// normalized weights are the minimal K-stationary measure; otherwise the
/// signed weights are reported and `nonnegative` is false.
struct StationaryCandidate {
  Eigen::VectorXd raw_weights;            // solution of Gamma w = e
  bool nonnegative = false;
  std::optional<DiscreteMeasure> measure; // set when nonnegative
  double condition = 0.0;                 // condition estimate of Gamma
};
StationaryCandidate stationary_candidate_measure(const Variogram& v, const Grid& grid);

/// Bisection for the largest alpha in (0,1] with Gamma^{-1} e >= -1e-10
/// (Gamma_ij = ||x_i-x_j||^alpha). Returns 1 when the predicate holds at
/// alpha = 1; collinear point sets and every d = 1 grid end up there.
double critical_alpha(const Grid& grid, double tol = 1e-4);

/// Discrete min-max measure problem
///   min_l max_i 1/2 (l - e^i)^T (-Gamma) (l - e^i),  l on the simplex.
/// Solved through the equivalent concave dual max_l 1/2 l^T Gamma l (the
/// minimum-enclosing-ball dual) with an away-step Frank-Wolfe loop; the
/// Frank-Wolfe gap certifies the returned objective is within tol of optimal.
struct MinMaxSolution {
  DiscreteMeasure measure;
  double max_variance;  // primal objective at `measure`
  double gap;           // duality-gap certificate at termination
  long iterations;
};
MinMaxSolution solve_min_max_measure(const Variogram& v, const Grid& grid,
                                     double tol = 1e-8, long max_iter = 500000);

/// Matheron's optimality conditions for a measure on a hyperrectangle domain:
/// (a) lambda-mass off the vertex set, (b) max over vertices of
/// int gamma(x-.) dlambda - int int gamma dlambda dlambda. Both must be <= tol
/// for the conditions to hold.
struct MatheronReport {
  double off_vertex_mass;
  double max_vertex_excess;
  bool holds(double tol) const {
    return off_vertex_mass <= tol && max_vertex_excess <= tol;
  }
};
MatheronReport matheron_conditions(const Variogram& v, const Grid& grid,
                                   const Hyperrectangle& rect, const DiscreteMeasure& lambda);

/// Largest relative deviation of C(i,i) - 2 C(i,j) + C(j,j) from
/// gamma(x_i - x_j); test/diagnostic helper.
double variogram_identity_error(const Representation& rep);

/// Largest relative deviation of L L^T from C + jitter*I; test helper.
double factor_residual(const Representation& rep);

}  // namespace maxstab
