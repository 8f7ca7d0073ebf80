#pragma once

#include <Eigen/Dense>
#include <limits>

#include "maxstab/representation.hpp"
#include "maxstab/rng.hpp"

namespace maxstab {

/// One realization of the spectral process on the grid; all values are finite
/// and strictly positive.
struct SpectralSample {
  Eigen::VectorXd values;
};

/// Draw W = L z with z i.i.d. standard normal.
Eigen::VectorXd sample_gaussian(const Representation& rep, RandomSource& rng);
void sample_gaussian_into(const Representation& rep, RandomSource& rng, Eigen::VectorXd& out);

/// V(x_i) = exp(W_i - sigma^2(x_i)/2); unit mean at every point.
SpectralSample log_gaussian_spectral(const Representation& rep, RandomSource& rng);

/// Poisson arrivals U_k = 1 / sum_{i<=k} E_i, strictly decreasing in k.
struct PoissonArrivals {
  double exp_sum = 0.0;
  double current = std::numeric_limits<double>::infinity();
  long count = 0;
};

/// Draws E ~ Exp(1) and returns the next arrival.
double next_arrival(PoissonArrivals& pa, RandomSource& rng);

/// Test hook: advance with a forced exponential increment.
double advance_arrival(PoissonArrivals& pa, double e);

}  // namespace maxstab
