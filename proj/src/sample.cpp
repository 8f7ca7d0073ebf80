#include "maxstab/sample.hpp"

#include <cmath>

#include "maxstab/errors.hpp"

namespace maxstab {

void sample_gaussian_into(const Representation& rep, RandomSource& rng, Eigen::VectorXd& out) {
  const Eigen::Index n = rep.size();
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
  out.resize(n);
  out.noalias() = rep.factor().triangularView<Eigen::Lower>() * z;
}

Eigen::VectorXd sample_gaussian(const Representation& rep, RandomSource& rng) {
  Eigen::VectorXd out;
  sample_gaussian_into(rep, rng, out);
  return out;
}

SpectralSample log_gaussian_spectral(const Representation& rep, RandomSource& rng) {
  SpectralSample s;
  sample_gaussian_into(rep, rng, s.values);
  s.values = (s.values - 0.5 * rep.variance_profile()).array().exp();
  return s;
}

double next_arrival(PoissonArrivals& pa, RandomSource& rng) {
  return advance_arrival(pa, rng.exponential());
}

double advance_arrival(PoissonArrivals& pa, double e) {
  if (!(e >= 0.0)) throw domain_error("advance_arrival: negative increment");
  pa.exp_sum += e;
  pa.current = 1.0 / pa.exp_sum;
  ++pa.count;
  return pa.current;
}

}  // namespace maxstab
