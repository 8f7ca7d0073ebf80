#include "maxstab/simulate.hpp"

#include <cmath>
#include <sstream>

#include "maxstab/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace maxstab {

namespace {
constexpr long kStoppingCap = 10'000'000;
constexpr long kCandidateCap = 100'000;
}  // namespace

SpectralSampler SpectralSampler::log_gaussian(std::shared_ptr<const Representation> rep) {
  SpectralSampler s;
  s.kind_ = Kind::log_gaussian;
  s.n_ = rep->size();
  s.rep_ = std::move(rep);
  return s;
}

SpectralSampler SpectralSampler::constant(int n) {
  if (n < 1) throw domain_error("SpectralSampler::constant: n must be >= 1");
  SpectralSampler s;
  s.kind_ = Kind::constant;
  s.n_ = n;
  return s;
}

long SpectralSampler::diff_flat(int i, int s) const {
  // decompose lexicographic row indices (first axis slowest) and map the
  // per-axis difference onto the (2c-1)-point axis of the difference grid
  long flat = 0;
  const int d = static_cast<int>(counts_.size());
  for (int a = d - 1; a >= 0; --a) {
    const int c = counts_[static_cast<std::size_t>(a)];
    const int ia = i % c;
    const int sa = s % c;
    i /= c;
    s /= c;
    flat += static_cast<long>(ia - sa + (c - 1)) * diff_strides_[static_cast<std::size_t>(a)];
  }
  return flat;
}

// Difference-grid representation shared by the two shift samplers: the
// original (origin-pinned) representation of the base variogram on the
// (2 counts - 1)-point tensor grid spanning all pairwise differences.
SpectralSampler SpectralSampler::make_shift(const Representation& base, Kind kind) {
  const int d = base.grid().dim();
  if (base.size() == 1) {
    // the only shift is zero and the difference grid is the origin, so the
    // spectral process collapses to V = 1
    Grid diff_grid(Eigen::MatrixXd::Zero(1, d), base.grid().label() + "_diff");
    SpectralSampler s;
    s.kind_ = kind;
    s.n_ = 1;
    s.rep_ = std::make_shared<Representation>(
        covariance_from_measure(base.variogram(), diff_grid, dirac_measure(diff_grid, 0)));
    s.counts_.assign(static_cast<std::size_t>(d), 1);
    s.diff_strides_.assign(static_cast<std::size_t>(d), 1);
    return s;
  }
  const auto& reg = base.grid().regular();
  if (!reg)
    throw contract_error("shift sampler: requires a regular grid (periodic index shifting)");
  std::vector<int> diff_counts(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a)
    diff_counts[static_cast<std::size_t>(a)] = 2 * reg->counts[static_cast<std::size_t>(a)] - 1;
  const Hyperrectangle diff_rect(Eigen::VectorXd(2.0 * reg->half_widths));
  Grid diff_grid = regular_grid(diff_rect, diff_counts, base.grid().label() + "_diff");
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(d);
  const int origin_index = diff_grid.find_point(origin);
  auto diff_rep = std::make_shared<Representation>(covariance_from_measure(
      base.variogram(), diff_grid, dirac_measure(diff_grid, origin_index)));

  SpectralSampler s;
  s.kind_ = kind;
  s.n_ = base.size();
  s.rep_ = std::move(diff_rep);
  s.counts_ = reg->counts;
  s.diff_strides_.assign(static_cast<std::size_t>(d), 1);
  long stride = 1;
  for (int a = d - 1; a >= 0; --a) {
    s.diff_strides_[static_cast<std::size_t>(a)] = stride;
    stride *= diff_counts[static_cast<std::size_t>(a)];
  }
  s.diff_origin_ = origin_index;
  return s;
}

SpectralSampler random_shift_sampler(const Representation& base) {
  return SpectralSampler::make_shift(base, SpectralSampler::Kind::random_shift);
}

SpectralSampler dieker_mikosch_sampler(const Representation& base) {
  return SpectralSampler::make_shift(base, SpectralSampler::Kind::dieker_mikosch);
}

void SpectralSampler::draw_into(Eigen::VectorXd& v, RandomSource& rng) const {
  switch (kind_) {
    case Kind::constant:
      v = Eigen::VectorXd::Ones(n_);
      return;
    case Kind::log_gaussian: {
      sample_gaussian_into(*rep_, rng, v);
      v = (v - 0.5 * rep_->variance_profile()).array().exp();
      return;
    }
    case Kind::random_shift: {
      const int s = std::min(n_ - 1, static_cast<int>(rng.uniform() * n_));
      Eigen::VectorXd w;
      sample_gaussian_into(*rep_, rng, w);
      const Eigen::VectorXd& gamma = rep_->variance_profile();  // gamma(y) on the diff grid
      v.resize(n_);
      for (int i = 0; i < n_; ++i) {
        const long k = diff_flat(i, s);
        v[i] = std::exp(w[k] - 0.5 * gamma[k]);
      }
      return;
    }
    case Kind::dieker_mikosch: {
      const int s = std::min(n_ - 1, static_cast<int>(rng.uniform() * n_));
      Eigen::VectorXd w;
      sample_gaussian_into(*rep_, rng, w);
      const double wmax = w.maxCoeff();
      const Eigen::ArrayXd ew = (w.array() - wmax).exp();
      v.resize(n_);
      for (int i = 0; i < n_; ++i) {
        double denom = 0.0;
        for (int k = 0; k < n_; ++k) denom += ew[diff_flat(i, k)];
        v[i] = static_cast<double>(n_) * ew[diff_flat(i, s)] / denom;
      }
      return;
    }
  }
}

Eigen::VectorXd SpectralSampler::draw(RandomSource& rng) const {
  Eigen::VectorXd v;
  draw_into(v, rng);
  return v;
}

StoppedField threshold_stopping(const SpectralSampler& sampler, double tau,
                                RandomSource& rng) {
  if (!(tau > 0.0)) throw domain_error("threshold_stopping: tau must be > 0");
  const int n = sampler.size();
  StoppedField out;
  out.tau = tau;
  out.values = Eigen::VectorXd::Zero(n);
  out.min_prev = std::numeric_limits<double>::infinity();

  PoissonArrivals pa;
  double u = next_arrival(pa, rng);
  Eigen::VectorXd v(n);
  double min_z = std::numeric_limits<double>::infinity();
  long k = 0;
  while (true) {
    ++k;
    if (k > kStoppingCap)
      throw numeric_error("threshold_stopping: safety cap 1e7 exceeded (tau miscalibrated?)");
    sampler.draw_into(v, rng);
    min_z = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double cand = u * v[i];
      if (cand > out.values[i]) out.values[i] = cand;
      if (out.values[i] < min_z) min_z = out.values[i];
    }
    const double u_next = next_arrival(pa, rng);
    if (u_next * tau <= min_z) {
      out.T = k;
      out.u_stop = u_next;
      out.u_last = u;
      out.min_final = min_z;
      return out;
    }
    out.min_prev = min_z;
    u = u_next;
  }
}

std::vector<int> equispaced_subset(int grid_size, int n) {
  if (n < 1 || n > grid_size) throw contract_error("equispaced_subset: need 1 <= n <= N");
  std::vector<int> idx(static_cast<std::size_t>(n));
  if (n == 1) {
    idx[0] = 0;
    return idx;
  }
  for (int j = 0; j < n; ++j)
    idx[static_cast<std::size_t>(j)] =
        static_cast<int>(std::lround(static_cast<double>(j) * (grid_size - 1) / (n - 1)));
  return idx;
}

ExtremalField extremal_functions_simulate(const Representation& base,
                                          const std::vector<int>& subset,
                                          RandomSource& rng) {
  if (subset.empty()) throw contract_error("extremal_functions_simulate: empty subset");
  {
    std::vector<int> sorted(subset);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw contract_error("extremal_functions_simulate: duplicate subset index");
    if (sorted.front() < 0 || sorted.back() >= base.size())
      throw contract_error("extremal_functions_simulate: subset index out of range");
  }
  const int n = base.size();
  ExtremalField out;
  out.values = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w(n), phi(n), gamma_col(n);

  for (std::size_t pos = 0; pos < subset.size(); ++pos) {
    const int j = subset[pos];
    for (int i = 0; i < n; ++i)
      gamma_col[i] = eval_variogram(
          base.variogram(),
          Eigen::VectorXd(base.grid().point(i).transpose() - base.grid().point(j).transpose()));

    PoissonArrivals pa;
    double zeta = next_arrival(pa, rng);
    long candidates = 0;
    while (zeta > out.values[j]) {
      if (++candidates > kCandidateCap)
        throw numeric_error("extremal_functions_simulate: candidate cap 1e5 exceeded");
      sample_gaussian_into(base, rng, w);
      ++out.gaussian_draws;
      const double wj = w[j];
      bool accept = true;
      for (std::size_t q = 0; q < pos; ++q) {
        const int k = subset[q];
        const double phik = zeta * std::exp(w[k] - wj - 0.5 * gamma_col[k]);
        if (phik >= out.values[k]) {
          accept = false;
          break;
        }
      }
      if (accept) {
        for (int i = 0; i < n; ++i) {
          const double phii = zeta * std::exp(w[i] - wj - 0.5 * gamma_col[i]);
          if (phii > out.values[i]) out.values[i] = phii;
        }
      }
      zeta = next_arrival(pa, rng);
    }
  }
  return out;
}

MeanSe estimate_expected_T(const SpectralSampler& sampler, double tau, int n_rep,
                           const StreamFamily& streams) {
  if (n_rep < 2) throw contract_error("estimate_expected_T: n_rep must be >= 2");
  std::vector<double> t(static_cast<std::size_t>(n_rep));
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n_rep; ++i) {
    RngStream rng = streams.stream(static_cast<std::uint64_t>(i));
    t[static_cast<std::size_t>(i)] =
        static_cast<double>(threshold_stopping(sampler, tau, rng).T);
  }
  double mean = 0.0;
  for (double x : t) mean += x;
  mean /= n_rep;
  double var = 0.0;
  for (double x : t) var += (x - mean) * (x - mean);
  var /= (n_rep - 1);
  return {mean, std::sqrt(var / n_rep)};
}

double calibrate_tau(const SpectralSampler& sampler, double target_ET, double rel_tol,
                     const StreamFamily& streams) {
  if (!(target_ET >= 1.0)) throw domain_error("calibrate_tau: target must be >= 1");
  if (!(rel_tol > 0.0)) throw domain_error("calibrate_tau: rel_tol must be > 0");
  constexpr double kTauLo = 1e-6, kTauHi = 1e9;

  // precision schedule: coarse while bracketing, fine near the target; the
  // final replicate count keeps 2 se below half the tolerance band
  const auto evaluate = [&](double tau, int n_rep) {
    return estimate_expected_T(sampler, tau, n_rep, streams);
  };

  int n_fine = 2000;
  {  // choose n_fine from the dispersion at the initial guess
    const MeanSe probe = evaluate(std::max(target_ET, 1.0), 400);
    const double sd = probe.se * std::sqrt(400.0);
    const double needed = 2.0 * sd / (0.5 * rel_tol * target_ET);
    n_fine = static_cast<int>(std::min(200000.0, std::max(2000.0, needed * needed)));
  }

  // bracket: E[T] is nondecreasing in tau (common random numbers pathwise)
  double lo = std::max(kTauLo, std::min(kTauHi, target_ET));
  double hi = lo;
  const int n_coarse = std::max(400, n_fine / 16);
  MeanSe at_lo = evaluate(lo, n_coarse);
  if (at_lo.mean > target_ET) {
    while (at_lo.mean > target_ET) {
      hi = lo;
      lo /= 4.0;
      if (lo < kTauLo) {
        if (target_ET <= 1.0 + rel_tol) return kTauLo;  // T >= 1 always
        throw calibration_error("calibrate_tau: no bracket below 1e-6");
      }
      at_lo = evaluate(lo, n_coarse);
    }
  } else {
    MeanSe at_hi = at_lo;
    while (at_hi.mean < target_ET) {
      lo = hi;
      hi *= 4.0;
      if (hi > kTauHi) throw calibration_error("calibrate_tau: no bracket above 1e9");
      at_hi = evaluate(hi, n_coarse);
    }
  }

  // bisection in log tau, refining the replicate count as the bracket shrinks
  double best_tau = 0.5 * (lo + hi);
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = std::sqrt(lo * hi);
    const bool fine = (hi / lo < 1.3);
    const MeanSe est = evaluate(mid, fine ? n_fine : n_coarse);
    best_tau = mid;
    if (fine && std::fabs(est.mean - target_ET) <= 0.5 * rel_tol * target_ET) return mid;
    (est.mean < target_ET ? lo : hi) = mid;
    if (hi / lo < 1.0 + 1e-12) break;
  }
  const MeanSe final_est = evaluate(best_tau, n_fine);
  if (std::fabs(final_est.mean - target_ET) <= rel_tol * target_ET) return best_tau;
  std::ostringstream os;
  os << "calibrate_tau: best E[T] " << final_est.mean << " (se " << final_est.se
     << ") misses target " << target_ET << " beyond " << rel_tol * 100 << "%";
  throw calibration_error(os.str());
}

}  // namespace maxstab
