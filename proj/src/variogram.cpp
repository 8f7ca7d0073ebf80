#include "maxstab/variogram.hpp"

#include <cmath>
#include <vector>

#include "maxstab/errors.hpp"
#include "maxstab/special.hpp"

namespace maxstab {

namespace {

void validate_params(double alpha, double scale) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw domain_error("Variogram: alpha must lie in (0,2)");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw domain_error("Variogram: scale must be positive and finite");
}

}  // namespace

Variogram::Variogram(double alpha, double scale) : alpha_(alpha), scale_(scale) {
  validate_params(alpha, scale);
}

Variogram::Variogram(double alpha, double scale, Eigen::MatrixXd anisotropy)
    : alpha_(alpha), scale_(scale), anisotropy_(std::move(anisotropy)) {
  validate_params(alpha, scale);
  const Eigen::MatrixXd& m = *anisotropy_;
  if (m.rows() != m.cols()) throw domain_error("Variogram: anisotropy must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw domain_error("Variogram: anisotropy must be symmetric");
  if (std::fabs(m.determinant()) < 1e-12)
    throw domain_error("Variogram: anisotropy must be invertible");
}

double Variogram::psi(double t) const {
  if (!(t >= 0.0)) throw domain_error("psi: negative argument");
  return std::pow(std::sqrt(t) / scale_, alpha_);
}

double eval_variogram(const Variogram& v, const Eigen::VectorXd& h) {
  if (!h.allFinite()) throw domain_error("eval_variogram: non-finite displacement");
  double norm;
  if (v.isotropic()) {
    norm = h.norm();
  } else {
    if (v.anisotropy()->rows() != h.size())
      throw contract_error("eval_variogram: anisotropy dimension mismatch");
    norm = (*v.anisotropy() * h).norm();
  }
  return std::pow(norm / v.scale(), v.alpha());
}

double eval_variogram(const Variogram& v, double h) {
  Eigen::VectorXd hv(1);
  hv << h;
  return eval_variogram(v, hv);
}

Eigen::MatrixXd variogram_matrix(const Variogram& v, const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double val = eval_variogram(v, Eigen::VectorXd(points.row(i) - points.row(j)));
      g(i, j) = val;
      g(j, i) = val;
    }
  }
  return g;
}

double alternating_difference(const std::function<double(double)>& f, double s,
                              std::span<const double> shifts) {
  const std::size_t n = shifts.size();
  if (n < 1) throw domain_error("alternating_difference: needs at least one shift");
  if (s < 0.0) throw domain_error("alternating_difference: base point must be >= 0");
  for (double sh : shifts)
    if (!(sh >= 0.0)) throw domain_error("alternating_difference: negative shift");
  double acc = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double arg = s;
    int bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) {
        arg += shifts[i];
        ++bits;
      }
    }
    acc += (bits % 2 == 0 ? 1.0 : -1.0) * f(arg);
  }
  return acc;
}

AlternationReport check_n_alternating_psi(const std::function<double(double)>& psi,
                                          int n, int trials, RandomSource& rng) {
  if (n < 1 || n > 3) throw domain_error("check_n_alternating: n must be 1, 2 or 3");
  AlternationReport report;
  report.worst = -std::numeric_limits<double>::infinity();
  std::vector<double> shifts(static_cast<std::size_t>(n));
  for (int t = 0; t < trials; ++t) {
    const double s = 100.0 * rng.uniform();
    for (auto& sh : shifts) sh = 100.0 * rng.uniform();
    report.worst = std::max(report.worst, alternating_difference(psi, s, shifts));
  }
  report.alternating = report.worst <= 1e-10;
  return report;
}

AlternationReport check_n_alternating(const Variogram& v, int n, int trials,
                                      RandomSource& rng) {
  return check_n_alternating_psi([&v](double t) { return v.psi(t); }, n, trials, rng);
}

double check_negative_definite(const Variogram& v, const Eigen::MatrixXd& points,
                               const Eigen::VectorXd& weights) {
  if (points.rows() != weights.size())
    throw contract_error("check_negative_definite: points/weights size mismatch");
  if (std::fabs(weights.sum()) > 1e-12)
    throw contract_error("check_negative_definite: weights must sum to zero");
  const Eigen::MatrixXd g = variogram_matrix(v, points);
  return weights.dot(g * weights);
}

double gneiting_constant(double alpha, int d) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw domain_error("gneiting_constant: alpha must lie in (0,2)");
  if (d < 1) throw domain_error("gneiting_constant: d must be >= 1");
  return gamma_fn((2.0 - alpha) / 2.0) * gamma_fn((d + alpha) / 2.0) / gamma_fn(d / 2.0);
}

double scale_for_target_variance(double alpha, double sigma2K) {
  if (!(sigma2K > 0.0)) throw domain_error("scale_for_target_variance: sigma2K must be > 0");
  if (!(alpha > 0.0 && alpha < 2.0))
    throw domain_error("scale_for_target_variance: alpha must lie in (0,2)");
  const double num = gamma_fn((2.0 - alpha) / 2.0) * gamma_fn((1.0 + alpha) / 2.0);
  return std::pow(num / (2.0 * std::sqrt(M_PI) * sigma2K), 1.0 / alpha);
}

double scale_for_target_variance_ball(double alpha, int d, double radius, double sigma2K) {
  if (!(radius > 0.0)) throw domain_error("scale_for_target_variance_ball: radius must be > 0");
  if (!(sigma2K > 0.0)) throw domain_error("scale_for_target_variance_ball: sigma2K must be > 0");
  return radius * std::pow(gneiting_constant(alpha, d) / (2.0 * sigma2K), 1.0 / alpha);
}

}  // namespace maxstab
