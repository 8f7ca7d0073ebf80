#include "maxstab/representation.hpp"

#include <cmath>
#include <sstream>

#include "maxstab/errors.hpp"

namespace maxstab {

namespace {

// Semidefinite-aware left-looking Cholesky. Pivots within `tol` of zero zero
// out their column, which keeps exactly singular covariances (a pinned point
// has a zero row) factorizable without jitter and preserves exact zeros in
// the samples. Returns false when a pivot is genuinely negative.
bool try_factor(const Eigen::MatrixXd& c, double jitter, double tol, Eigen::MatrixXd& l) {
  const Eigen::Index n = c.rows();
  l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = c(j, j) + jitter;
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < -tol) return false;
    if (d <= tol) continue;  // column stays zero
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = c(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / root;
    }
  }
  return true;
}

// Jitter policy: exact attempt first, then 1e-12*trace(C)/N escalating by
// factors of 10 up to 1e-6*trace(C)/N.
void factor_with_jitter(const Eigen::MatrixXd& c, Eigen::MatrixXd& l, double& jitter_used) {
  const Eigen::Index n = c.rows();
  const double scale = std::max(c.trace() / static_cast<double>(n), 0.0);
  const double tol = 1e-12 * std::max(scale, 1e-30);
  if (try_factor(c, 0.0, tol, l)) {
    jitter_used = 0.0;
    return;
  }
  for (double jitter = 1e-12 * scale; jitter <= 1e-6 * scale * (1.0 + 1e-9); jitter *= 10.0) {
    if (try_factor(c, jitter, tol, l)) {
      jitter_used = jitter;
      return;
    }
  }
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c)
                             .eigenvalues()
                             .minCoeff();
  std::ostringstream os;
  os << "factorization failed after max jitter; smallest eigenvalue estimate " << min_eig;
  throw numeric_error(os.str());
}

bool is_origin(const Eigen::VectorXd& p) { return p.cwiseAbs().maxCoeff() <= 1e-12; }

// dirac at the origin -> original; equal weights 2^-d on the vertex set of
// some hyperrectangle -> lambda_modified; anything else -> custom_measure.
Provenance derive_provenance(const Grid& grid, const DiscreteMeasure& lambda) {
  std::vector<int> support;
  for (int i = 0; i < lambda.size(); ++i)
    if (lambda[i] > 0.0) support.push_back(i);
  if (support.size() == 1 && std::fabs(lambda[support[0]] - 1.0) <= 1e-12 &&
      is_origin(grid.point(support[0]).transpose()))
    return Provenance::original;

  const int d = grid.dim();
  if (support.size() != (std::size_t{1} << d)) return Provenance::custom_measure;
  const double mass = 1.0 / static_cast<double>(support.size());
  for (int i : support)
    if (std::fabs(lambda[i] - mass) > 1e-12) return Provenance::custom_measure;
  // per-axis magnitude must be constant and all sign patterns present once
  Eigen::VectorXd radii = grid.point(support[0]).transpose().cwiseAbs();
  if (!(radii.minCoeff() > 1e-12)) return Provenance::custom_measure;
  std::vector<bool> seen(support.size(), false);
  for (int i : support) {
    unsigned mask = 0;
    for (int a = 0; a < d; ++a) {
      const double x = grid.points()(i, a);
      if (std::fabs(std::fabs(x) - radii[a]) > 1e-12) return Provenance::custom_measure;
      if (x > 0.0) mask |= (1u << a);
    }
    if (seen[mask]) return Provenance::custom_measure;
    seen[mask] = true;
  }
  return Provenance::lambda_modified;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::original: return "original";
    case Provenance::lambda_modified: return "lambda_modified";
    case Provenance::k_stationary: return "k_stationary";
    case Provenance::optimized: return "optimized";
    case Provenance::custom_measure: return "custom_measure";
  }
  return "?";
}

Representation::Representation(Grid grid, Variogram v, Eigen::MatrixXd cov, Provenance prov)
    : grid_(std::move(grid)),
      variogram_(std::move(v)),
      covariance_(std::move(cov)),
      provenance_(prov) {
  covariance_ = 0.5 * (covariance_ + covariance_.transpose()).eval();
  variance_profile_ = covariance_.diagonal();
  factor_with_jitter(covariance_, factor_, jitter_used_);
}

Representation covariance_from_measure(const Variogram& v, const Grid& grid,
                                       const DiscreteMeasure& lambda) {
  if (lambda.size() != grid.size())
    throw contract_error("covariance_from_measure: measure not aligned with grid");
  const Eigen::MatrixXd g = variogram_matrix(v, grid.points());
  const Eigen::VectorXd b = g * lambda.weights();
  const double c = lambda.weights().dot(b);
  const Eigen::Index n = grid.size();
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      cov(i, j) = 0.5 * (-g(i, j) + b[i] + b[j] - c);
  return Representation(grid, v, std::move(cov), derive_provenance(grid, lambda));
}

Representation k_stationary_covariance(const Variogram& v, const Grid& grid, double radius) {
  if (!v.isotropic())
    throw contract_error("k_stationary_covariance: requires an isotropic variogram");
  const double max_norm = grid.points().rowwise().norm().maxCoeff();
  if (radius < max_norm * (1.0 - 1e-12))
    throw contract_error("k_stationary_covariance: radius does not cover the grid");
  const double a = gneiting_constant(v.alpha(), grid.dim()) * std::pow(radius, v.alpha());
  const double s_alpha = std::pow(v.scale(), v.alpha());
  const Eigen::Index n = grid.size();
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cov(i, i) = a / (2.0 * s_alpha);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (grid.points().row(i) - grid.points().row(j)).norm();
      cov(i, j) = cov(j, i) = (a - std::pow(dist, v.alpha())) / (2.0 * s_alpha);
    }
  }
  return Representation(grid, v, std::move(cov), Provenance::k_stationary);
}

Representation optimized_representation(const Variogram& v, const Grid& grid, double tol,
                                        long max_iter) {
  const MinMaxSolution sol = solve_min_max_measure(v, grid, tol, max_iter);
  const Eigen::MatrixXd g = variogram_matrix(v, grid.points());
  const Eigen::VectorXd b = g * sol.measure.weights();
  const double c = sol.measure.weights().dot(b);
  const Eigen::Index n = grid.size();
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      cov(i, j) = 0.5 * (-g(i, j) + b[i] + b[j] - c);
  return Representation(grid, v, std::move(cov), Provenance::optimized);
}

MaxVariance max_variance(const Representation& rep) {
  int at = 0;
  const double value = rep.variance_profile().maxCoeff(&at);
  return {value, at};
}

StationaryCandidate stationary_candidate_measure(const Variogram& v, const Grid& grid) {
  if (grid.size() < 2)
    throw contract_error("stationary_candidate_measure: needs at least two points");
  const Eigen::MatrixXd g = variogram_matrix(v, grid.points());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(g);
  const double rcond = lu.rcond();
  StationaryCandidate out;
  out.condition = (rcond > 0.0) ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (out.condition > 1e14) {
    std::ostringstream os;
    os << "stationary_candidate_measure: Gamma singular (condition " << out.condition << ")";
    throw numeric_error(os.str());
  }
  out.raw_weights = lu.solve(Eigen::VectorXd::Ones(grid.size()));
  out.nonnegative = (out.raw_weights.minCoeff() >= -1e-10);
  if (out.nonnegative) {
    Eigen::VectorXd w = out.raw_weights.cwiseMax(0.0);
    out.measure = DiscreteMeasure(w / w.sum());
  }
  return out;
}

double critical_alpha(const Grid& grid, double tol) {
  if (tol < 1e-6) throw domain_error("critical_alpha: tol must be >= 1e-6");
  if (grid.size() < 2) throw contract_error("critical_alpha: needs at least two points");
  if (grid.dim() == 1) return 1.0;

  const auto predicate = [&grid](double alpha) {
    const Variogram v(alpha, 1.0);
    const Eigen::MatrixXd g = variogram_matrix(v, grid.points());
    const Eigen::VectorXd w =
        Eigen::PartialPivLU<Eigen::MatrixXd>(g).solve(Eigen::VectorXd::Ones(grid.size()));
    return w.minCoeff() >= -1e-10;
  };

  if (predicate(1.0)) return 1.0;
  double lo = 1e-3;
  if (!predicate(lo))
    throw numeric_error(
        "critical_alpha: nonnegativity already fails at alpha = 1e-3 "
        "(conjecture violation candidate)");
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (predicate(mid) ? lo : hi) = mid;
  }
  return lo;
}

MinMaxSolution solve_min_max_measure(const Variogram& v, const Grid& grid, double tol,
                                     long max_iter) {
  if (grid.size() < 2)
    throw contract_error("solve_min_max_measure: needs at least two points");
  if (tol < 1e-8) throw domain_error("solve_min_max_measure: tol must be >= 1e-8");
  const Eigen::Index n = grid.size();
  const Eigen::MatrixXd g = variogram_matrix(v, grid.points());

  // Dual of the minimum enclosing ball of the points embedded with squared
  // distances gamma(x_i - x_j): maximize D(l) = 1/2 l^T Gamma l over the
  // simplex. The primal value at l is F(l) = max_i (Gamma l)_i - 1/2 l^T
  // Gamma l and the Frank-Wolfe gap F - D = max_i (Gamma l)_i - l^T Gamma l
  // bounds the suboptimality of F.
  Eigen::VectorXd l = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd grad = g * l;       // Gamma l
  double quad = l.dot(grad);          // l^T Gamma l
  double gap = std::numeric_limits<double>::infinity();
  long it = 0;
  for (; it < max_iter; ++it) {
    if (it % 1000 == 999) {  // refresh against drift of the incremental updates
      grad = g * l;
      quad = l.dot(grad);
    }
    int fw = 0;
    const double gmax = grad.maxCoeff(&fw);
    gap = gmax - quad;
    if (gap <= tol) break;

    int aw = -1;
    double gmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i)
      if (l[i] > 0.0 && grad[i] < gmin) {
        gmin = grad[i];
        aw = static_cast<int>(i);
      }

    const double ascent_fw = gmax - quad;
    const double ascent_aw = quad - gmin;
    if (ascent_fw >= ascent_aw) {
      // d = e_fw - l ; curvature d^T Gamma d = -2 g_fw + quad  (Gamma_ii = 0)
      const double curve = -2.0 * grad[fw] + quad;
      double t = 1.0;
      if (curve < -1e-300) t = std::min(1.0, -ascent_fw / curve);
      l *= (1.0 - t);
      l[fw] += t;
      grad += t * (g.col(fw) - grad);
      quad += 2.0 * t * ascent_fw + t * t * curve;
    } else {
      // away direction d = l - e_aw ; max step l_aw / (1 - l_aw)
      const double curve = -2.0 * grad[aw] + quad;  // (e_aw - l)^T Gamma (e_aw - l)
      const double tmax = l[aw] / std::max(1.0 - l[aw], 1e-300);
      double t = tmax;
      if (curve < -1e-300) t = std::min(tmax, -ascent_aw / curve);
      l *= (1.0 + t);
      l[aw] -= t;
      grad += t * (grad - g.col(aw));
      quad += 2.0 * t * ascent_aw + t * t * curve;
      if (l[aw] < 1e-15) l[aw] = 0.0;  // drop-step roundoff
    }
  }
  if (gap > tol) {
    std::ostringstream os;
    os << "solve_min_max_measure: no convergence in " << max_iter
       << " iterations; duality-gap estimate " << gap;
    throw numeric_error(os.str());
  }
  l = l.cwiseMax(0.0);
  l /= l.sum();
  grad = g * l;
  quad = l.dot(grad);
  MinMaxSolution sol{DiscreteMeasure(l), grad.maxCoeff() - 0.5 * quad,
                     grad.maxCoeff() - quad, it};
  return sol;
}

MatheronReport matheron_conditions(const Variogram& v, const Grid& grid,
                                   const Hyperrectangle& rect, const DiscreteMeasure& lambda) {
  if (lambda.size() != grid.size())
    throw contract_error("matheron_conditions: measure not aligned with grid");
  const auto verts = vertices(rect);
  std::vector<int> vertex_index(verts.size());
  std::vector<bool> on_vertex(static_cast<std::size_t>(grid.size()), false);
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const int at = grid.find_point(verts[k].point);
    vertex_index[k] = at;
    if (at >= 0) on_vertex[static_cast<std::size_t>(at)] = true;
  }

  MatheronReport report{0.0, 0.0};
  for (int i = 0; i < grid.size(); ++i)
    if (!on_vertex[static_cast<std::size_t>(i)]) report.off_vertex_mass += lambda[i];

  // int int gamma dl dl and, per vertex, int gamma(v - .) dl
  const Eigen::MatrixXd g = variogram_matrix(v, grid.points());
  const Eigen::VectorXd b = g * lambda.weights();
  const double dd = lambda.weights().dot(b);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& vert : verts) {
    double integral = 0.0;
    for (int k = 0; k < grid.size(); ++k)
      if (lambda[k] > 0.0)
        integral += lambda[k] *
                    eval_variogram(v, Eigen::VectorXd(vert.point -
                                                      grid.point(k).transpose()));
    worst = std::max(worst, integral - dd);
  }
  report.max_vertex_excess = worst;
  return report;
}

double variogram_identity_error(const Representation& rep) {
  const Eigen::MatrixXd& c = rep.covariance();
  double worst = 0.0;
  for (int i = 0; i < rep.size(); ++i)
    for (int j = 0; j < rep.size(); ++j) {
      const double gamma_ij = eval_variogram(
          rep.variogram(),
          Eigen::VectorXd(rep.grid().point(i).transpose() - rep.grid().point(j).transpose()));
      const double lhs = c(i, i) - 2.0 * c(i, j) + c(j, j);
      worst = std::max(worst, std::fabs(lhs - gamma_ij) / std::max(1.0, std::fabs(gamma_ij)));
    }
  return worst;
}

double factor_residual(const Representation& rep) {
  const Eigen::MatrixXd recon = rep.factor() * rep.factor().transpose();
  Eigen::MatrixXd target = rep.covariance();
  target.diagonal().array() += rep.jitter_used();
  const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
  return (recon - target).cwiseAbs().maxCoeff() / scale;
}

}  // namespace maxstab
