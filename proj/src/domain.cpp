#include "maxstab/domain.hpp"

#include <cmath>
#include <sstream>

#include "maxstab/errors.hpp"

namespace maxstab {

namespace {
constexpr double kPointTol = 1e-12;
}

Hyperrectangle::Hyperrectangle(Eigen::VectorXd hw) : half_widths(std::move(hw)) {
  if (half_widths.size() < 1) throw domain_error("Hyperrectangle: needs at least one axis");
  if (!(half_widths.minCoeff() > 0.0))
    throw domain_error("Hyperrectangle: all half-widths must be positive");
}

Grid::Grid(Eigen::MatrixXd points, std::string label)
    : points_(std::move(points)), label_(std::move(label)) {
  const Eigen::Index n = points_.rows();
  if (n < 1) throw domain_error("Grid: needs at least one point");
  if (points_.cols() < 1) throw domain_error("Grid: needs at least one coordinate");
  if (!points_.allFinite()) throw domain_error("Grid: non-finite coordinate");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if ((points_.row(i) - points_.row(j)).norm() <= kPointTol) {
        std::ostringstream os;
        os << "Grid: points " << i << " and " << j << " coincide";
        throw domain_error(os.str());
      }
}

int Grid::find_point(const Eigen::VectorXd& p) const {
  for (Eigen::Index i = 0; i < points_.rows(); ++i)
    if ((points_.row(i).transpose() - p).cwiseAbs().maxCoeff() <= kPointTol)
      return static_cast<int>(i);
  return -1;
}

Grid regular_grid(const Hyperrectangle& rect, const std::vector<int>& counts,
                  std::string label) {
  const int d = rect.dim();
  if (static_cast<int>(counts.size()) != d)
    throw contract_error("regular_grid: one count per axis required");
  long total = 1;
  for (int c : counts) {
    if (c < 2) throw domain_error("regular_grid: counts must be >= 2 per axis");
    total *= c;
  }
  Eigen::MatrixXd points(total, d);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (long row = 0; row < total; ++row) {
    for (int a = 0; a < d; ++a) {
      // exact at both endpoints: R * (2 i / (c-1) - 1)
      const double frac = 2.0 * idx[static_cast<std::size_t>(a)] / (counts[static_cast<std::size_t>(a)] - 1) - 1.0;
      points(row, a) = rect.half_widths[a] * frac;
    }
    // lexicographic order, first axis slowest
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < counts[static_cast<std::size_t>(a)]) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
  Grid grid(std::move(points), std::move(label));
  grid.regular_ = RegularGridSpec{rect.half_widths, counts};
  return grid;
}

std::vector<LabelledVertex> vertices(const Hyperrectangle& rect) {
  const int d = rect.dim();
  std::vector<LabelledVertex> out;
  out.reserve(std::size_t{1} << d);
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i)
      v[i] = (mask & (1u << i)) ? rect.half_widths[i] : -rect.half_widths[i];
    out.push_back({mask, std::move(v)});
  }
  return out;
}

DiscreteMeasure::DiscreteMeasure(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  if (weights_.size() < 1) throw domain_error("DiscreteMeasure: empty weight vector");
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]))
      throw domain_error("DiscreteMeasure: non-finite weight");
    if (weights_[i] < -1e-12) {
      std::ostringstream os;
      os << "DiscreteMeasure: negative weight " << weights_[i] << " at index " << i;
      throw domain_error(os.str());
    }
    if (weights_[i] < 0.0) weights_[i] = 0.0;  // documented clamp
  }
  if (std::fabs(weights_.sum() - 1.0) > 1e-10)
    throw domain_error("DiscreteMeasure: weights must sum to 1 within 1e-10");
}

DiscreteMeasure uniform_vertex_measure(const Grid& grid, const Hyperrectangle& rect) {
  if (grid.dim() != rect.dim())
    throw contract_error("uniform_vertex_measure: dimension mismatch");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(grid.size());
  const auto verts = vertices(rect);
  const double mass = 1.0 / static_cast<double>(verts.size());
  for (const auto& v : verts) {
    const int at = grid.find_point(v.point);
    if (at < 0) {
      std::ostringstream os;
      os << "uniform_vertex_measure: vertex (" << v.point.transpose()
         << ") is not a grid point";
      throw contract_error(os.str());
    }
    w[at] = mass;
  }
  return DiscreteMeasure(std::move(w));
}

DiscreteMeasure dirac_measure(const Grid& grid, int index) {
  if (index < 0 || index >= grid.size())
    throw contract_error("dirac_measure: index out of range");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(grid.size());
  w[index] = 1.0;
  return DiscreteMeasure(std::move(w));
}

}  // namespace maxstab
