#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace maxstab {

/// Centered hyperrectangle prod_i [-R_i, R_i], all half-widths positive.
struct Hyperrectangle {
  Eigen::VectorXd half_widths;

  explicit Hyperrectangle(Eigen::VectorXd hw);
  int dim() const { return static_cast<int>(half_widths.size()); }
  /// Radius of the smallest enclosing ball, (sum R_i^2)^{1/2}.
  double enclosing_radius() const { return half_widths.norm(); }
};

struct RegularGridSpec {
  Eigen::VectorXd half_widths;
  std::vector<int> counts;
};

/// Finite ordered point set; the row order is frozen at construction and
/// defines every matrix index, sample coordinate and CSV column downstream.
class Grid {
 public:
  explicit Grid(Eigen::MatrixXd points, std::string label = "");

  int size() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::RowVectorXd point(int i) const { return points_.row(i); }
  const std::string& label() const { return label_; }

  /// Set when the grid came out of regular_grid; shift samplers require it.
  const std::optional<RegularGridSpec>& regular() const { return regular_; }

  /// Index of the grid point equal to `p` within 1e-12 (max norm), or -1.
  int find_point(const Eigen::VectorXd& p) const;

 private:
  friend Grid regular_grid(const Hyperrectangle&, const std::vector<int>&, std::string);
  Eigen::MatrixXd points_;
  std::string label_;
  std::optional<RegularGridSpec> regular_;
};

/// Equispaced tensor grid on the hyperrectangle, endpoints included on every
/// axis, rows ordered lexicographically by axes (first axis slowest).
Grid regular_grid(const Hyperrectangle& rect, const std::vector<int>& counts,
                  std::string label = "");

/// The 2^d vertices v_A, ordered by the bitmask of A: coordinate i of v_A is
/// +R_i when bit i of the label is set, otherwise -R_i.
struct LabelledVertex {
  unsigned label;  // subset A as a bitmask
  Eigen::VectorXd point;
};
std::vector<LabelledVertex> vertices(const Hyperrectangle& rect);

/// Probability weights on the points of a grid. Weights below -1e-12 are
/// rejected, tiny negatives are clamped to zero, and the sum must be 1 within
/// 1e-10 (no silent renormalization).
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(Eigen::VectorXd weights);

  int size() const { return static_cast<int>(weights_.size()); }
  const Eigen::VectorXd& weights() const { return weights_; }
  double operator[](int i) const { return weights_[i]; }

 private:
  Eigen::VectorXd weights_;
};

/// Weight 2^{-d} on each hyperrectangle vertex; every vertex must be a grid
/// point (coordinates matched within 1e-12) or construction fails naming the
/// absent vertex.
DiscreteMeasure uniform_vertex_measure(const Grid& grid, const Hyperrectangle& rect);

/// Unit mass at one grid point.
DiscreteMeasure dirac_measure(const Grid& grid, int index);

}  // namespace maxstab
