#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "maxstab/csv.hpp"
#include "maxstab/domain.hpp"
#include "maxstab/errors.hpp"
#include "maxstab/rng.hpp"

using namespace maxstab;

namespace {
Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}
}  // namespace

TEST_CASE("regular grid on the interval") {
  const Hyperrectangle rect(vec1(1.0));
  const Grid g = regular_grid(rect, {501});
  CHECK(g.size() == 501);
  CHECK(g.points()(0, 0) == -1.0);
  CHECK(g.points()(500, 0) == 1.0);
  CHECK(g.points()(1, 0) - g.points()(0, 0) == doctest::Approx(0.004).epsilon(1e-12));
  CHECK(g.regular().has_value());

  const Grid ends = regular_grid(rect, {2});
  CHECK(ends.size() == 2);
  CHECK(ends.points()(0, 0) == -1.0);
  CHECK(ends.points()(1, 0) == 1.0);

  CHECK_THROWS_AS(regular_grid(rect, {1}), domain_error);
}

TEST_CASE("regular grid on the square") {
  Eigen::VectorXd hw(2);
  hw << 1.0, 1.0;
  const Hyperrectangle rect(hw);
  const Grid g = regular_grid(rect, {21, 21});
  CHECK(g.size() == 441);
  CHECK(g.dim() == 2);
  // lexicographic by axes, first axis slowest
  CHECK(g.points()(0, 0) == -1.0);
  CHECK(g.points()(0, 1) == -1.0);
  CHECK(g.points()(1, 0) == -1.0);
  CHECK(g.points()(1, 1) == doctest::Approx(-0.9));
  CHECK(g.points()(21, 0) == doctest::Approx(-0.9));
  CHECK(g.points()(21, 1) == -1.0);
  // all four vertices present
  for (const auto& v : vertices(rect)) CHECK(g.find_point(v.point) >= 0);
}

TEST_CASE("vertices carry the subset sign rule") {
  const auto one = vertices(Hyperrectangle(vec1(1.0)));
  REQUIRE(one.size() == 2);
  CHECK(one[0].label == 0);
  CHECK(one[0].point[0] == -1.0);
  CHECK(one[1].point[0] == 1.0);

  Eigen::VectorXd hw(2);
  hw << 1.0, 2.0;
  const auto two = vertices(Hyperrectangle(hw));
  REQUIRE(two.size() == 4);
  // bitmask order: (-1,-2), (+1,-2), (-1,+2), (+1,+2)
  CHECK(two[0].point.isApprox(Eigen::Vector2d(-1, -2)));
  CHECK(two[1].point.isApprox(Eigen::Vector2d(1, -2)));   // A = {1}
  CHECK(two[2].point.isApprox(Eigen::Vector2d(-1, 2)));
  CHECK(two[3].point.isApprox(Eigen::Vector2d(1, 2)));

  // applying the sign rule twice recovers the label
  for (const auto& v : two) {
    unsigned mask = 0;
    for (int i = 0; i < 2; ++i)
      if (v.point[i] > 0) mask |= (1u << i);
    CHECK(mask == v.label);
  }
}

TEST_CASE("grid rejects coincident points") {
  Eigen::MatrixXd pts(2, 1);
  pts << 0.5, 0.5 + 1e-13;
  CHECK_THROWS_AS((Grid(pts)), domain_error);
}

TEST_CASE("discrete measure invariants") {
  Eigen::VectorXd ok(2);
  ok << 0.5, 0.5;
  CHECK_NOTHROW((DiscreteMeasure(ok)));

  Eigen::VectorXd clamp(2);
  clamp << 1.0 + 1e-13, -1e-13;  // tiny negative is clamped, sum stays within 1e-10
  const DiscreteMeasure m(clamp);
  CHECK(m[1] == 0.0);

  Eigen::VectorXd negative(2);
  negative << 1.1, -0.1;
  CHECK_THROWS_AS((DiscreteMeasure(negative)), domain_error);

  Eigen::VectorXd off(2);
  off << 0.6, 0.6;  // no silent renormalization
  CHECK_THROWS_AS((DiscreteMeasure(off)), domain_error);
}

TEST_CASE("uniform vertex measure") {
  const Hyperrectangle rect(vec1(1.0));
  const Grid g = regular_grid(rect, {5});
  const DiscreteMeasure m = uniform_vertex_measure(g, rect);
  CHECK(m[0] == doctest::Approx(0.5));
  CHECK(m[4] == doctest::Approx(0.5));
  CHECK(m[2] == 0.0);

  Eigen::VectorXd hw2(2);
  hw2 << 1.0, 1.0;
  const Hyperrectangle square(hw2);
  const Grid g2 = regular_grid(square, {3, 3});
  const DiscreteMeasure m2 = uniform_vertex_measure(g2, square);
  for (const auto& v : vertices(square))
    CHECK(m2[g2.find_point(v.point)] == doctest::Approx(0.25));

  // grid missing the +1 endpoint
  Eigen::MatrixXd pts(3, 1);
  pts << -1.0, 0.0, 0.9;
  const Grid missing(pts);
  CHECK_THROWS_AS(uniform_vertex_measure(missing, rect), contract_error);
}

TEST_CASE("dirac measure") {
  const Grid g = regular_grid(Hyperrectangle(vec1(1.0)), {3});
  const DiscreteMeasure m = dirac_measure(g, 0);
  CHECK(m[0] == 1.0);
  CHECK(m[1] == 0.0);
  CHECK_THROWS_AS(dirac_measure(g, 3), contract_error);

  Eigen::MatrixXd single(1, 1);
  single << 0.0;
  const Grid one(single);
  CHECK(dirac_measure(one, 0)[0] == 1.0);
}

TEST_CASE("grid csv round trip") {
  RngStream rng(7, 0);
  Eigen::MatrixXd pts(17, 3);
  for (int i = 0; i < pts.rows(); ++i)
    for (int a = 0; a < 3; ++a) pts(i, a) = 10.0 * rng.uniform() - 5.0;
  const Grid g(pts, "roundtrip");
  const auto path = std::filesystem::temp_directory_path() / "maxstab_grid_roundtrip.csv";
  write_grid_csv(g, path);
  const Grid back = read_grid_csv(path);
  REQUIRE(back.size() == g.size());
  REQUIRE(back.dim() == g.dim());
  CHECK((back.points() - g.points()).cwiseAbs().maxCoeff() == 0.0);  // 17 digits are exact
  std::filesystem::remove(path);
}
