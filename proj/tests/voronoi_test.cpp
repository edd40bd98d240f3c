#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lowtail/error.hpp"
#include "lowtail/stabilization.hpp"
#include "lowtail/voronoi.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lowtail;

namespace {

PointConfig cross() {
  return PointConfig(BoxWindow(6, 2), {make_point({0, 0}), make_point({2, 0}), make_point({-2, 0}),
                                       make_point({0, 2}), make_point({0, -2})});
}

}  // namespace

TEST(VoronoiCell, CrossGivesUnitSquare) {
  const ConvexPolygon cell = voronoi_cell(cross(), make_point({0, 0}), 10);
  EXPECT_TRUE(cell.bounded);
  ASSERT_EQ(cell.vertices.size(), 4u);
  for (const auto& v : cell.vertices) {
    EXPECT_NEAR(std::abs(v.x()), 1, 1e-12);
    EXPECT_NEAR(std::abs(v.y()), 1, 1e-12);
  }
  EXPECT_NEAR(cell.area(), 4, 1e-12);  // positive area means CCW
}

TEST(VoronoiCell, SingleNeighborLeavesCellOpen) {
  const PointConfig c(BoxWindow(6, 2), {make_point({0, 0}), make_point({2, 0})});
  const ConvexPolygon cell = voronoi_cell(c, make_point({0, 0}), 10);
  EXPECT_FALSE(cell.bounded);
  EXPECT_NEAR(cell.area(), 11 * 20, 1e-9);
  EXPECT_THROW(intrinsic_volumes_2d(cell), UnboundedCellError);
}

TEST(VoronoiCell, ParameterErrors) {
  EXPECT_THROW(voronoi_cell(cross(), make_point({0, 0}), 0), ParameterError);
  EXPECT_THROW(voronoi_cell(cross(), make_point({0, 0}), -1), ParameterError);
  EXPECT_THROW(voronoi_cell(cross(), make_point({1, 1}), 1), ParameterError);
  const PointConfig c3(BoxWindow(2, 3), {make_point({0, 0, 0})});
  EXPECT_THROW(voronoi_cell(c3, make_point({0, 0, 0}), 1), ParameterError);
}

TEST(IntrinsicVolumes, SquareAndPolygonalDisk) {
  ConvexPolygon sq{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, true};
  const auto v = intrinsic_volumes_2d(sq);
  EXPECT_DOUBLE_EQ(v[0], 1);
  EXPECT_DOUBLE_EQ(v[1], 4);
  EXPECT_DOUBLE_EQ(v[2], 4);

  ConvexPolygon disk;
  disk.bounded = true;
  for (int i = 0; i < 720; ++i) {
    const double a = 2 * std::numbers::pi * i / 720;
    disk.vertices.emplace_back(std::cos(a), std::sin(a));
  }
  const auto w = intrinsic_volumes_2d(disk);
  EXPECT_NEAR(w[1], std::numbers::pi, 1e-3);
  EXPECT_NEAR(w[2], std::numbers::pi, 1e-3);

  ConvexPolygon seg{{{0, 0}, {1, 0}}, true};
  EXPECT_THROW(intrinsic_volumes_2d(seg), UnboundedCellError);
}

TEST(VoronoiCell, MatchesBruteForceOracle) {
  const RngStream root(300, 0);
  for (std::uint64_t t = 0; t < 300; ++t) {
    const std::size_t n = 2 + t % 30;
    const auto pts = testutil::random_points(n, 4, root.split(t));
    const PointConfig c(BoxWindow(4, 2), pts);
    for (std::size_t i = 0; i < n; ++i) {
      const ConvexPolygon cell = voronoi_cell_at(c, i, 3);
      const oracle::Cell o = oracle::voronoi_cell(pts, i, 3);
      EXPECT_NEAR(cell.area(), o.area, 1e-9) << "trial " << t << " point " << i;
      EXPECT_NEAR(cell.perimeter(), o.perimeter, 1e-9);
      EXPECT_EQ(cell.bounded, !o.touches_box);
    }
  }
}

namespace {

// Area of a convex polygon intersected with the box [lo, hi]^2.
double clipped_area(std::vector<Eigen::Vector2d> poly, double lo, double hi) {
  for (int axis = 0; axis < 2; ++axis) {
    for (double sign : {-1.0, 1.0}) {
      const double bound = sign < 0 ? -lo : hi;
      std::vector<Eigen::Vector2d> out;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        const double fa = sign * a[axis] - bound, fb = sign * b[axis] - bound;
        if (fa <= 0) out.push_back(a);
        if ((fa <= 0) != (fb <= 0)) out.push_back(a + fa / (fa - fb) * (b - a));
      }
      poly = out;
    }
  }
  ConvexPolygon c{poly, true};
  return poly.size() < 3 ? 0 : c.area();
}

}  // namespace

TEST(VoronoiCell, CellsTessellateTheScoringWindow) {
  const auto c = sample_poisson(1, BoxWindow(20, 2), RngStream(301, 0));
  double area = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    area += clipped_area(voronoi_cell_at(c, i, 40).vertices, -5, 5);
  }
  EXPECT_NEAR(area, 100, 1e-8);

  double inner = 0;
  for (std::size_t i : c.indices_in(BoxWindow(10, 2))) {
    const double r = stab_radius_voronoi_at(c, i);
    ASSERT_TRUE(std::isfinite(r));
    const ConvexPolygon cell = voronoi_cell_at(c, i, r);
    ASSERT_TRUE(cell.bounded);
    inner += cell.area();
  }
  EXPECT_NEAR(inner / 100, 1, 0.1);
}
