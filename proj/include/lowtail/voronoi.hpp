#pragma once

#include <Eigen/Core>

#include <array>
#include <vector>

#include "lowtail/geometry.hpp"

namespace lowtail {

/// Counter-clockwise convex polygon in the plane.
struct ConvexPolygon {
  std::vector<Eigen::Vector2d> vertices;
  /// False when an edge of the seeding clip square survived clipping.
  bool bounded = false;

  double area() const;
  double perimeter() const;
};

/// Voronoi cell of `center` (a point of a planar config): the seeding square
/// of half-width `clip_radius` around the center, cut by the bisector
/// half-planes of the other points, nearest first.
ConvexPolygon voronoi_cell(const PointConfig& config, const Point& center, double clip_radius);
ConvexPolygon voronoi_cell_at(const PointConfig& config, std::size_t i, double clip_radius);

/// (v0, v1, v2) = (1, perimeter / 2, area) of a bounded cell.
std::array<double, 3> intrinsic_volumes_2d(const ConvexPolygon& cell);

}  // namespace lowtail
