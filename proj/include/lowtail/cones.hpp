#pragma once

#include <Eigen/Core>

#include <vector>

namespace lowtail {

/// Planar cone family used by the stabilization radii.
///
/// Core cones of half-angle `core_half_angle` around each axis cover the
/// plane; the extended cones share the axes with the larger half-angle.
struct ConeCover {
  std::vector<Eigen::Vector2d> axes;
  double core_half_angle;
  double extended_half_angle;

  std::size_t size() const noexcept { return axes.size(); }

  /// Closed-cone membership of direction `v` (nonzero) in extended cone i.
  bool in_extended(std::size_t i, const Eigen::Vector2d& v) const;

  /// Does the union of core cones contain every direction?
  bool core_covers_circle() const;
};

/// The canonical cover: 12 axes at angles pi*j/6, half-angles pi/12 and pi/6.
const ConeCover& cone_cover_2d();

/// Build a cover with `count` equally spaced axes, the first along +x.
ConeCover make_cone_cover(int count, double core_half_angle, double extended_half_angle);

}  // namespace lowtail
