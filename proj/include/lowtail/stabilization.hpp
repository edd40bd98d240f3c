#pragma once

#include <cstddef>

#include "lowtail/cones.hpp"
#include "lowtail/geometry.hpp"
#include "lowtail/score_spec.hpp"

namespace lowtail {

/// Which stabilization radius to use.
struct RadiusKind {
  enum class Type { voronoi, knn };
  Type type = Type::voronoi;
  int k = 1;

  static RadiusKind voronoi() { return {Type::voronoi, 1}; }
  static RadiusKind knn(int k) { return {Type::knn, k}; }
};

/// 2 * max over extended cones of the distance to the nearest other point in
/// that cone; +inf if some extended cone is empty. Planar configs only.
double stab_radius_voronoi(const PointConfig& config, const Point& center,
                           const ConeCover& cover = cone_cover_2d());
double stab_radius_voronoi_at(const PointConfig& config, std::size_t i,
                              const ConeCover& cover = cone_cover_2d());

/// As stab_radius_voronoi with the k-th closest point of each cone.
double stab_radius_knn(const PointConfig& config, const Point& center, const ConeCover& cover,
                       int k);
double stab_radius_knn_at(const PointConfig& config, std::size_t i, const ConeCover& cover,
                          int k);

double stab_radius_at(const PointConfig& config, std::size_t i, RadiusKind kind);

/// Does the score at `center` agree on the full configuration and on its
/// intersection with the closed ball B_radius(center)? Exact comparison for
/// clique counts, relative tolerance 1e-12 otherwise.
bool verify_stabilization(const ScoreSpec& spec, const PointConfig& config, const Point& center,
                          double radius);

}  // namespace lowtail
