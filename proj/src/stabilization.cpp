#include "lowtail/stabilization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lowtail/error.hpp"
#include "lowtail/graphs.hpp"
#include "lowtail/scores.hpp"
#include "lowtail/spatial_grid.hpp"

namespace lowtail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 2 * max over cones of the k-th smallest distance among cone members.
double cone_radius(const PointConfig& config, std::size_t i, const ConeCover& cover, int k) {
  if (config.dimension() != 2) throw ParameterError("stabilization radii are defined for d = 2 only");
  if (k < 1) throw ParameterError("k must be positive");
  if (config.size() <= 1) return kInf;
  const SpatialGrid& grid = config.grid();
  const NeighborOrder order{&config};
  const double full = 2 * config.window().diameter();
  double r = grid.radius_for(static_cast<std::size_t>(24 * k));
  for (;;) {
    std::vector<Neighbor> found = grid.within(config[i], r, i);
    std::sort(found.begin(), found.end(), order);
    std::vector<int> counts(cover.size(), 0);
    std::size_t done = 0;
    double answer = kInf;
    for (const Neighbor& nb : found) {
      const Eigen::Vector2d v = (config[nb.index] - config[i]).head<2>();
      for (std::size_t c = 0; c < cover.size(); ++c) {
        if (counts[c] < k && cover.in_extended(c, v) && ++counts[c] == k) ++done;
      }
      if (done == cover.size()) {
        answer = 2 * nb.distance;
        break;
      }
    }
    if (std::isfinite(answer)) return answer;
    if (r >= full) return kInf;
    r *= 2;
  }
}

}  // namespace

double stab_radius_voronoi_at(const PointConfig& config, std::size_t i, const ConeCover& cover) {
  return cone_radius(config, i, cover, 1);
}

double stab_radius_voronoi(const PointConfig& config, const Point& center, const ConeCover& cover) {
  return stab_radius_voronoi_at(config, require_index(config, center), cover);
}

double stab_radius_knn_at(const PointConfig& config, std::size_t i, const ConeCover& cover, int k) {
  return cone_radius(config, i, cover, k);
}

double stab_radius_knn(const PointConfig& config, const Point& center, const ConeCover& cover,
                       int k) {
  return stab_radius_knn_at(config, require_index(config, center), cover, k);
}

double stab_radius_at(const PointConfig& config, std::size_t i, RadiusKind kind) {
  return kind.type == RadiusKind::Type::voronoi ? stab_radius_voronoi_at(config, i)
                                                : stab_radius_knn_at(config, i, cone_cover_2d(), kind.k);
}

bool verify_stabilization(const ScoreSpec& spec, const PointConfig& config, const Point& center,
                          double radius) {
  if (!std::isfinite(radius) || radius < 0) throw ParameterError("radius must be finite and nonnegative");
  const double full = evaluate_score(spec, config, center);
  const double local = evaluate_score(spec, restrict_to_ball(config, center, radius), center);
  if (std::holds_alternative<CliqueCount>(spec.kind)) return full == local;
  return std::abs(full - local) <= 1e-12 * std::max(1.0, std::abs(full));
}

}  // namespace lowtail
