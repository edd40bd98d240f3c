#pragma once

#include <cstddef>
#include <vector>

#include "lowtail/geometry.hpp"

namespace lowtail {

struct Neighbor {
  std::size_t index;
  double distance;
};

/// Orders by distance, then lexicographically by coordinates.
struct NeighborOrder {
  const PointConfig* config;
  bool operator()(const Neighbor& a, const Neighbor& b) const {
    if (a.distance != b.distance) return a.distance < b.distance;
    return lex_less((*config)[a.index], (*config)[b.index]);
  }
};

/// Uniform bucket grid over a configuration's window (about two points per
/// cell). Query points may lie outside the window.
class SpatialGrid {
 public:
  explicit SpatialGrid(const PointConfig& config);

  /// Calls f(index, distance) for every point with |x - p| <= radius.
  template <class F>
  void for_each_within(const Point& p, double radius, F&& f) const;

  /// Points within the closed ball, excluding `exclude` (if < size).
  std::vector<Neighbor> within(const Point& p, double radius,
                               std::size_t exclude = static_cast<std::size_t>(-1)) const;

  /// The `count` nearest points to config[i] (excluding i), sorted by
  /// NeighborOrder. Fewer are returned if the configuration is too small.
  std::vector<Neighbor> nearest(std::size_t i, std::size_t count) const;

  /// Initial search radius expected to hold about `count` points.
  double radius_for(std::size_t count) const;

 private:
  int cell_coord(int axis, double x) const;

  const PointConfig* config_;
  int dim_;
  int cells_per_axis_;
  double cell_side_;
  std::vector<std::size_t> cell_start_;
  std::vector<std::size_t> order_;
};

template <class F>
void SpatialGrid::for_each_within(const Point& p, double radius, F&& f) const {
  int lo[3] = {0, 0, 0};
  int hi[3] = {0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    lo[a] = cell_coord(a, p[a] - radius);
    hi[a] = cell_coord(a, p[a] + radius);
  }
  const int m = cells_per_axis_;
  for (int z = lo[2]; z <= hi[2]; ++z) {
    for (int y = lo[1]; y <= hi[1]; ++y) {
      for (int x = lo[0]; x <= hi[0]; ++x) {
        const std::size_t cell = static_cast<std::size_t>(x) +
                                 static_cast<std::size_t>(m) *
                                     (static_cast<std::size_t>(y) +
                                      static_cast<std::size_t>(m) * static_cast<std::size_t>(z));
        for (std::size_t s = cell_start_[cell]; s < cell_start_[cell + 1]; ++s) {
          const std::size_t idx = order_[s];
          const double dist = ((*config_)[idx] - p).norm();
          if (dist <= radius) f(idx, dist);
        }
      }
    }
  }
}

}  // namespace lowtail
