#include "lowtail/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lowtail {

SpatialGrid::SpatialGrid(const PointConfig& config)
    : config_(&config), dim_(config.dimension()) {
  const BoxWindow& w = config.window();
  const double n = std::max<double>(1.0, static_cast<double>(config.size()));
  const double target_cells = n / 2.0;
  int m = static_cast<int>(std::floor(std::pow(target_cells, 1.0 / dim_)));
  cells_per_axis_ = std::clamp(m, 1, dim_ == 3 ? 128 : 1024);
  cell_side_ = w.side() / cells_per_axis_;

  std::size_t total = 1;
  for (int a = 0; a < dim_; ++a) total *= static_cast<std::size_t>(cells_per_axis_);

  std::vector<std::size_t> cell_of(config.size());
  std::vector<std::size_t> counts(total + 1, 0);
  for (std::size_t i = 0; i < config.size(); ++i) {
    std::size_t c = 0;
    std::size_t stride = 1;
    for (int a = 0; a < dim_; ++a) {
      c += stride * static_cast<std::size_t>(cell_coord(a, config[i][a]));
      stride *= static_cast<std::size_t>(cells_per_axis_);
    }
    cell_of[i] = c;
    ++counts[c + 1];
  }
  for (std::size_t c = 0; c < total; ++c) counts[c + 1] += counts[c];
  cell_start_ = counts;
  order_.resize(config.size());
  std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
  for (std::size_t i = 0; i < config.size(); ++i) order_[fill[cell_of[i]]++] = i;
}

int SpatialGrid::cell_coord(int axis, double x) const {
  const double rel = (x - config_->window().lower(axis)) / cell_side_;
  if (!(rel > 0)) return 0;
  if (rel >= cells_per_axis_) return cells_per_axis_ - 1;
  return static_cast<int>(rel);
}

std::vector<Neighbor> SpatialGrid::within(const Point& p, double radius,
                                          std::size_t exclude) const {
  std::vector<Neighbor> out;
  for_each_within(p, radius, [&](std::size_t idx, double dist) {
    if (idx != exclude) out.push_back({idx, dist});
  });
  return out;
}

double SpatialGrid::radius_for(std::size_t count) const {
  const BoxWindow& w = config_->window();
  const double density =
      std::max(1.0, static_cast<double>(config_->size())) / w.volume();
  const double unit_ball = dim_ == 1 ? 2.0 : dim_ == 2 ? std::numbers::pi : 4.0 * std::numbers::pi / 3.0;
  return 1.25 * std::pow(static_cast<double>(count + 1) / (unit_ball * density), 1.0 / dim_);
}

std::vector<Neighbor> SpatialGrid::nearest(std::size_t i, std::size_t count) const {
  const PointConfig& cfg = *config_;
  const NeighborOrder order{&cfg};
  if (count == 0) return {};
  const double full = cfg.window().diameter() * 2.0;
  double r = radius_for(count);
  for (;;) {
    std::vector<Neighbor> found = within(cfg[i], r, i);
    if (found.size() >= count || r >= full) {
      const std::size_t keep = std::min(count, found.size());
      std::partial_sort(found.begin(), found.begin() + static_cast<std::ptrdiff_t>(keep),
                        found.end(), order);
      found.resize(keep);
      return found;
    }
    r *= 2.0;
  }
}

}  // namespace lowtail
