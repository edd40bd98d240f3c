#include "lowtail/sprinkling.hpp"

#include <cmath>

#include "lowtail/error.hpp"
#include "lowtail/scores.hpp"
#include "lowtail/spatial_grid.hpp"

namespace lowtail {

namespace {

bool strictly_greater(double a, double b) { return a > b + 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

CouplingSample couple_eps(const PointConfig& base, double eps, RngStream rng) {
  if (!(eps > 0 && eps < 1)) throw ParameterError("eps must lie in (0, 1)");
  PointConfig thinned = thin(base, 1 - eps, rng.split(0));
  PointConfig sprinkle = sample_poisson(eps, base.window(), rng.split(1));
  PointConfig united = superpose(thinned, sprinkle);
  return {base, std::move(thinned), std::move(sprinkle), std::move(united), 1 - eps, eps};
}

CouplingSample couple_M(const PointConfig& base, double M, RngStream rng) {
  if (!(M >= 1) || !std::isfinite(M)) throw ParameterError("M must be at least 1");
  const double eps = std::pow(M, -base.dimension());
  if (!(eps < 1)) throw ParameterError("M^-d must be below 1; M = 1 degenerates the coupling");
  return couple_eps(base, eps, rng);
}

std::size_t count_b_dense(const PointConfig& config, const BoxWindow& scoring_window, double r,
                          double b, DenseShape shape) {
  if (!(r > 0)) throw ParameterError("r must be positive");
  const double reach = shape == DenseShape::cube
                           ? r / 2 * std::sqrt(static_cast<double>(config.dimension()))
                           : r;
  std::size_t dense = 0;
  for (std::size_t i : config.indices_in(scoring_window)) {
    std::size_t count = 0;
    config.grid().for_each_within(config[i], reach, [&](std::size_t j, double dist) {
      const bool inside = shape == DenseShape::cube
                              ? (config[j] - config[i]).cwiseAbs().maxCoeff() <= r / 2
                              : dist <= r;
      if (inside) ++count;
    });
    if (static_cast<double>(count) > b) ++dense;
  }
  return dense;
}

bool event_E_bn(const CouplingSample& sample, const BoxWindow& scoring_window, double r, double b) {
  if (!sample.sprinkle.indices_in(scoring_window).empty()) return false;
  return count_b_dense(sample.thinned, scoring_window, r, b) == 0;
}

bool event_E_M_plus(const CouplingSample& sample, const BoxWindow& scoring_window, double M,
                    RadiusKind kind) {
  const PointConfig& u = sample.united;
  for (std::size_t i : u.indices_in(scoring_window)) {
    if (!(stab_radius_at(u, i, kind) <= M)) return false;
  }
  return true;
}

BoxWindow regularity_grid_window(const BoxWindow& window, double M, double L) {
  if (!(M > 0) || !(L > 0)) throw ParameterError("M and L must be positive");
  const double cell = M / L;
  const double side = 2 * window.side();
  const double cells = std::ceil(side / cell - 1e-9);
  return BoxWindow(cells * cell, window.center());
}

bool event_A(const PointConfig& sprinkle, const BoxWindow& window, double M, double L) {
  const BoxWindow grid = regularity_grid_window(window, M, L);
  const double cell = M / L;
  const int d = grid.dimension();
  const auto per_axis = static_cast<long>(std::llround(grid.side() / cell));
  long total = 1;
  for (int a = 0; a < d; ++a) total *= per_axis;
  std::vector<int> counts(static_cast<std::size_t>(total), 0);
  for (const Point& p : sprinkle.points()) {
    if (!grid.contains(p)) continue;
    long idx = 0;
    for (int a = d - 1; a >= 0; --a) {
      long c = static_cast<long>(std::floor((p[a] - grid.lower(a)) / cell));
      c = std::clamp(c, 0L, per_axis - 1);
      idx = idx * per_axis + c;
    }
    ++counts[static_cast<std::size_t>(idx)];
  }
  for (int c : counts) {
    if (c != 1) return false;
  }
  return true;
}

PointConfig sample_conditioned_on_A(const BoxWindow& window, double M, double L, RngStream rng) {
  const BoxWindow grid = regularity_grid_window(window, M, L);
  const double cell = M / L;
  const int d = grid.dimension();
  const auto per_axis = static_cast<long>(std::llround(grid.side() / cell));
  long total = 1;
  for (int a = 0; a < d; ++a) total *= per_axis;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(total));
  for (long idx = 0; idx < total; ++idx) {
    Point p(d);
    long rest = idx;
    for (int a = 0; a < d; ++a) {
      const long c = rest % per_axis;
      rest /= per_axis;
      p[a] = std::min(grid.lower(a) + (static_cast<double>(c) + rng.uniform()) * cell, grid.upper(a));
    }
    pts.push_back(std::move(p));
  }
  return PointConfig::trusted(grid, std::move(pts));
}

CouplingSample couple_M_conditioned_on_A(const BoxWindow& window, double M, double L, RngStream rng) {
  if (!(M >= 1)) throw ParameterError("M must be at least 1");
  const double eps = std::pow(M, -window.dimension());
  if (!(eps < 1)) throw ParameterError("M^-d must be below 1; M = 1 degenerates the coupling");
  PointConfig sprinkle = sample_conditioned_on_A(window, M, L, rng.split(2));
  PointConfig base = sample_poisson(1.0, sprinkle.window(), rng.split(0));
  PointConfig thinned = thin(base, 1 - eps, rng.split(1));
  PointConfig united = superpose(thinned, sprinkle);
  return {std::move(base), std::move(thinned), std::move(sprinkle), std::move(united), 1 - eps, eps};
}

double K0(double L, int dimension) { return std::pow(2 * L, dimension); }

std::vector<std::size_t> telescoping_increase_count(const ScoreSpec& spec, const PointConfig& base,
                                                    std::span<const Point> additions,
                                                    const BoxWindow& scoring_window) {
  const std::vector<std::size_t> watched = base.indices_in(scoring_window);
  PointConfig current = base;
  std::vector<double> before = score_points(spec, current, watched);
  std::vector<std::size_t> counts;
  counts.reserve(additions.size());
  for (const Point& x : additions) {
    current = current.with_point(x);
    std::vector<double> after = score_points(spec, current, watched);
    std::size_t c = 0;
    for (std::size_t s = 0; s < watched.size(); ++s) {
      if (strictly_greater(after[s], before[s])) ++c;
    }
    counts.push_back(c);
    before = std::move(after);
  }
  return counts;
}

}  // namespace lowtail
