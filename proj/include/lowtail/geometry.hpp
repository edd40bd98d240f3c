#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lowtail/rng.hpp"

namespace lowtail {

/// A point of R^d, 1 <= d <= 3. Fixed maximum size, so no heap traffic.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

Point make_point(std::initializer_list<double> coords);

/// Lexicographic order on coordinates; the library-wide tie breaker.
bool lex_less(const Point& a, const Point& b);

/// Closed axis-aligned cube of side `side` centered at `center`.
class BoxWindow {
 public:
  BoxWindow(double side, int dimension);
  BoxWindow(double side, Point center);

  double side() const noexcept { return side_; }
  int dimension() const noexcept { return static_cast<int>(center_.size()); }
  const Point& center() const noexcept { return center_; }
  double volume() const;
  double diameter() const;
  double lower(int axis) const { return center_[axis] - side_ / 2; }
  double upper(int axis) const { return center_[axis] + side_ / 2; }

  bool contains(const Point& p) const;
  bool contains(const BoxWindow& inner) const;

  /// Sup-norm distance from an interior point to the window boundary.
  double distance_to_boundary(const Point& p) const;

  /// Concentric window with side `side + 2 * margin`.
  BoxWindow grown(double margin) const;

  bool operator==(const BoxWindow& other) const;

 private:
  double side_;
  Point center_;
};

class SpatialGrid;

/// Finite set of distinct points inside a window.
///
/// Immutable after construction. A spatial grid over the points is built on
/// first use; copies and moves start with an empty grid.
class PointConfig {
 public:
  explicit PointConfig(BoxWindow window);

  /// Validates dimension, finiteness, window membership and distinctness.
  PointConfig(BoxWindow window, std::vector<Point> points);

  /// Skips validation; for points produced by the samplers.
  static PointConfig trusted(BoxWindow window, std::vector<Point> points);

  PointConfig(const PointConfig& other);
  PointConfig(PointConfig&& other) noexcept;
  PointConfig& operator=(const PointConfig& other);
  PointConfig& operator=(PointConfig&& other) noexcept;
  ~PointConfig();

  int dimension() const noexcept { return window_.dimension(); }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const noexcept { return points_; }
  const BoxWindow& window() const noexcept { return window_; }

  /// Index of a point with exactly these coordinates.
  std::optional<std::size_t> find(const Point& p) const;

  /// Copy with `extra` appended; existing indices are preserved.
  PointConfig with_points(std::span<const Point> extra) const;
  PointConfig with_point(const Point& extra) const;

  /// Indices of the points lying in the closed box.
  std::vector<std::size_t> indices_in(const BoxWindow& box) const;

  const SpatialGrid& grid() const;

 private:
  struct GridCache;

  BoxWindow window_;
  std::vector<Point> points_;
  std::shared_ptr<GridCache> cache_;
};

PointConfig sample_poisson(double intensity, const BoxWindow& window, RngStream rng);

/// Independent Bernoulli(survival) thinning.
PointConfig thin(const PointConfig& config, double survival, RngStream rng);

/// Union of two configurations on the same window. Points of `b` that
/// coincide exactly with a point of `a` are dropped.
PointConfig superpose(const PointConfig& a, const PointConfig& b);

/// Points of `config` lying in the closed box; the result carries `window`.
PointConfig restrict_to(const PointConfig& config, const BoxWindow& window);

/// Points within the closed ball B_r(center); the window is kept.
PointConfig restrict_to_ball(const PointConfig& config, const Point& center,
                             double radius);

/// Line format: header `d n side c_1 .. c_d`, then one point per line.
void write_text(std::ostream& os, const PointConfig& config);
PointConfig read_text(std::istream& is);

}  // namespace lowtail
