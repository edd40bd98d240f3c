#include "lowtail/cones.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lowtail/error.hpp"

namespace lowtail {

namespace {

// Relative slack on the cosine comparison so that directions lying exactly on
// a cone boundary count as inside (closed cones).
constexpr double kBoundarySlack = 1e-12;

}  // namespace

bool ConeCover::in_extended(std::size_t i, const Eigen::Vector2d& v) const {
  const double n = v.norm();
  return axes[i].dot(v) >= n * std::cos(extended_half_angle) - kBoundarySlack * n;
}

bool ConeCover::core_covers_circle() const {
  // The arcs [theta_i - h, theta_i + h] cover the circle iff every gap
  // between consecutive sorted axis angles is at most 2h.
  std::vector<double> angles;
  angles.reserve(axes.size());
  for (const auto& a : axes) angles.push_back(std::atan2(a.y(), a.x()));
  std::sort(angles.begin(), angles.end());
  if (angles.empty()) return false;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double next = i + 1 < angles.size() ? angles[i + 1] : angles[0] + 2 * std::numbers::pi;
    if (next - angles[i] > 2 * core_half_angle + 1e-12) return false;
  }
  return true;
}

ConeCover make_cone_cover(int count, double core_half_angle, double extended_half_angle) {
  if (count < 1) throw ParameterError("cone cover needs at least one axis");
  if (!(core_half_angle > 0) || extended_half_angle < core_half_angle) {
    throw ParameterError("invalid cone half-angles");
  }
  ConeCover c{{}, core_half_angle, extended_half_angle};
  for (int j = 0; j < count; ++j) {
    const double th = 2 * std::numbers::pi * j / count;
    c.axes.emplace_back(std::cos(th), std::sin(th));
  }
  return c;
}

const ConeCover& cone_cover_2d() {
  static const ConeCover cover =
      make_cone_cover(12, std::numbers::pi / 12, std::numbers::pi / 6);
  return cover;
}

}  // namespace lowtail
