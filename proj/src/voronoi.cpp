#include "lowtail/voronoi.hpp"

#include <algorithm>
#include <cmath>

#include "lowtail/error.hpp"
#include "lowtail/graphs.hpp"
#include "lowtail/spatial_grid.hpp"

namespace lowtail {

double ConvexPolygon::area() const {
  double twice = 0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[(i + 1) % n];
    twice += a.x() * b.y() - a.y() * b.x();
  }
  return twice / 2;
}

double ConvexPolygon::perimeter() const {
  double s = 0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) s += (vertices[(i + 1) % n] - vertices[i]).norm();
  return s;
}

namespace {

constexpr int kClipEdge = -1;

struct Vertex {
  Eigen::Vector2d pos;
  int edge_source;  // generator of the edge leaving this vertex
};

// Clip by {x : (x - c) . g <= |g|^2 / 2} where g = y - c. Returns false when
// no vertex lies outside, in which case `poly` is untouched.
bool clip(std::vector<Vertex>& poly, const Eigen::Vector2d& c, const Eigen::Vector2d& g,
          int source) {
  const double half = g.squaredNorm() / 2;
  const std::size_t n = poly.size();
  std::vector<double> f(n);
  bool any_out = false;
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = (poly[i].pos - c).dot(g) - half;
    any_out = any_out || f[i] > 0;
  }
  if (!any_out) return false;
  std::vector<Vertex> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const bool in_i = f[i] <= 0;
    const bool in_j = f[j] <= 0;
    if (in_i) out.push_back(poly[i]);
    if (in_i != in_j) {
      const double s = f[i] / (f[i] - f[j]);
      const Eigen::Vector2d x = poly[i].pos + s * (poly[j].pos - poly[i].pos);
      out.push_back({x, in_i ? source : poly[i].edge_source});
    }
  }
  // Merge vertices that collapsed onto each other.
  std::vector<Vertex> merged;
  merged.reserve(out.size());
  for (const Vertex& v : out) {
    if (!merged.empty() && (merged.back().pos - v.pos).norm() <= 1e-14 * (1 + v.pos.norm())) {
      merged.back().edge_source = v.edge_source;
      continue;
    }
    merged.push_back(v);
  }
  while (merged.size() > 1 &&
         (merged.front().pos - merged.back().pos).norm() <= 1e-14 * (1 + merged.front().pos.norm())) {
    merged.pop_back();
  }
  poly = std::move(merged);
  return true;
}

double max_vertex_distance(const std::vector<Vertex>& poly, const Eigen::Vector2d& c) {
  double m = 0;
  for (const Vertex& v : poly) m = std::max(m, (v.pos - c).norm());
  return m;
}

}  // namespace

ConvexPolygon voronoi_cell_at(const PointConfig& config, std::size_t i, double clip_radius) {
  if (config.dimension() != 2) throw ParameterError("Voronoi cells are implemented for d = 2 only");
  if (!(clip_radius > 0) || !std::isfinite(clip_radius)) {
    throw ParameterError("clip radius must be positive and finite");
  }
  const Eigen::Vector2d c = config[i].head<2>();
  const double h = clip_radius;
  std::vector<Vertex> poly = {{c + Eigen::Vector2d(-h, -h), kClipEdge},
                              {c + Eigen::Vector2d(h, -h), kClipEdge},
                              {c + Eigen::Vector2d(h, h), kClipEdge},
                              {c + Eigen::Vector2d(-h, h), kClipEdge}};

  // A generator at distance rho can only cut the polygon if rho / 2 is below
  // the farthest vertex distance; so neighbors beyond twice that are inert.
  const SpatialGrid& grid = config.grid();
  const NeighborOrder order{&config};
  std::vector<Neighbor> cand = grid.within(config[i], 2 * max_vertex_distance(poly, c), i);
  std::sort(cand.begin(), cand.end(), order);
  for (const Neighbor& nb : cand) {
    if (poly.size() < 3) break;
    if (nb.distance / 2 > max_vertex_distance(poly, c)) break;
    const Eigen::Vector2d g = config[nb.index].head<2>() - c;
    clip(poly, c, g, static_cast<int>(nb.index));
  }

  ConvexPolygon cell;
  cell.bounded = poly.size() >= 3;
  for (const Vertex& v : poly) {
    cell.vertices.push_back(v.pos);
    if (v.edge_source == kClipEdge) cell.bounded = false;
  }
  return cell;
}

ConvexPolygon voronoi_cell(const PointConfig& config, const Point& center, double clip_radius) {
  return voronoi_cell_at(config, require_index(config, center), clip_radius);
}

std::array<double, 3> intrinsic_volumes_2d(const ConvexPolygon& cell) {
  if (cell.vertices.size() < 3) throw UnboundedCellError("degenerate polygon has no intrinsic volumes");
  if (!cell.bounded) throw UnboundedCellError("Voronoi cell is not bounded by its neighbors");
  return {1.0, cell.perimeter() / 2, cell.area()};
}

}  // namespace lowtail
