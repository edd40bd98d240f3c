#include "lowtail/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lowtail/cones.hpp"
#include "lowtail/error.hpp"
#include "lowtail/spatial_grid.hpp"

namespace lowtail {

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::size_t Graph::degree(std::size_t i) const {
  return static_cast<std::size_t>(std::count_if(
      edges.begin(), edges.end(), [i](const auto& e) { return e.first == i || e.second == i; }));
}

std::vector<std::vector<std::size_t>> Graph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(n_vertices);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

Graph Graph::from_pairs(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> pairs) {
  Graph g;
  g.n_vertices = n;
  for (auto& [a, b] : pairs) {
    if (a == b) continue;
    if (a >= n || b >= n) throw ParameterError("edge index out of range");
    if (a > b) std::swap(a, b);
    g.edges.emplace_back(a, b);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

std::size_t require_index(const PointConfig& config, const Point& center) {
  auto idx = config.find(center);
  if (!idx) throw ParameterError("center is not a point of the configuration");
  return *idx;
}

// ---------------------------------------------------------------------------
// k-nearest neighbors

double knn_radius_at(const PointConfig& config, std::size_t i, int k) {
  if (k < 1) throw ParameterError("k must be positive");
  const auto nn = config.grid().nearest(i, static_cast<std::size_t>(k));
  if (nn.size() < static_cast<std::size_t>(k)) return std::numeric_limits<double>::infinity();
  return nn.back().distance;
}

double knn_radius(const PointConfig& config, const Point& center, int k) {
  return knn_radius_at(config, require_index(config, center), k);
}

std::vector<std::size_t> knn_set(const PointConfig& config, std::size_t i, int k) {
  if (k < 1) throw ParameterError("k must be positive");
  std::vector<std::size_t> out;
  for (const auto& nb : config.grid().nearest(i, static_cast<std::size_t>(k))) {
    out.push_back(nb.index);
  }
  return out;
}

std::vector<std::vector<std::size_t>> knn_sets(const PointConfig& config, int k) {
  if (k < 1) throw ParameterError("k must be positive");
  if (!config.empty() && config.size() < static_cast<std::size_t>(k) + 1) {
    throw InsufficientPointsError("k-nearest-neighbor radius is infinite: fewer than k+1 points");
  }
  std::vector<std::vector<std::size_t>> sets(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) sets[i] = knn_set(config, i, k);
  return sets;
}

Graph knn_graph(const PointConfig& config, int k, KnnMode mode) {
  const auto sets = knn_sets(config, k);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j : sets[i]) {
      if (mode == KnnMode::undirected) {
        pairs.emplace_back(i, j);
      } else if (i < j && std::find(sets[j].begin(), sets[j].end(), i) != sets[j].end()) {
        pairs.emplace_back(i, j);
      }
    }
  }
  return Graph::from_pairs(config.size(), std::move(pairs));
}

// ---------------------------------------------------------------------------
// Relative neighborhood graph

namespace {

// Largest over the extended cones of the distance to the nearest candidate
// in that cone; +inf if a cone is empty. Candidates beyond this radius are
// shadowed by a closer cone point at angle < pi/3 and have occupied lunes.
double cone_shadow_radius(const PointConfig& config, std::size_t i,
                          const std::vector<Neighbor>& sorted) {
  const ConeCover& cover = cone_cover_2d();
  std::vector<double> mins(cover.size(), std::numeric_limits<double>::infinity());
  std::size_t filled = 0;
  for (const Neighbor& nb : sorted) {
    const Eigen::Vector2d v = (config[nb.index] - config[i]).head<2>();
    for (std::size_t c = 0; c < cover.size(); ++c) {
      if (std::isinf(mins[c]) && cover.in_extended(c, v)) {
        mins[c] = nb.distance;
        ++filled;
      }
    }
    if (filled == cover.size()) return nb.distance;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

std::vector<std::size_t> rng_neighbors(const PointConfig& config, std::size_t i) {
  const SpatialGrid& grid = config.grid();
  const NeighborOrder order{&config};
  const double full = config.window().diameter() * 2.0;
  double r = grid.radius_for(48);
  std::vector<Neighbor> found;
  double cutoff = std::numeric_limits<double>::infinity();
  for (;;) {
    found = grid.within(config[i], r, i);
    std::sort(found.begin(), found.end(), order);
    if (r >= full) break;
    if (config.dimension() == 2) {
      cutoff = cone_shadow_radius(config, i, found);
      if (std::isfinite(cutoff)) break;
    }
    r *= 2.0;
  }

  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < found.size(); ++c) {
    const Neighbor& cand = found[c];
    if (cand.distance > cutoff) break;
    bool blocked = false;
    for (std::size_t z = 0; z < c && !blocked; ++z) {
      if (found[z].distance < cand.distance &&
          (config[found[z].index] - config[cand.index]).norm() < cand.distance) {
        blocked = true;
      }
    }
    if (!blocked) out.push_back(cand.index);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Graph rng_graph(const PointConfig& config) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < config.size(); ++i) {
    for (std::size_t j : rng_neighbors(config, i)) pairs.emplace_back(i, j);
  }
  return Graph::from_pairs(config.size(), std::move(pairs));
}

// ---------------------------------------------------------------------------
// Cliques

namespace {

std::size_t count_cliques(const std::vector<std::vector<char>>& adj, std::vector<std::size_t>& chosen,
                          std::size_t start, int remaining) {
  if (remaining == 0) return 1;
  std::size_t total = 0;
  for (std::size_t v = start; v < adj.size(); ++v) {
    bool ok = true;
    for (std::size_t u : chosen) {
      if (!adj[u][v]) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    chosen.push_back(v);
    total += count_cliques(adj, chosen, v + 1, remaining - 1);
    chosen.pop_back();
  }
  return total;
}

}  // namespace

std::size_t clique_count_at_index(const PointConfig& config, std::size_t i, int k, double t) {
  if (k < 2) throw ParameterError("clique size must be at least 2");
  if (!(t > 0)) throw ParameterError("connection radius must be positive");
  std::vector<std::size_t> nbrs;
  config.grid().for_each_within(config[i], t, [&](std::size_t idx, double dist) {
    if (idx != i && dist < t) nbrs.push_back(idx);
  });
  std::sort(nbrs.begin(), nbrs.end());
  if (k == 2) return nbrs.size();
  const std::size_t m = nbrs.size();
  std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const bool e = (config[nbrs[a]] - config[nbrs[b]]).norm() < t;
      adj[a][b] = adj[b][a] = e;
    }
  }
  std::vector<std::size_t> chosen;
  return count_cliques(adj, chosen, 0, k - 1);
}

std::size_t clique_count_at(const PointConfig& config, const Point& center, int k, double t) {
  return clique_count_at_index(config, require_index(config, center), k, t);
}

}  // namespace lowtail
