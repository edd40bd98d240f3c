#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lowtail/geometry.hpp"

namespace lowtail {

/// Undirected simple graph on the indices of a PointConfig.
struct Graph {
  std::size_t n_vertices = 0;
  /// Sorted pairs (i, j) with i < j, each stored once.
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  bool has_edge(std::size_t i, std::size_t j) const;
  std::size_t degree(std::size_t i) const;
  std::vector<std::vector<std::size_t>> adjacency() const;

  /// Sorts and deduplicates; drops self-loops.
  static Graph from_pairs(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> pairs);
};

enum class KnnMode { undirected, bidirectional };

/// Distance from `center` (a point of config) to its k-th nearest other
/// point; +inf when fewer than k other points exist.
double knn_radius(const PointConfig& config, const Point& center, int k);
double knn_radius_at(const PointConfig& config, std::size_t i, int k);

/// The k nearest other points of config[i], ties broken lexicographically.
std::vector<std::size_t> knn_set(const PointConfig& config, std::size_t i, int k);

/// k-nearest-neighbor sets of every point; throws InsufficientPointsError
/// when the configuration has 1..k points.
std::vector<std::vector<std::size_t>> knn_sets(const PointConfig& config, int k);

Graph knn_graph(const PointConfig& config, int k, KnnMode mode);

/// Relative neighbors of config[i]: points j whose open lune
/// B_|i-j|(i) ∩ B_|i-j|(j) holds no other point. Sorted by index.
std::vector<std::size_t> rng_neighbors(const PointConfig& config, std::size_t i);

Graph rng_graph(const PointConfig& config);

/// Number of k-subsets containing `center` with all pairwise distances < t.
std::size_t clique_count_at(const PointConfig& config, const Point& center, int k, double t);
std::size_t clique_count_at_index(const PointConfig& config, std::size_t i, int k, double t);

/// Index of `center` in config, or ParameterError.
std::size_t require_index(const PointConfig& config, const Point& center);

}  // namespace lowtail
