#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lowtail/geometry.hpp"
#include "lowtail/score_spec.hpp"

namespace lowtail {

/// Score of `center` (a point of config) in the configuration recentred at
/// it. Throws UnstabilizedError when a k-NN radius is infinite and no
/// truncation bounds the range, UnboundedCellError for open Voronoi cells.
double evaluate_score(const ScoreSpec& spec, const PointConfig& config, const Point& center);
double evaluate_score_at(const ScoreSpec& spec, const PointConfig& config, std::size_t i);

/// Scores of several points of one configuration; same values as
/// evaluate_score_at, with work shared between points.
std::vector<double> score_points(const ScoreSpec& spec, const PointConfig& config,
                                 std::span<const std::size_t> indices);

/// Radius of the ball about config[i] that determines the score; +inf when
/// unknown. Bounded-range scores return their range.
double score_radius_at(const ScoreSpec& spec, const PointConfig& config, std::size_t i);

/// Scores of the points of `config` inside `scoring_window`.
struct ScoredConfig {
  PointConfig config;
  BoxWindow scoring_window;
  /// Indices into config, ascending.
  std::vector<std::size_t> indices;
  std::vector<double> scores;
  /// Nonzero when the score may differ from the infinite-volume value:
  /// its radius reaches the sampling-window boundary, or evaluation failed
  /// (the score is then recorded as 0).
  std::vector<char> flags;
  std::size_t errors = 0;

  std::size_t flagged() const;
};

ScoredConfig score_all(const ScoreSpec& spec, const PointConfig& config,
                       const BoxWindow& scoring_window);

/// Sum of scores divided by scoring_window.side^d.
double h_n(const ScoredConfig& scored);

}  // namespace lowtail
