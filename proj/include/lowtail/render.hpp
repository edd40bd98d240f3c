#pragma once

#include <string>

#include "lowtail/geometry.hpp"
#include "lowtail/graphs.hpp"
#include "lowtail/score_spec.hpp"

namespace lowtail {

/// Edges drawn for a score: pairs closer than t for clique and RGG scores,
/// the k-NN or relative neighborhood graph otherwise; none for cell scores.
Graph display_graph(const ScoreSpec& spec, const PointConfig& config);

/// SVG of the points of `config` inside `frame` with the edges between
/// them, the frame border and a title line. Output bytes depend only on the
/// arguments.
std::string render_svg(const PointConfig& config, const BoxWindow& frame, const Graph& edges,
                       const std::string& title, int pixels = 600);

}  // namespace lowtail
