#pragma once

#include "json.hpp"
#include "lowtail/entropy.hpp"
#include "lowtail/geometry.hpp"
#include "lowtail/graphs.hpp"
#include "lowtail/lemmas.hpp"
#include "lowtail/tails.hpp"
#include "lowtail/voronoi.hpp"

namespace lowtail {

// JSON forms used by the command-line tool. Non-finite numbers become null.

void to_json(nlohmann::json& j, const Point& p);
void to_json(nlohmann::json& j, const BoxWindow& w);
/// {"dimension", "window": {"side", "center"}, "points": [[x, y], ...]}
void to_json(nlohmann::json& j, const PointConfig& c);
/// {"n", "edges": [[i, j], ...]}
void to_json(nlohmann::json& j, const Graph& g);
/// {"vertices": [[x, y], ...], "bounded"}
void to_json(nlohmann::json& j, const ConvexPolygon& p);
void to_json(nlohmann::json& j, const TailEstimate& e);
void to_json(nlohmann::json& j, const ConditionedSample& s);
void to_json(nlohmann::json& j, const PalmEstimate& e);
void to_json(nlohmann::json& j, const EntropyBound& b);
void to_json(nlohmann::json& j, const LemmaReport& r);

Point point_from_json(const nlohmann::json& j);
/// Validates like the PointConfig constructor.
PointConfig config_from_json(const nlohmann::json& j);

/// Real number or null for non-finite values.
nlohmann::json finite_or_null(double v);

/// CSV header and row of a tail sweep.
std::string tail_csv_header();
std::string tail_csv_row(const TailEstimate& e);

}  // namespace lowtail
