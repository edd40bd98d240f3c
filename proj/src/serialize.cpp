#include "lowtail/serialize.hpp"

#include <charconv>
#include <cmath>

#include "lowtail/error.hpp"

namespace lowtail {

using nlohmann::json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

namespace {

json point_json(const Point& p) {
  json j = json::array();
  for (Eigen::Index a = 0; a < p.size(); ++a) j.push_back(p[a]);
  return j;
}

}  // namespace

void to_json(json& j, const Point& p) { j = point_json(p); }

void to_json(json& j, const BoxWindow& w) {
  j = json{{"side", w.side()}, {"center", point_json(w.center())}};
}

void to_json(json& j, const PointConfig& c) {
  json pts = json::array();
  for (const Point& p : c.points()) pts.push_back(point_json(p));
  j = json{{"dimension", c.dimension()}, {"window", json(c.window())}, {"points", std::move(pts)}};
}

void to_json(json& j, const Graph& g) {
  json edges = json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  j = json{{"n", g.n_vertices}, {"edges", std::move(edges)}};
}

void to_json(json& j, const ConvexPolygon& p) {
  json vs = json::array();
  for (const auto& v : p.vertices) vs.push_back({v.x(), v.y()});
  j = json{{"vertices", std::move(vs)}, {"bounded", p.bounded}};
}

void to_json(json& j, const TailEstimate& e) {
  j = json{{"spec", to_string(e.spec)},
           {"n", e.n},
           {"a", e.a},
           {"margin", e.margin},
           {"strict", e.strict},
           {"trials", e.trials},
           {"hits", e.hits},
           {"p_hat", e.p_hat},
           {"ci95", {e.ci_lo, e.ci_hi}},
           {"empirical_rate", e.empirical_rate ? json(*e.empirical_rate) : json(nullptr)},
           {"seed", e.seed},
           {"stream_id", e.stream_id},
           {"evaluated_points", e.evaluated_points},
           {"flagged_points", e.flagged_points},
           {"unreliable", e.unreliable}};
}

void to_json(json& j, const ConditionedSample& s) {
  j = json{{"h_value", s.h_value}, {"attempts", s.attempts}, {"config", s.config}};
}

void to_json(json& j, const PalmEstimate& e) {
  j = json{{"mean", e.mean},
           {"stderr", e.std_error},
           {"trials", e.trials},
           {"evaluated_points", e.evaluated_points},
           {"flagged_points", e.flagged_points}};
}

void to_json(json& j, const EntropyBound& b) {
  j = json{{"a", b.a},
           {"lambda_star", b.lambda_star},
           {"m", b.palm_mean_at_star},
           {"bound", finite_or_null(b.bound)},
           {"bound_error", finite_or_null(b.bound_error)},
           {"stderr", b.mc_error},
           {"trials", b.trials},
           {"method", b.method}};
}

void to_json(json& j, const LemmaReport& r) {
  j = json{{"lemma_id", r.lemma_id},   {"trials", r.trials},
           {"evaluations", r.evaluations}, {"violations", r.violations},
           {"skipped", r.skipped},     {"observed_max", r.observed_max},
           {"pass", r.pass()},         {"worst_case", r.witness}};
}

Point point_from_json(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > 3) throw ParameterError("a point is an array of 1 to 3 numbers");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t a = 0; a < j.size(); ++a) {
    if (!j[a].is_number()) throw ParameterError("point coordinates must be numbers");
    p[static_cast<Eigen::Index>(a)] = j[a].get<double>();
  }
  return p;
}

PointConfig config_from_json(const json& j) {
  try {
    const json& w = j.at("window");
    const BoxWindow window(w.at("side").get<double>(), point_from_json(w.at("center")));
    std::vector<Point> pts;
    for (const json& p : j.at("points")) pts.push_back(point_from_json(p));
    return PointConfig(window, std::move(pts));
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed configuration JSON: ") + e.what());
  }
}

namespace {

std::string shortest(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string tail_csv_header() { return "n,a,trials,hits,p_hat,ci_lo,ci_hi,rate"; }

std::string tail_csv_row(const TailEstimate& e) {
  return shortest(e.n) + "," + shortest(e.a) + "," + std::to_string(e.trials) + "," +
         std::to_string(e.hits) + "," + shortest(e.p_hat) + "," + shortest(e.ci_lo) + "," +
         shortest(e.ci_hi) + "," + (e.empirical_rate ? shortest(*e.empirical_rate) : std::string());
}

}  // namespace lowtail
