#include "lowtail/scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "lowtail/error.hpp"
#include "lowtail/graphs.hpp"
#include "lowtail/spatial_grid.hpp"
#include "lowtail/stabilization.hpp"
#include "lowtail/voronoi.hpp"

namespace lowtail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double power(double r, double alpha) { return alpha == 0 ? 1.0 : std::pow(r, alpha); }

// Half the sum of |x_j - x_i|^alpha over `nbrs`, accumulated in index order.
double half_power_sum(const PointConfig& config, std::size_t i, std::vector<std::size_t> nbrs,
                      double alpha) {
  std::sort(nbrs.begin(), nbrs.end());
  double s = 0;
  for (std::size_t j : nbrs) s += power((config[j] - config[i]).norm(), alpha);
  return s / 2;
}

double clamp_value(const ScoreSpec& spec, int dim, double v) {
  const Truncation& t = spec.truncation;
  if (t.delta_m) v = std::min(v, t.delta_m->delta * std::pow(t.delta_m->M, dim));
  if (t.cap) v = std::min(v, *t.cap);
  return v;
}

// Points of config inside the truncation's ball and cube about config[i],
// with the center at index 0.
PointConfig restricted_view(const ScoreSpec& spec, const PointConfig& config, std::size_t i) {
  const Truncation& t = spec.truncation;
  const Point& c = config[i];
  const double ball = t.range.value_or(kInf);
  const double half = t.delta_m ? t.delta_m->M / 2 : kInf;
  const double reach = std::min(ball, half * std::sqrt(static_cast<double>(config.dimension())));
  std::vector<std::pair<std::size_t, Point>> kept;
  const auto keep = [&](std::size_t idx, double dist) {
    if (idx == i || dist > ball) return;
    if ((config[idx] - c).cwiseAbs().maxCoeff() > half) return;
    kept.emplace_back(idx, config[idx]);
  };
  if (std::isfinite(reach)) {
    config.grid().for_each_within(c, reach, keep);
  } else {
    for (std::size_t j = 0; j < config.size(); ++j) keep(j, (config[j] - c).norm());
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Point> pts;
  pts.reserve(kept.size() + 1);
  pts.push_back(c);
  for (auto& kp : kept) pts.push_back(std::move(kp.second));
  return PointConfig::trusted(config.window(), std::move(pts));
}

double knn_value(const KnnPower& s, const PointConfig& config, std::size_t i, bool restricted) {
  if (config.size() <= static_cast<std::size_t>(s.k)) {
    // Every k-NN radius is infinite; both max and min conventions connect all.
    if (!restricted) throw UnstabilizedError("k-nearest-neighbor radius is infinite");
    std::vector<std::size_t> all;
    for (std::size_t j = 0; j < config.size(); ++j) {
      if (j != i) all.push_back(j);
    }
    return half_power_sum(config, i, std::move(all), s.alpha);
  }
  const std::vector<std::size_t> own = knn_set(config, i, s.k);
  double reach = kInf;
  if (config.dimension() == 2) reach = stab_radius_knn_at(config, i, cone_cover_2d(), s.k) / 2;
  std::vector<std::size_t> cand;
  if (std::isfinite(reach)) {
    config.grid().for_each_within(config[i], reach, [&](std::size_t j, double) {
      if (j != i) cand.push_back(j);
    });
  } else {
    for (std::size_t j = 0; j < config.size(); ++j) {
      if (j != i) cand.push_back(j);
    }
  }
  std::vector<std::size_t> nbrs;
  for (std::size_t j : cand) {
    const bool in_own = std::find(own.begin(), own.end(), j) != own.end();
    if (s.mode == KnnMode::undirected && in_own) {
      nbrs.push_back(j);
      continue;
    }
    if (s.mode == KnnMode::bidirectional && !in_own) continue;
    const auto theirs = knn_set(config, j, s.k);
    if (std::find(theirs.begin(), theirs.end(), i) != theirs.end()) nbrs.push_back(j);
  }
  return half_power_sum(config, i, std::move(nbrs), s.alpha);
}

double voronoi_value(const VoronoiIntrinsic& s, const PointConfig& config, std::size_t i,
                     std::optional<double> radius = std::nullopt) {
  const double r = radius ? *radius : stab_radius_voronoi_at(config, i);
  const double clip = std::isfinite(r) && r > 0 ? r : 2 * config.window().diameter();
  return intrinsic_volumes_2d(voronoi_cell_at(config, i, clip))[static_cast<std::size_t>(s.j)];
}

double base_value(const ScoreKind& kind, const PointConfig& config, std::size_t i, bool restricted) {
  return std::visit(
      overloaded{
          [&](const CliqueCount& s) {
            return static_cast<double>(clique_count_at_index(config, i, s.k, s.t)) / s.k;
          },
          [&](const PowerEdgeRGG& s) {
            std::vector<std::size_t> nbrs;
            config.grid().for_each_within(config[i], s.t, [&](std::size_t j, double dist) {
              if (j != i && dist < s.t) nbrs.push_back(j);
            });
            return half_power_sum(config, i, std::move(nbrs), s.alpha);
          },
          [&](const KnnPower& s) { return knn_value(s, config, i, restricted); },
          [&](const RngPower& s) { return half_power_sum(config, i, rng_neighbors(config, i), s.alpha); },
          [&](const VoronoiIntrinsic& s) { return voronoi_value(s, config, i); },
          [&](const ZeroScore&) { return 0.0; },
      },
      kind);
}

// Untruncated k-NN scores sharing one pass over all neighbor sets.
std::vector<double> knn_batch(const KnnPower& s, const PointConfig& config,
                              std::span<const std::size_t> indices) {
  if (config.size() <= static_cast<std::size_t>(s.k)) {
    throw UnstabilizedError("k-nearest-neighbor radius is infinite");
  }
  const auto sets = knn_sets(config, s.k);
  std::vector<std::vector<std::size_t>> reverse(config.size());
  for (std::size_t j = 0; j < sets.size(); ++j) {
    for (std::size_t m : sets[j]) reverse[m].push_back(j);
  }
  std::vector<double> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    std::vector<std::size_t> nbrs;
    if (s.mode == KnnMode::undirected) {
      nbrs = sets[i];
      nbrs.insert(nbrs.end(), reverse[i].begin(), reverse[i].end());
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    } else {
      for (std::size_t j : sets[i]) {
        if (std::find(reverse[i].begin(), reverse[i].end(), j) != reverse[i].end()) nbrs.push_back(j);
      }
    }
    out.push_back(half_power_sum(config, i, std::move(nbrs), s.alpha));
  }
  return out;
}

}  // namespace

double evaluate_score_at(const ScoreSpec& spec, const PointConfig& config, std::size_t i) {
  if (i >= config.size()) throw ParameterError("point index out of range");
  if (std::holds_alternative<VoronoiIntrinsic>(spec.kind) && config.dimension() != 2) {
    throw ParameterError("Voronoi scores are implemented for d = 2 only");
  }
  double v;
  if (spec.truncation.restricts()) {
    v = base_value(spec.kind, restricted_view(spec, config, i), 0, true);
  } else {
    v = base_value(spec.kind, config, i, false);
  }
  return clamp_value(spec, config.dimension(), v);
}

double evaluate_score(const ScoreSpec& spec, const PointConfig& config, const Point& center) {
  return evaluate_score_at(spec, config, require_index(config, center));
}

std::vector<double> score_points(const ScoreSpec& spec, const PointConfig& config,
                                 std::span<const std::size_t> indices) {
  if (const auto* knn = std::get_if<KnnPower>(&spec.kind); knn && !spec.truncation.restricts()) {
    for (std::size_t i : indices) {
      if (i >= config.size()) throw ParameterError("point index out of range");
    }
    std::vector<double> out = knn_batch(*knn, config, indices);
    for (double& v : out) v = clamp_value(spec, config.dimension(), v);
    return out;
  }
  std::vector<double> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(evaluate_score_at(spec, config, i));
  return out;
}

double score_radius_at(const ScoreSpec& spec, const PointConfig& config, std::size_t i) {
  double r = std::visit(
      overloaded{
          [](const CliqueCount& s) { return s.t; },
          [](const PowerEdgeRGG& s) { return s.t; },
          [&](const KnnPower& s) {
            return config.dimension() == 2 ? stab_radius_knn_at(config, i, cone_cover_2d(), s.k) : kInf;
          },
          [&](const RngPower&) { return config.dimension() == 2 ? stab_radius_voronoi_at(config, i) : kInf; },
          [&](const VoronoiIntrinsic&) { return stab_radius_voronoi_at(config, i); },
          [](const ZeroScore&) { return 0.0; },
      },
      spec.kind);
  const Truncation& t = spec.truncation;
  if (t.range) r = std::min(r, *t.range);
  if (t.delta_m) r = std::min(r, t.delta_m->M / 2 * std::sqrt(static_cast<double>(config.dimension())));
  return r;
}

std::size_t ScoredConfig::flagged() const {
  return static_cast<std::size_t>(std::count_if(flags.begin(), flags.end(), [](char f) { return f != 0; }));
}

ScoredConfig score_all(const ScoreSpec& spec, const PointConfig& config, const BoxWindow& scoring_window) {
  if (!config.window().contains(scoring_window)) {
    throw ParameterError("scoring window must lie inside the sampling window");
  }
  ScoredConfig out{config, scoring_window, config.indices_in(scoring_window), {}, {}, 0};
  const std::size_t m = out.indices.size();
  out.scores.assign(m, 0.0);
  out.flags.assign(m, 0);

  std::vector<double> radii(m);
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t i = out.indices[s];
    radii[s] = score_radius_at(spec, config, i);
    if (radii[s] > config.window().distance_to_boundary(config[i])) out.flags[s] = 1;
  }

  const auto* knn = std::get_if<KnnPower>(&spec.kind);
  if (knn && !spec.truncation.restricts()) {
    try {
      out.scores = score_points(spec, config, out.indices);
    } catch (const UnstabilizedError&) {
      std::fill(out.flags.begin(), out.flags.end(), 1);
      out.errors = m;
    }
    return out;
  }
  const auto* vor = std::get_if<VoronoiIntrinsic>(&spec.kind);
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t i = out.indices[s];
    try {
      if (vor && spec.truncation.empty()) {
        out.scores[s] = voronoi_value(*vor, config, i, radii[s]);
      } else {
        out.scores[s] = evaluate_score_at(spec, config, i);
      }
    } catch (const UnstabilizedError&) {
      out.flags[s] = 1;
      ++out.errors;
    } catch (const UnboundedCellError&) {
      out.flags[s] = 1;
      ++out.errors;
    }
  }
  return out;
}

double h_n(const ScoredConfig& scored) {
  double s = 0;
  for (double v : scored.scores) s += v;
  return s / std::pow(scored.scoring_window.side(), scored.scoring_window.dimension());
}

}  // namespace lowtail
