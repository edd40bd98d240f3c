#include "lowtail/tails.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lowtail/parallel.hpp"
#include "lowtail/scores.hpp"
#include "lowtail/sprinkling.hpp"

namespace lowtail {

std::pair<double, double> wilson_interval(std::size_t hits, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / nt;
  const double denom = 1 + z * z / nt;
  const double center = (p + z * z / (2 * nt)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nt + z * z / (4 * nt * nt)) / denom;
  const double lo = hits == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = hits == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

namespace {

PointConfig draw_window(double n, double margin, RngStream rng, const TailOptions& opt) {
  const BoxWindow outer = BoxWindow(n, opt.dimension).grown(margin);
  PointConfig cfg = sample_poisson(1.0, outer, rng.split(0));
  if (opt.coupling_eps) cfg = couple_eps(cfg, *opt.coupling_eps, rng.split(1)).united;
  return cfg;
}

void check_common(const ScoreSpec& spec, double n, double margin) {
  spec.validate();
  if (!(n > 0)) throw ParameterError("window side n must be positive");
  if (!(margin >= 0)) throw ParameterError("margin must be nonnegative");
}

bool is_hit(double h, double a, bool strict) { return strict ? h < a : h <= a; }

}  // namespace

HnSample sample_h_n(const ScoreSpec& spec, double n, double margin, RngStream rng,
                    const TailOptions& options) {
  check_common(spec, n, margin);
  const PointConfig cfg = draw_window(n, margin, rng, options);
  const ScoredConfig sc = score_all(spec, cfg, BoxWindow(n, options.dimension));
  return {h_n(sc), sc.scores.size(), sc.flagged()};
}

std::vector<HnSample> sample_h_n_batch(const ScoreSpec& spec, double n, double margin,
                                       std::size_t trials, RngStream rng, const TailOptions& options) {
  check_common(spec, n, margin);
  return parallel_map(trials, options.workers, [&](std::size_t t) {
    return sample_h_n(spec, n, margin, rng.split(t), options);
  });
}

TailEstimate estimate_tail(const ScoreSpec& spec, double n, double a, double margin, std::size_t trials,
                           RngStream rng, bool strict, const TailOptions& options) {
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (!(a >= 0)) throw ParameterError("level a must be nonnegative");
  const auto draws = sample_h_n_batch(spec, n, margin, trials, rng, options);
  TailEstimate est;
  est.spec = spec;
  est.n = n;
  est.a = a;
  est.margin = margin;
  est.strict = strict;
  est.trials = trials;
  est.seed = rng.seed();
  est.stream_id = rng.stream_id();
  for (const HnSample& s : draws) {
    if (is_hit(s.value, a, strict)) ++est.hits;
    est.evaluated_points += s.points;
    est.flagged_points += s.flagged;
  }
  est.p_hat = static_cast<double>(est.hits) / static_cast<double>(trials);
  std::tie(est.ci_lo, est.ci_hi) = wilson_interval(est.hits, trials);
  if (est.hits > 0) est.empirical_rate = -std::log(est.p_hat) / std::pow(n, options.dimension);
  est.unreliable = static_cast<double>(est.flagged_points) > 1e-3 * static_cast<double>(est.evaluated_points);
  return est;
}

std::vector<TailEstimate> rate_curve(const ScoreSpec& spec, double a, const std::vector<double>& n_list,
                                     double margin, std::size_t trials, RngStream rng,
                                     const RateCurveOptions& options) {
  if (n_list.empty()) throw ParameterError("n_list must not be empty");
  if (trials < 1) throw ParameterError("trials must be at least 1");
  const std::size_t pilot_trials = std::max<std::size_t>(1, trials / 100);
  const auto pilot = [&](std::size_t idx) {
    return estimate_tail(spec, n_list[idx], a, margin, pilot_trials, rng.split(2 * idx + 1),
                         options.strict, options.tail);
  };
  const std::size_t largest =
      static_cast<std::size_t>(std::max_element(n_list.begin(), n_list.end()) - n_list.begin());
  const TailEstimate gate = pilot(largest);
  const double projected = gate.p_hat * static_cast<double>(trials);
  if (options.target_hits <= 0 && projected < options.min_expected_hits) {
    throw InfeasibleSweepError("pilot projects " + std::to_string(projected) + " hits at n = " +
                               std::to_string(n_list[largest]) + " (need " +
                               std::to_string(options.min_expected_hits) + ")");
  }
  if (options.target_hits > 0 && gate.hits == 0) {
    throw InfeasibleSweepError("pilot of " + std::to_string(pilot_trials) + " trials at n = " +
                               std::to_string(n_list[largest]) + " saw no hits");
  }

  std::vector<TailEstimate> out;
  out.reserve(n_list.size());
  for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
    std::size_t count = trials;
    if (options.target_hits > 0) {
      const TailEstimate p = idx == largest ? gate : pilot(idx);
      const double p_guess = std::max(p.p_hat, 1.0 / static_cast<double>(pilot_trials));
      count = static_cast<std::size_t>(std::ceil(options.target_hits / p_guess));
      count = std::clamp<std::size_t>(count, pilot_trials, options.max_trials);
      if (p_guess * static_cast<double>(count) < options.min_expected_hits) {
        throw InfeasibleSweepError("projected hits at n = " + std::to_string(n_list[idx]) +
                                   " stay below the minimum within max_trials");
      }
    }
    out.push_back(
        estimate_tail(spec, n_list[idx], a, margin, count, rng.split(2 * idx), options.strict, options.tail));
  }
  return out;
}

ConditionedSample conditional_sample(const ScoreSpec& spec, double n, double a, double margin,
                                     std::size_t max_attempts, RngStream rng, int dimension) {
  if (max_attempts < 1) throw ParameterError("max_attempts must be at least 1");
  check_common(spec, n, margin);
  TailOptions opt;
  opt.dimension = dimension;
  const BoxWindow scoring(n, dimension);
  std::optional<ConditionedSample> best;
  for (std::size_t j = 0; j < max_attempts; ++j) {
    PointConfig cfg = draw_window(n, margin, rng.split(j), opt);
    const double h = h_n(score_all(spec, cfg, scoring));
    if (h < a) return {std::move(cfg), h, j + 1};
    if (!best || h < best->h_value) best = ConditionedSample{std::move(cfg), h, j + 1};
  }
  best->attempts = max_attempts;
  throw ExhaustionError("no draw with H_n < " + std::to_string(a) + " in " + std::to_string(max_attempts) +
                            " attempts",
                        std::move(*best));
}

}  // namespace lowtail
