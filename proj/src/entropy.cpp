#include "lowtail/entropy.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "lowtail/error.hpp"
#include "lowtail/geometry.hpp"
#include "lowtail/parallel.hpp"
#include "lowtail/scores.hpp"

namespace lowtail {

double h_poisson(double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw ParameterError("lambda must be positive");
  return lambda * std::log(lambda) - lambda + 1;
}

namespace {

struct TrialSum {
  double value = 0;
  std::size_t points = 0;
  std::size_t flagged = 0;
};

// Scores a trial sampled at intensity `reference` and thinned to `lambda`;
// with reference == lambda no thinning happens.
TrialSum palm_trial(const ScoreSpec& spec, double lambda, double reference, double margin,
                    const PalmOptions& opt, RngStream rng) {
  const BoxWindow scoring(opt.window_side, opt.dimension);
  PointConfig cfg = sample_poisson(reference, scoring.grown(margin), rng.split(0));
  if (lambda < reference) cfg = thin(cfg, lambda / reference, rng.split(1));
  const ScoredConfig sc = score_all(spec, cfg, scoring);
  TrialSum t;
  for (double v : sc.scores) t.value += v;
  t.points = sc.scores.size();
  t.flagged = sc.flagged();
  return t;
}

PalmEstimate palm_estimate(const ScoreSpec& spec, double lambda, double reference, double margin,
                           std::size_t trials, RngStream rng, const PalmOptions& opt) {
  if (!(lambda > 0)) throw ParameterError("lambda must be positive");
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (!(margin >= 0)) throw ParameterError("margin must be nonnegative");
  if (!(opt.window_side > 0)) throw ParameterError("window side must be positive");
  spec.validate();
  const auto sums = parallel_map(trials, opt.workers, [&](std::size_t t) {
    return palm_trial(spec, lambda, reference, margin, opt, rng.split(t));
  });
  const double volume = std::pow(opt.window_side, opt.dimension);
  PalmEstimate est;
  est.trials = trials;
  double total = 0;
  std::vector<double> per_trial;
  per_trial.reserve(trials);
  for (const TrialSum& s : sums) {
    est.evaluated_points += s.points;
    est.flagged_points += s.flagged;
    total += s.value;
    per_trial.push_back(s.value / volume);
  }
  if (est.evaluated_points > 0 &&
      static_cast<double>(est.flagged_points) > 1e-3 * static_cast<double>(est.evaluated_points)) {
    throw UnstabilizedError("more than 0.1% of scored points are flagged (" +
                            std::to_string(est.flagged_points) + " of " +
                            std::to_string(est.evaluated_points) + "); increase the margin");
  }
  if (opt.normalized) {
    // Ratio estimator sum(scores) / sum(points) with a delta-method error.
    const double n_total = static_cast<double>(est.evaluated_points);
    est.mean = n_total > 0 ? total / n_total : 0;
    double var = 0;
    const double n_bar = n_total / static_cast<double>(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      const double r = sums[t].value - est.mean * static_cast<double>(sums[t].points);
      var += r * r;
    }
    est.std_error = (trials > 1 && n_bar > 0)
                        ? std::sqrt(var / static_cast<double>(trials - 1) / static_cast<double>(trials)) / n_bar
                        : 0;
    return est;
  }
  est.mean = total / volume / static_cast<double>(trials);
  double ss = 0;
  for (double v : per_trial) ss += (v - est.mean) * (v - est.mean);
  est.std_error = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials)) : 0;
  return est;
}

}  // namespace

PalmEstimate palm_mean_mc(const ScoreSpec& spec, double lambda, double margin, std::size_t trials,
                          RngStream rng, const PalmOptions& options) {
  return palm_estimate(spec, lambda, lambda, margin, trials, rng, options);
}

EntropyBound rate_upper_bound(const ScoreSpec& spec, double a, double lo, double hi, std::size_t trials,
                              RngStream rng, const RateBoundOptions& options) {
  if (!(a > 0)) throw ParameterError("level a must be positive");
  if (!(lo > 0 && hi > lo)) throw ParameterError("lambda bracket must satisfy 0 < lo < hi");
  const auto m = [&](double lambda) {
    return palm_estimate(spec, lambda, hi, options.margin, trials, rng, options.palm);
  };

  EntropyBound out;
  out.a = a;
  out.trials = trials;

  const PalmEstimate at_lo = m(lo);
  if (!(at_lo.mean < a)) {
    throw BracketError("m(lo) = " + std::to_string(at_lo.mean) + " is not below a = " + std::to_string(a));
  }
  if (hi >= 1 && lo <= 1) {
    const PalmEstimate at_one = m(1.0);
    if (at_one.mean < a) {
      out.lambda_star = 1;
      out.palm_mean_at_star = at_one.mean;
      out.mc_error = at_one.std_error;
      out.bound = 0;
      out.method = "typical";
      return out;
    }
  }
  const PalmEstimate at_hi = m(hi);
  if (!(at_hi.mean > a)) {
    throw BracketError("m(hi) = " + std::to_string(at_hi.mean) + " is not above a = " + std::to_string(a));
  }

  if (spec.is_increasing()) {
    double l = lo, h = hi;
    PalmEstimate ml = at_lo, mh = at_hi;
    double mid = 0;
    PalmEstimate mm;
    for (;;) {
      mid = (l + h) / 2;
      mm = m(mid);
      if (std::abs(mm.mean - a) < mm.std_error || h - l < 1e-3) break;
      if (mm.mean < a) {
        l = mid;
        ml = mm;
      } else {
        h = mid;
        mh = mm;
      }
    }
    // Interpolate within the final bracket and propagate the Monte Carlo
    // error through the local slope.
    const double slope = (mh.mean - ml.mean) / (h - l);
    double star = mid;
    if (slope > 0) star = std::clamp(mid + (a - mm.mean) / slope, l, h);
    out.lambda_star = std::min(star, 1.0);
    out.palm_mean_at_star = mm.mean + (slope > 0 ? slope * (star - mid) : 0);
    out.mc_error = mm.std_error;
    out.bound = h_poisson(out.lambda_star);
    const double lambda_err = slope > 0 ? mm.std_error / slope : (h - l);
    out.bound_error = std::abs(std::log(out.lambda_star)) * lambda_err;
    out.method = "bisection";
    return out;
  }

  // Not known to be monotone: scan a grid and keep the feasible intensity of
  // least entropy.
  const int g = std::max(options.grid_points, 3);
  double best_h = std::numeric_limits<double>::infinity();
  for (int s = 0; s < g; ++s) {
    const double lambda = lo + (hi - lo) * s / (g - 1);
    const PalmEstimate e = m(lambda);
    if (e.mean < a && h_poisson(lambda) < best_h) {
      best_h = h_poisson(lambda);
      out.lambda_star = lambda;
      out.palm_mean_at_star = e.mean;
      out.mc_error = e.std_error;
    }
  }
  out.bound = best_h;
  out.bound_error = std::abs(std::log(out.lambda_star)) * (hi - lo) / (g - 1);
  out.method = "grid";
  return out;
}

}  // namespace lowtail
