#pragma once

#include <cstddef>
#include <string>

#include "lowtail/rng.hpp"
#include "lowtail/score_spec.hpp"

namespace lowtail {

/// Specific relative entropy of Poisson(lambda) against Poisson(1):
/// lambda log lambda - lambda + 1.
double h_poisson(double lambda);

struct PalmOptions {
  int dimension = 2;
  /// Side of the scoring cube. The per-volume mean does not depend on it;
  /// larger cubes only reduce the variance per trial.
  double window_side = 10;
  /// Divide by the number of scored points instead of the volume, giving
  /// the probability-normalized Palm mean (Campbell mean / lambda).
  bool normalized = false;
  int workers = 1;
};

struct PalmEstimate {
  double mean = 0;
  double std_error = 0;
  std::size_t trials = 0;
  std::size_t evaluated_points = 0;
  std::size_t flagged_points = 0;
};

/// Monte Carlo estimate of the per-unit-volume Campbell mean
/// E[sum over x in X ∩ Q of xi(X - x)] / |Q| at intensity lambda, sampling in
/// Q grown by `margin` on every side. Throws UnstabilizedError if more than
/// 0.1% of the scored points are flagged.
PalmEstimate palm_mean_mc(const ScoreSpec& spec, double lambda, double margin, std::size_t trials,
                          RngStream rng, const PalmOptions& options = {});

struct EntropyBound {
  double a = 0;
  double lambda_star = 0;
  double palm_mean_at_star = 0;
  double bound = 0;
  double mc_error = 0;
  double bound_error = 0;
  std::size_t trials = 0;
  /// "bisection", "typical" (lambda = 1 already feasible) or "grid".
  std::string method;
};

struct RateBoundOptions {
  double margin = 3;
  PalmOptions palm;
  /// Grid size for the scan used when estimates are not monotone.
  int grid_points = 41;
};

/// Upper bound on inf{h(Q) : Q^o[xi] < a} over homogeneous Poisson Q.
///
/// All intensities in the bracket are coupled: each trial samples at
/// intensity `hi` and thins, so estimates of increasing scores are monotone
/// in lambda. Bisection locates m(lambda) = a; if lambda = 1 is feasible the
/// bound is 0. Throws BracketError unless m(lo) < a.
EntropyBound rate_upper_bound(const ScoreSpec& spec, double a, double lo, double hi,
                              std::size_t trials, RngStream rng,
                              const RateBoundOptions& options = {});

}  // namespace lowtail
