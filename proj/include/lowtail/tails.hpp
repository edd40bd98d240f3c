#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lowtail/error.hpp"
#include "lowtail/geometry.hpp"
#include "lowtail/rng.hpp"
#include "lowtail/score_spec.hpp"

namespace lowtail {

/// Wilson score interval at 95%.
std::pair<double, double> wilson_interval(std::size_t hits, std::size_t trials);

struct TailEstimate {
  ScoreSpec spec;
  double n = 0;
  double a = 0;
  double margin = 0;
  bool strict = true;
  std::size_t trials = 0;
  std::size_t hits = 0;
  double p_hat = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  /// -log(p_hat) / n^d, present when hits > 0.
  std::optional<double> empirical_rate;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::size_t evaluated_points = 0;
  std::size_t flagged_points = 0;
  /// More than 0.1% of the scored points were flagged.
  bool unreliable = false;
};

struct TailOptions {
  int dimension = 2;
  int workers = 1;
  /// Draw H_n from the coupled process thin(X, 1 - eps) ∪ sprinkle(eps).
  std::optional<double> coupling_eps;
};

/// One draw of H_n on Q_n, sampled with `margin` on every side.
struct HnSample {
  double value = 0;
  std::size_t points = 0;
  std::size_t flagged = 0;
};

HnSample sample_h_n(const ScoreSpec& spec, double n, double margin, RngStream rng,
                    const TailOptions& options = {});

/// Trial t uses rng.split(t), so the estimate depends only on the inputs.
TailEstimate estimate_tail(const ScoreSpec& spec, double n, double a, double margin,
                           std::size_t trials, RngStream rng, bool strict = true,
                           const TailOptions& options = {});

/// All H_n draws of estimate_tail, in trial order.
std::vector<HnSample> sample_h_n_batch(const ScoreSpec& spec, double n, double margin,
                                       std::size_t trials, RngStream rng,
                                       const TailOptions& options = {});

struct RateCurveOptions {
  TailOptions tail;
  bool strict = true;
  /// Refuse when the pilot projects fewer hits at the largest n.
  double min_expected_hits = 10;
  /// When positive, each n gets enough trials for this many expected hits
  /// (projected by its own pilot), capped by max_trials; `trials` is then
  /// the pilot base.
  double target_hits = 0;
  std::size_t max_trials = 10'000'000;
};

/// One tail estimate per n. A pilot of 1% of the trials at the largest n
/// gates the sweep; throws InfeasibleSweepError with the projected count.
std::vector<TailEstimate> rate_curve(const ScoreSpec& spec, double a, const std::vector<double>& n_list,
                                     double margin, std::size_t trials, RngStream rng,
                                     const RateCurveOptions& options = {});

struct ConditionedSample {
  PointConfig config;
  double h_value;
  std::size_t attempts;
};

/// Raised by conditional_sample when every attempt missed; carries the
/// configuration with the lowest H_n seen.
class ExhaustionError : public Error {
 public:
  ExhaustionError(const std::string& message, ConditionedSample best)
      : Error("exhaustion", message), best_(std::move(best)) {}
  const ConditionedSample& best() const noexcept { return best_; }

 private:
  ConditionedSample best_;
};

/// Rejection sampling until H_n < a; attempt j uses rng.split(j).
ConditionedSample conditional_sample(const ScoreSpec& spec, double n, double a, double margin,
                                     std::size_t max_attempts, RngStream rng, int dimension = 2);

}  // namespace lowtail
