#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "lowtail/geometry.hpp"
#include "lowtail/rng.hpp"
#include "lowtail/score_spec.hpp"
#include "lowtail/stabilization.hpp"

namespace lowtail {

/// Outcome of one batch of checks of a structural property.
struct LemmaReport {
  std::string lemma_id;
  std::size_t trials = 0;
  std::size_t violations = 0;
  /// Evaluations that could not be carried out (e.g. an infinite radius).
  std::size_t skipped = 0;
  std::size_t evaluations = 0;
  /// Largest observed value of the checked statistic (|Exc|, degree, ...).
  double observed_max = 0;
  /// Replayable description of the worst violation; null when none.
  nlohmann::json witness;

  bool pass() const { return violations == 0; }
};

struct ExceptionalSet {
  /// Points y of config whose score increases when x is added, ascending.
  std::vector<std::size_t> exceptional;
  bool pass = true;
  /// For k-NN scores: exceptional ⊆ kNN(config ∪ {x}, x); for relative
  /// neighborhood scores: exceptional ⊆ RN(config ∪ {x}, x). True otherwise.
  bool contained = true;
};

/// Exc(x, config) and whether |Exc| <= bound.
ExceptionalSet check_weakly_decreasing(const ScoreSpec& spec, const PointConfig& config, const Point& x,
                                       std::size_t bound);

/// Does adding x leave every existing score at least as large?
bool check_increasing(const ScoreSpec& spec, const PointConfig& config, const Point& x);

/// Does adding x leave every existing stabilization radius no larger?
bool check_R_decreasing(RadiusKind kind, const PointConfig& config, const Point& x);

struct RBoundedRow {
  double M = 0;
  std::size_t violations = 0;
};

struct RBoundedReport {
  std::size_t samples = 0;
  std::vector<RBoundedRow> rows;
};

/// Samples Palm configurations (Poisson(1) plus the origin) and counts, for
/// each M, samples with R <= M and xi >= delta M^d at the origin.
RBoundedReport check_R_bounded(const ScoreSpec& spec, RadiusKind kind, std::size_t samples, double delta,
                               const std::vector<double>& M_list, RngStream rng, int workers = 1);

struct AngleCheck {
  bool pass = true;
  double min_angle = 0;
  std::size_t max_degree = 0;
};

/// Every pair of relative neighbors of a vertex subtends at least pi/3 - 1e-9.
AngleCheck check_rng_angles(const PointConfig& config);

/// Re-runs the check recorded in a witness; true if the violation recurs.
bool replay_witness(const nlohmann::json& witness);

struct SuiteOptions {
  std::string suite = "all";
  std::size_t trials = 1000;
  /// Checks draw Poisson(1) on Q_{n + 2 margin} and insertions in Q_n.
  double n = 10;
  double margin = 3;
  int workers = 1;
};

/// Runs the named suite: "all", "weak-decreasing", "increasing",
/// "radius", "stabilization", "angles" or "r-bounded".
std::vector<LemmaReport> run_suite(const SuiteOptions& options, RngStream rng);

/// A suite passes when no report has violations and at most 1% of the
/// evaluations of any report were skipped.
bool suite_passes(const std::vector<LemmaReport>& reports);

}  // namespace lowtail
