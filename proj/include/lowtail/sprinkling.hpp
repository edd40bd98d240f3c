#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lowtail/geometry.hpp"
#include "lowtail/rng.hpp"
#include "lowtail/score_spec.hpp"
#include "lowtail/stabilization.hpp"

namespace lowtail {

/// A unit-intensity process written as thinned base plus independent sprinkle.
struct CouplingSample {
  PointConfig base;
  PointConfig thinned;
  PointConfig sprinkle;
  PointConfig united;
  double survival;
  double sprinkle_intensity;
};

/// Thin with survival 1 - eps and add an intensity-eps Poisson sprinkle on
/// the base window. Requires 0 < eps < 1.
CouplingSample couple_eps(const PointConfig& base, double eps, RngStream rng);

/// couple_eps with eps = M^-d; M^-d must be strictly below 1.
CouplingSample couple_M(const PointConfig& base, double M, RngStream rng);

enum class DenseShape { cube, ball };

/// Points of `config` in `scoring_window` with more than b points of config
/// (themselves included) in the cube Q_r about them, or the ball B_r.
std::size_t count_b_dense(const PointConfig& config, const BoxWindow& scoring_window, double r,
                          double b, DenseShape shape = DenseShape::cube);

/// No sprinkle point in the window and no b-dense thinned point there.
bool event_E_bn(const CouplingSample& sample, const BoxWindow& scoring_window, double r, double b);

/// Every point of the union in the window has stabilization radius <= M,
/// computed in the union.
bool event_E_M_plus(const CouplingSample& sample, const BoxWindow& scoring_window, double M,
                    RadiusKind kind);

/// The cube of side 2 * window.side, padded outward to a whole number of
/// cells of side M / L, on which the regularity grid lives.
BoxWindow regularity_grid_window(const BoxWindow& window, double M, double L);

/// Does every cell of side M / L of the regularity grid hold exactly one
/// sprinkle point?
bool event_A(const PointConfig& sprinkle, const BoxWindow& window, double M, double L);

/// A sprinkle drawn conditionally on event_A: one uniform point per cell.
/// The result's window is regularity_grid_window(window, M, L).
PointConfig sample_conditioned_on_A(const BoxWindow& window, double M, double L, RngStream rng);

/// The coupling X^M on the regularity grid window with the sprinkle drawn
/// conditionally on event_A: base Poisson(1), thinned with survival
/// 1 - M^-d, plus sample_conditioned_on_A.
CouplingSample couple_M_conditioned_on_A(const BoxWindow& window, double M, double L, RngStream rng);

/// (2L)^d.
double K0(double L, int dimension);

/// For each prefix of `additions`, the number of base points in the window
/// whose score strictly increased when that addition was made.
std::vector<std::size_t> telescoping_increase_count(const ScoreSpec& spec, const PointConfig& base,
                                                    std::span<const Point> additions,
                                                    const BoxWindow& scoring_window);

}  // namespace lowtail
