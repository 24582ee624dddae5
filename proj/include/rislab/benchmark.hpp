#pragma once

#include "rislab/energy.hpp"
#include "rislab/trajectory.hpp"

namespace rislab::benchmark {

// 1-d double well W(x) = x^4/4 - x^2/2 under the load l(t) = t.
inline constexpr double kA = 0.5;
inline constexpr double kT = 1.2;
inline constexpr double kU0 = -1.0;
inline constexpr double kBox = 3.0;

Energy energy(double T = kT, double box = kBox);

/// Fold of the left branch, u = -1/sqrt(3).
double fold_state();
/// t* = 2/(3 sqrt 3) + A
double jump_time(double A);
/// largest real root of u^3 - u = c (c >= -2/(3 sqrt 3))
double right_root(double c);

/// Rate-independent reference from u0 = -1: stuck on [0, A], then
/// u^3 - u = t - A along the left branch up to the fold, a jump at t* to
/// the right branch, and the right branch up to T. `samples` nodes per
/// branch. target_shift moves the jump target and the whole right branch
/// (for negative controls).
BvCurve reference_curve(double A = kA, double T = kT, int samples = 400, double target_shift = 0.0);

}  // namespace rislab::benchmark
