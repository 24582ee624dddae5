#include "rislab/benchmark.hpp"
#include "rislab/bvcurve.hpp"
#include "rislab/random.hpp"
#include "rislab/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rislab;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

double soft(double x, double a) { return std::abs(x) > a ? std::copysign(std::abs(x) - a, x) : 0.0; }

}  // namespace

TEST(Solver, CriticalPointStaysPut) {
  const Energy E = Energy::quadratic(2, 1.0, 1.0, 5.0);
  for (const auto& psi : {DissipationPotential::cosh(0.5, 10, 2), DissipationPotential::two_norm_viscous(0.5, 0.1, 2)}) {
    const AcTrajectory tr = solve_explicit(psi, E, Vec::Zero(2), 100);
    for (const Vec& u : tr.values()) EXPECT_EQ(u.norm(), 0.0);
    EXPECT_NEAR(tr.t_end(), 1.0, 1e-12);
    EXPECT_EQ(residual_inclusion(psi, E, tr), 0.0);
    EXPECT_NEAR(functional_J_n(psi, E, tr), 0.0, 1e-15);
  }
}

TEST(Solver, ExplicitRejectsNonsmoothFamilies) {
  const Energy E = benchmark::energy();
  EXPECT_THROW(solve_explicit(DissipationPotential::self_viscous(0.5, 0.1, 1), E, vec({-1.0}), 10), UnsupportedFamilyError);
  EXPECT_THROW(solve_explicit(DissipationPotential::one_homogeneous(0.5, 1), E, vec({-1.0}), 10), UnsupportedFamilyError);
}

TEST(Solver, EscapeIsReported) {
  // linear growth past the box
  const Energy E = Energy::loaded_quadratic(0.0, {Loading::polynomial({5.0})}, 1.0, 1.0);
  const auto psi = DissipationPotential::two_norm_viscous(0.5, 1.0, 1);
  try {
    solve_explicit(psi, E, vec({0.0}), 1000);
    FAIL() << "expected escape";
  } catch (const EscapeError& e) {
    // u(t) = 4.5 t crosses 1 near t = 0.222
    EXPECT_NEAR(e.time(), 1.0 / 4.5, 1e-2);
  }
}

TEST(Solver, CoshBenchmarkTransit) {
  const Energy E = benchmark::energy();
  const auto psi = DissipationPotential::cosh(benchmark::kA, 20, 1);
  const AcTrajectory tr = solve_explicit(psi, E, vec({-1.0}), 4000);
  const double ts = benchmark::jump_time(benchmark::kA);
  for (std::size_t k = 0; k + 1 < tr.nodes(); ++k) EXPECT_GE(tr.u(k + 1)[0], tr.u(k)[0] - 1e-12);
  EXPECT_NEAR(tr.value_at(0.3)[0], -1.0, 0.02);
  EXPECT_LT(tr.value_at(ts - 0.1)[0], -0.4);
  // the viscous lag past the fold is O(log(n)/n) in the load
  EXPECT_LT(tr.value_at(ts + 0.05)[0], 0.0);
  EXPECT_GT(tr.value_at(ts + 0.25)[0], 1.0);
  EXPECT_LT(residual_inclusion(psi, E, tr), 1e-8);
}

TEST(Solver, LinearThresholdClosedForm) {
  // E = -l u with l(t) = 2: u' = (2 - A)/eps above the threshold
  const Energy E = Energy::loaded_quadratic(0.0, {Loading::polynomial({2.0})}, 1.0, 10.0);
  const auto psi = DissipationPotential::two_norm_viscous(1.0, 0.5, 1);
  const AcTrajectory tr = solve_explicit(psi, E, vec({0.0}), 10000);
  EXPECT_NEAR(tr.values().back()[0], 2.0, 1e-10);
  EXPECT_LE(residual_inclusion(psi, E, tr), 1e-8);
}

TEST(Solver, ConvergenceOrder) {
  const Energy E = benchmark::energy();
  const auto psi = DissipationPotential::cosh(benchmark::kA, 10, 1);
  const Vec u0 = vec({-1.0});
  const double e1 = residual_inclusion(psi, E, solve_explicit(psi, E, u0, 200, Scheme::Euler));
  const double e2 = residual_inclusion(psi, E, solve_explicit(psi, E, u0, 400, Scheme::Euler));
  const double r1 = residual_inclusion(psi, E, solve_explicit(psi, E, u0, 200, Scheme::Rk4));
  const double r2 = residual_inclusion(psi, E, solve_explicit(psi, E, u0, 400, Scheme::Rk4));
  // the gap is quadratic in the local consistency error: order 2p
  EXPECT_NEAR(e1 / e2, 4.0, 1.0);
  EXPECT_GT(r1 / r2, 10.0);
  EXPECT_LT(r2, e2);
}

TEST(Solver, RandomTrajectoryHasPositiveGap) {
  const Energy E = benchmark::energy();
  const auto psi = DissipationPotential::cosh(0.5, 5, 1);
  CounterRng rng(43, 0);
  std::vector<double> t;
  std::vector<Vec> u;
  for (int k = 0; k <= 50; ++k) {
    t.push_back(1.2 * k / 50);
    u.push_back(vec({rng.uniform(-1, 1)}));
  }
  const AcTrajectory tr = AcTrajectory::from_times(t, u);
  EXPECT_GT(residual_inclusion(psi, E, tr), 1e-3);
  EXPECT_GT(functional_J_n(psi, E, tr), 1e-3);
}

TEST(Solver, MinimizingMovementConstantWithoutForce) {
  const Energy E = Energy::quadratic(1, 0.0, 1.0, 5.0);
  for (const auto& psi : {DissipationPotential::cosh(0.5, 5, 1), DissipationPotential::self_viscous(0.5, 0.2, 1),
                          DissipationPotential::two_norm_viscous(0.5, 0.2, 1)}) {
    const AcTrajectory tr = solve_minimizing_movement(psi, E, vec({0.7}), 20, 1e-12);
    for (const Vec& u : tr.values()) EXPECT_NEAR(u[0], 0.7, 1e-12);
  }
}

TEST(Solver, MinimizingMovementTwoNormClosedForm) {
  // E(t,u) = (k/2) u^2 - l(t) u
  const double k = 2.0, A = 0.5, eps = 0.3, T = 1.0;
  const Energy E = Energy::loaded_quadratic(k, {Loading::polynomial({0.0, 3.0})}, T, 10.0);
  const auto psi = DissipationPotential::two_norm_viscous(A, eps, 1);
  const int steps = 25;
  const double tau = T / steps;
  const AcTrajectory tr = solve_minimizing_movement(psi, E, vec({0.0}), steps, 1e-13);
  double u = 0.0;
  for (int s = 1; s <= steps; ++s) {
    const double l = 3.0 * s * tau;
    u += soft(l - k * u, A) / (eps / tau + k);
    EXPECT_NEAR(tr.u(static_cast<std::size_t>(s))[0], u, 1e-10);
  }
}

TEST(Solver, MinimizingMovementAgreesWithExplicit) {
  const Energy E = benchmark::energy();
  const auto psi = DissipationPotential::cosh(benchmark::kA, 5, 1);
  const AcTrajectory ex = solve_explicit(psi, E, vec({-1.0}), 20000);
  double prev = kInf;
  for (int steps : {100, 200, 400}) {
    const AcTrajectory mm = solve_minimizing_movement(psi, E, vec({-1.0}), steps, 1e-11);
    double worst = 0.0;
    for (std::size_t k = 0; k < mm.nodes(); ++k) worst = std::max(worst, std::abs(mm.u(k)[0] - ex.value_at(mm.t(k))[0]));
    EXPECT_LT(worst, 20.0 * 1.2 / steps);
    EXPECT_LT(worst, prev);
    prev = worst;
  }
}

TEST(Solver, MinimizingMovementCapsIterations) {
  const Energy E = benchmark::energy();
  EXPECT_THROW(solve_minimizing_movement(DissipationPotential::cosh(0.5, 5, 1), E, vec({-1.0}), 10, 1e-14, 1),
               NoConvergenceError);
  EXPECT_THROW(solve_minimizing_movement(DissipationPotential::one_homogeneous(0.5, 1), E, vec({-1.0}), 10, 1e-8),
               UnsupportedFamilyError);
}

TEST(Solver, EnergyDissipationBookkeeping) {
  const Energy E = benchmark::energy();
  const auto psi = DissipationPotential::cosh(benchmark::kA, 20, 1);
  double prev = kInf;
  for (int steps : {500, 1000, 2000}) {
    const double j = std::abs(functional_J_n(psi, E, solve_explicit(psi, E, vec({-1.0}), steps)));
    EXPECT_LT(j, 10.0 / steps);
    EXPECT_LT(j, prev);
    prev = j;
  }
}

TEST(Solver, TimeAboveThresholdShrinks) {
  const Energy E = benchmark::energy();
  const double margin = 0.05;
  double prev = kInf;
  for (int n : {10, 20, 40}) {
    const auto psi = DissipationPotential::cosh(benchmark::kA, n, 1);
    const AcTrajectory tr = solve_explicit(psi, E, vec({-1.0}), 20000);
    double above = 0.0;
    for (std::size_t k = 0; k < tr.intervals(); ++k) {
      const Vec mid = 0.5 * (tr.u(k) + tr.u(k + 1));
      if (std::abs(E.grad_unchecked(tr.t(k) + 0.5 * tr.dt(k), mid)[0]) > benchmark::kA + margin) above += tr.dt(k);
    }
    EXPECT_LT(above, prev);
    prev = above;
  }
}
