#include "rislab/benchmark.hpp"
#include "rislab/bvcurve.hpp"
#include "rislab/random.hpp"

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

Vec scalar(double x) { return vec({x}); }

// step 0 -> 1 at t = 0.5 on [0,1]
BvCurve step_curve() {
  BvCurve c;
  c.T = 1.0;
  c.pieces.push_back(AcTrajectory::from_times({0.0, 0.5}, {scalar(0.0), scalar(0.0)}));
  c.pieces.push_back(AcTrajectory::from_times({0.5, 1.0}, {scalar(1.0), scalar(1.0)}));
  c.jumps.push_back({0.5, scalar(0.0), scalar(0.0), scalar(1.0), std::nullopt, std::nullopt});
  return c;
}

BvCurve sampled_curve(double (*f)(double), double T, int nodes) {
  std::vector<double> t;
  std::vector<Vec> u;
  for (int k = 0; k < nodes; ++k) {
    t.push_back(T * k / (nodes - 1));
    u.push_back(scalar(f(t.back())));
  }
  BvCurve c = BvCurve::from_trajectory(AcTrajectory::from_times(t, u));
  c.T = T;
  return c;
}

// zero energy in d dimensions
Energy flat(int d) { return Energy::quadratic(d, 0.0, 2.0, 5.0); }

ContactPotential stochastic(double A, int d) { return {ContactFamily::Stochastic, A, d}; }

}  // namespace

TEST(BvCurve, VarPsi0Step) {
  EXPECT_DOUBLE_EQ(var_psi0(step_curve(), 2.0, 0.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(var_psi0(step_curve(), 2.0, 0.0, 0.4), 0.0);
  // half-jumps at the boundary: u(0.5) = u(0.5-) so only the right half counts at a = 0.5
  EXPECT_DOUBLE_EQ(var_psi0(step_curve(), 2.0, 0.5, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(var_psi0(step_curve(), 2.0, 0.0, 0.5), 0.0);
  EXPECT_THROW(var_psi0(step_curve(), 2.0, -0.1, 1.0), DomainError);
}

TEST(BvCurve, VarPsi0Monotone) {
  const BvCurve c = sampled_curve([](double t) { return t * t; }, 1.0, 101);
  EXPECT_NEAR(var_psi0(c, 0.7, 0.2, 0.9), 0.7 * (0.81 - 0.04), 1e-12);
}

TEST(BvCurve, VarPsi0PartitionOracle) {
  const BvCurve c = sampled_curve([](double t) { return std::sin(6.0 * t) + 0.3 * t; }, 1.0, 2001);
  const double A = 1.3;
  const double exact = var_psi0(c, A, 0.0, 1.0);
  double prev = 0.0;
  for (int k = 4; k <= 16; k += 2) {
    const int m = 1 << k;
    double sum = 0.0;
    for (int j = 1; j <= m; ++j) {
      sum += A * std::abs(c.value_at(static_cast<double>(j) / m)[0] - c.value_at(static_cast<double>(j - 1) / m)[0]);
    }
    EXPECT_GE(sum, prev - 1e-12);
    EXPECT_LE(sum, exact + 1e-12);
    prev = sum;
  }
  EXPECT_NEAR(prev, exact, 1e-4);
}

TEST(BvCurve, VarPsi0Additive) {
  const BvCurve c = sampled_curve([](double t) { return std::cos(5.0 * t); }, 1.0, 501);
  for (double m : {0.1, 0.33, 0.5, 0.871}) {
    EXPECT_NEAR(var_psi0(c, 0.5, 0.0, m) + var_psi0(c, 0.5, m, 1.0), var_psi0(c, 0.5, 0.0, 1.0), 1e-12);
  }
}

TEST(BvCurve, JumpCostFlatIsPsi0) {
  const auto r1 = jump_cost(stochastic(0.8, 1), flat(1), 0.3, scalar(-0.5), scalar(1.0));
  EXPECT_NEAR(r1.cost, 0.8 * 1.5, 1e-12);
  EXPECT_TRUE(r1.certified);
  const auto r2 = jump_cost(stochastic(0.8, 2), flat(2), 0.3, vec({0.0, 0.0}), vec({1.0, -2.0}));
  EXPECT_NEAR(r2.cost, 0.8 * 3.0, 1e-9);
  EXPECT_TRUE(r2.certified);
}

TEST(BvCurve, JumpCostConstantForce) {
  // DE = -2 everywhere: cost = int_0^1 max(1, 2) = 2
  const Energy E = Energy::loaded_quadratic(0.0, {Loading::polynomial({2.0})}, 1.0, 5.0);
  EXPECT_NEAR(jump_cost(stochastic(1.0, 1), E, 0.5, scalar(0.0), scalar(1.0)).cost, 2.0, 1e-10);
}

TEST(BvCurve, JumpCostBenchmarkQuadrature) {
  // independent oracle: composite midpoint rule of max(A, |x^3 - x - t|)
  const Energy E = benchmark::energy();
  const double A = benchmark::kA, ts = benchmark::jump_time(A);
  const double a = benchmark::fold_state(), b = benchmark::right_root(ts - A);
  double oracle = 0.0;
  const int m = 200000;
  for (int k = 0; k < m; ++k) {
    const double x = a + (b - a) * (k + 0.5) / m;
    oracle += std::max(A, std::abs(x * x * x - x - ts)) * (b - a) / m;
  }
  EXPECT_NEAR(jump_cost(stochastic(A, 1), E, ts, scalar(a), scalar(b)).cost, oracle, 1e-7);
  // the energy drop along a monotone optimal path equals the cost
  const double drop = energy_eval(E, ts, scalar(a)) - energy_eval(E, ts, scalar(b));
  EXPECT_NEAR(oracle, drop, 1e-7);
}

TEST(BvCurve, JumpCostLowerBound) {
  CounterRng rng(51, 0);
  const Energy E1 = Energy::double_well(1, 1.0, 3.0);
  const Energy E2 = Energy::double_well(2, 1.0, 3.0);
  JumpCostOptions opts;
  opts.nodes = 16;
  opts.restarts = 3;
  for (int k = 0; k < 40; ++k) {
    const double A = rng.uniform(0.2, 1.0);
    const double t = rng.uniform(0, 1);
    const Vec a1 = scalar(rng.uniform(-1.5, 1.5)), b1 = scalar(rng.uniform(-1.5, 1.5));
    EXPECT_GE(jump_cost(stochastic(A, 1), E1, t, a1, b1).cost, A * norm1(b1 - a1) - 1e-10);
    if (k % 4 == 0) {
      const Vec a2 = vec({rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)});
      const Vec b2 = vec({rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)});
      const double lower = std::max(A * norm1(b2 - a2), energy_eval(E2, t, a2) - energy_eval(E2, t, b2));
      const auto r = jump_cost(stochastic(A, 2), E2, t, a2, b2, opts);
      EXPECT_GE(r.cost, lower - 1e-8);
      EXPECT_EQ(r.restart_costs.size(), 3u);
      EXPECT_EQ(r.path.nodes.front(), a2);
      EXPECT_EQ(r.path.nodes.back(), b2);
    }
  }
}

TEST(BvCurve, JumpCostSeparable2dMatchesQuadrature) {
  // a separable energy with one active coordinate reduces to the 1-d cost
  const Energy E = Energy::double_well(2, 1.0, 3.0);
  const double A = 0.5, t = 0.3;
  const auto r1 = jump_cost(stochastic(A, 1), Energy::double_well(1, 1.0, 3.0), t, scalar(-1.2), scalar(1.1));
  const auto r2 = jump_cost(stochastic(A, 2), E, t, vec({-1.2, 0.0}), vec({1.1, 0.0}));
  // segment-wise Simpson is only O(h^2) across the kinks of max(A, |DE|)
  EXPECT_NEAR(r2.cost, r1.cost, 5e-3);
}

TEST(BvCurve, JumpVariation) {
  const BvCurve c = step_curve();
  const Energy E = flat(1);
  EXPECT_EQ(jump_variation(stochastic(1.0, 1), E, c, 0.0, 0.4).value, 0.0);
  EXPECT_NEAR(jump_variation(stochastic(1.5, 1), E, c, 0.0, 1.0).value, 1.5, 1e-12);

  // jump with an intermediate point
  BvCurve d = c;
  d.jumps[0].point = scalar(2.0);
  EXPECT_NEAR(jump_variation(stochastic(1.0, 1), E, d, 0.0, 1.0).value, 2.0 + 1.0, 1e-12);
  // only u(a) -> u(a+) at the left boundary
  EXPECT_NEAR(jump_variation(stochastic(1.0, 1), E, d, 0.5, 1.0).value, 1.0, 1e-12);
  EXPECT_NEAR(jump_variation(stochastic(1.0, 1), E, d, 0.0, 0.5).value, 2.0, 1e-12);
}

TEST(BvCurve, PseudoVariationDominatesVarPsi0) {
  const BvCurve ref = benchmark::reference_curve();
  const Energy E = benchmark::energy();
  const double A = benchmark::kA;
  for (auto [a, b] : {std::pair{0.0, 1.2}, std::pair{0.0, 0.8}, std::pair{0.9, 1.2}, std::pair{0.3, 0.9}}) {
    EXPECT_GE(pseudo_total_variation(A, stochastic(A, 1), E, ref, a, b).value, var_psi0(ref, A, a, b) - 1e-12);
  }
  // flat energy: costs reduce to Psi0
  const BvCurve c = step_curve();
  EXPECT_NEAR(pseudo_total_variation(0.7, stochastic(0.7, 1), flat(1), c, 0.0, 1.0).value, var_psi0(c, 0.7, 0.0, 1.0),
              1e-12);
}

TEST(BvCurve, FunctionalJnPositivity) {
  const Energy Q = Energy::quadratic(1, 1.0, 1.0, 5.0);
  const auto psi = DissipationPotential::cosh(0.5, 5, 1);
  EXPECT_NEAR(functional_J_n(psi, Q, AcTrajectory::from_times({0.0, 0.5, 1.0}, {scalar(0), scalar(0), scalar(0)})), 0.0,
              1e-15);
  EXPECT_GT(functional_J_n(psi, Q, AcTrajectory::from_times({0.0, 0.5, 1.0}, {scalar(0), scalar(0.4), scalar(-0.2)})),
            0.01);
  // one-homogeneous conjugate outside K* is infinite
  const auto psi0 = DissipationPotential::one_homogeneous(0.5, 1);
  EXPECT_EQ(functional_J_n(psi0, Q, AcTrajectory::from_times({0.0, 1.0}, {scalar(1.0), scalar(1.0)})), kInf);
}

TEST(BvCurve, FunctionalJLimit) {
  const Energy Q = Energy::quadratic(1, 1.0, 1.0, 5.0);
  const BvCurve rest = BvCurve::from_trajectory(AcTrajectory::from_times({0.0, 1.0}, {scalar(0.0), scalar(0.0)}));
  EXPECT_NEAR(functional_J_limit(0.5, stochastic(0.5, 1), Q, rest), 0.0, 1e-15);

  const Energy E = benchmark::energy();
  const double A = benchmark::kA;
  const BvCurve ref = benchmark::reference_curve();
  EXPECT_LE(std::abs(functional_J_limit(A, stochastic(A, 1), E, ref)), 1e-3);

  // staying at u0 = -1 violates stability once t > A
  const BvCurve stuck =
      BvCurve::from_trajectory(AcTrajectory::from_times({0.0, 0.6, 1.2}, {scalar(-1.0), scalar(-1.0), scalar(-1.0)}));
  EXPECT_EQ(functional_J_limit(A, stochastic(A, 1), E, stuck), kInf);
}

TEST(BvCurve, CheckBvSolution) {
  const Energy E = benchmark::energy();
  const double A = benchmark::kA;
  const auto p = stochastic(A, 1);
  const BvCheckReport good = check_bv_solution(A, p, E, benchmark::reference_curve(), 1e-2);
  EXPECT_TRUE(good.pass);
  EXPECT_LE(good.stability_residual, 1e-9);
  EXPECT_LE(good.energy_residual, 1e-5);

  const BvCheckReport bad = check_bv_solution(A, p, E, benchmark::reference_curve(A, benchmark::kT, 400, 0.1), 1e-2);
  EXPECT_FALSE(bad.pass);
  EXPECT_GT(bad.energy_residual, 1e-2);

  const Energy Q = Energy::quadratic(1, 1.0, 1.0, 5.0);
  const BvCurve rest = BvCurve::from_trajectory(AcTrajectory::from_times({0.0, 1.0}, {scalar(0.0), scalar(0.0)}));
  const BvCheckReport r = check_bv_solution(0.5, p, Q, rest, 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.energy_residual, 0.0);
}

TEST(BvCurve, NullMinimizerEquivalence) {
  // J_limit ~ 0 exactly when the check passes, on good and perturbed curves
  const Energy E = benchmark::energy();
  const double A = benchmark::kA;
  const auto p = stochastic(A, 1);
  const double tol = 1e-3;
  for (double shift : {0.0, 0.02, 0.1, -0.05}) {
    const BvCurve c = benchmark::reference_curve(A, benchmark::kT, 400, shift);
    const double j = functional_J_limit(A, p, E, c);
    const bool pass = check_bv_solution(A, p, E, c, tol).pass;
    EXPECT_EQ(std::abs(j) <= tol, pass) << "shift " << shift << " J " << j;
  }
}

TEST(BvCurve, OptimalTransition) {
  const Energy E = benchmark::energy();
  const double A = benchmark::kA, ts = benchmark::jump_time(A);
  const auto p = stochastic(A, 1);
  const TransitionPath jump =
      TransitionPath::straight(ts, scalar(benchmark::fold_state()), scalar(benchmark::right_root(ts - A)), 400);
  const TransitionReport rep = check_optimal_transition(p, E, jump, 1e-4);
  EXPECT_TRUE(rep.contact_ok);
  EXPECT_TRUE(rep.balance_ok) << rep.energy_drop << " vs " << rep.cost;

  // strictly inside K*: contact fails
  const Energy Q = Energy::quadratic(1, 1.0, 1.0, 5.0);
  const TransitionReport off = check_optimal_transition(p, Q, TransitionPath::straight(0.0, scalar(-0.1), scalar(0.1), 8), 1e-4);
  EXPECT_FALSE(off.contact_ok);
  EXPECT_FALSE(off.pass);

  const TransitionReport empty = check_optimal_transition(p, Q, TransitionPath{0.0, {scalar(0.2)}}, 1e-4);
  EXPECT_TRUE(empty.pass);
}
