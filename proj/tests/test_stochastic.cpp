#include "rislab/benchmark.hpp"
#include "rislab/random.hpp"
#include "rislab/solver.hpp"
#include "rislab/stochastic.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rislab;

namespace {

Vec scalar(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

// (Psi_n(v) + Psi_n*(-DE) + v DE) n, the viscous side of the identity
double viscous_form(const Energy& E, double t, const Vec& x, const Vec& v, double A, int n) {
  const auto psi = DissipationPotential::cosh(A, n, E.dim());
  const Vec g = E.grad_unchecked(t, x);
  return n * (eval_potential(psi, v) + eval_conjugate(psi, -g) + v.dot(g));
}

}  // namespace

TEST(Stochastic, ConfigValidation) {
  const Energy E = Energy::quadratic(1, 0.0, 1.0, 5.0);
  LatticeConfig c = LatticeConfig::from_cosh(10, 0.5, 4, E, scalar(0.3), 1);
  EXPECT_NEAR(c.alpha, 0.5 * std::exp(-2.0), 1e-15);
  EXPECT_EQ(c.beta, 4.0);
  EXPECT_NO_THROW(c.validate());
  c.x0 = scalar(0.35);
  EXPECT_THROW(c.validate(), DomainError);
  c.x0 = scalar(0.3);
  c.h = 0;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(Stochastic, ZeroDriftMeanAndJumpCount) {
  const double T = 1.0, alpha = 0.5;
  const int h = 10, runs = 10000;
  for (int d : {1, 2}) {
    const Energy E = Energy::quadratic(d, 0.0, T, 5.0);
    LatticeConfig c;
    c.h = h;
    c.alpha = alpha;
    c.beta = 3.0;
    c.energy = &E;
    c.x0 = Vec::Constant(d, 0.2);
    c.seed = 11;
    const EnsembleSummary s = simulate_ensemble(c, runs, 3, 4);
    for (int i = 0; i < d; ++i) {
      const double sigma = std::sqrt(s.variance.back()[i] / runs);
      EXPECT_LE(std::abs(s.mean.back()[i] - 0.2), 3.0 * sigma);
      // per-coordinate variance of X_T is 2 h alpha T / h^2
      EXPECT_NEAR(s.variance.back()[i], 2.0 * alpha * T / h, 0.1 * 2.0 * alpha * T / h);
    }
    const double expected = 2.0 * d * h * alpha * T;
    EXPECT_LE(std::abs(s.mean_jumps - expected), 3.0 * std::sqrt(expected / runs));
    EXPECT_NEAR(s.jumps_variance, expected, 0.1 * expected);
  }
}

TEST(Stochastic, ConfiningEnergyConcentrates) {
  const Energy E = Energy::quadratic(1, 1.0, 4.0, 5.0);
  LatticeConfig c;
  c.h = 20;
  c.alpha = 0.5;
  c.beta = 4.0;
  c.energy = &E;
  c.x0 = scalar(1.5);
  c.seed = 3;
  const EnsembleSummary s = simulate_ensemble(c, 2000, 5, 4);
  EXPECT_LT(std::abs(s.mean.back()[0]), 0.05);
  EXPECT_LT(s.variance.back()[0], 0.1);
}

TEST(Stochastic, Determinism) {
  const Energy E = benchmark::energy();
  const LatticeConfig c = LatticeConfig::from_cosh(20, benchmark::kA, 5, E, scalar(-1.0), 99);
  const EventPath a = simulate_gillespie(c, 7);
  const EventPath b = simulate_gillespie(c, 7);
  EXPECT_EQ(a.t, b.t);
  EXPECT_EQ(a.sign, b.sign);
  EXPECT_NE(simulate_gillespie(c, 8).t, a.t);
  const EnsembleSummary s1 = simulate_ensemble(c, 200, 11, 1);
  const EnsembleSummary s4 = simulate_ensemble(c, 200, 11, 4);
  for (std::size_t g = 0; g < s1.grid.size(); ++g) EXPECT_EQ(s1.mean[g][0], s4.mean[g][0]);
  EXPECT_EQ(s1.mean_jumps, s4.mean_jumps);
}

TEST(Stochastic, EventPathStructure) {
  const Energy E = benchmark::energy();
  const LatticeConfig c = LatticeConfig::from_cosh(10, benchmark::kA, 5, E, scalar(-1.0), 5);
  const EventPath p = simulate_gillespie(c, 0);
  EXPECT_EQ(p.dir.front(), -1);
  for (std::size_t k = 1; k < p.t.size(); ++k) {
    EXPECT_GT(p.t[k], p.t[k - 1]);
    EXPECT_LE(p.t[k], E.horizon());
    EXPECT_NEAR(std::abs(p.x[k][0] - p.x[k - 1][0]), 0.1, 1e-12);
    EXPECT_EQ(p.x[k][0] - p.x[k - 1][0] > 0 ? 1 : -1, p.sign[k]);
  }
  const AcTrajectory tr = interpolate_event_path(p, E.horizon());
  EXPECT_NEAR(tr.t_end(), E.horizon(), 1e-15);
  EXPECT_EQ(tr.values().back(), p.x.back());
}

TEST(Stochastic, EscapeFromBox) {
  const Energy E = Energy::loaded_quadratic(0.0, {Loading::polynomial({3.0})}, 1.0, 0.5);
  const LatticeConfig c = LatticeConfig::from_cosh(10, 0.1, 5, E, scalar(0.0), 1);
  EXPECT_THROW(simulate_gillespie(c, 0), EscapeError);
}

TEST(Stochastic, HamiltonianExamples) {
  const Energy flat = Energy::quadratic(1, 0.0, 1.0, 5.0);
  const Energy E = Energy::double_well(2, 1.0, 3.0);
  CounterRng rng(61, 0);
  for (int k = 0; k < 100; ++k) {
    const double alpha = rng.uniform(0.01, 1.0), beta = rng.uniform(0.5, 10.0);
    const double z = rng.uniform(-3, 3);
    EXPECT_NEAR(hamiltonian(flat, 0.5, scalar(0.3), scalar(z), alpha, beta), 2.0 * alpha * (std::cosh(z) - 1.0),
                1e-12 * (1.0 + std::cosh(z)));
    Vec x(2), a(2), b(2);
    x << rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5);
    a << rng.uniform(-2, 2), rng.uniform(-2, 2);
    b << rng.uniform(-2, 2), rng.uniform(-2, 2);
    const double t = rng.uniform(0, 1);
    EXPECT_EQ(hamiltonian(E, t, x, Vec::Zero(2), alpha, beta), 0.0);
    const double mid = hamiltonian(E, t, x, 0.5 * (a + b), alpha, beta);
    const double avg = 0.5 * (hamiltonian(E, t, x, a, alpha, beta) + hamiltonian(E, t, x, b, alpha, beta));
    EXPECT_LE(mid, avg + 1e-12 * (1.0 + std::abs(avg)));
  }
}

TEST(Stochastic, LagrangianIdentity) {
  const Energy E = Energy::double_well(2, 1.0, 3.0);
  CounterRng rng(67, 0);
  for (int k = 0; k < 500; ++k) {
    const double A = rng.uniform(0.1, 1.0);
    const int n = 1 + static_cast<int>(rng.uniform(0, 40));
    Vec x(2), v(2);
    x << rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5);
    v << rng.uniform(-2, 2), rng.uniform(-2, 2);
    const double t = rng.uniform(0, 1);
    const double L = lagrangian(E, t, x, v, 0.5 * std::exp(-n * A), n);
    const double ref = viscous_form(E, t, x, v, A, n);
    EXPECT_GE(L, -1e-12);
    EXPECT_NEAR(L, ref, 1e-8 * (1.0 + std::abs(ref)));
  }
}

TEST(Stochastic, LagrangianVanishesOnGraph) {
  const Energy E = benchmark::energy();
  const double A = 0.5;
  const int n = 6;
  const auto psi = DissipationPotential::cosh(A, n, 1);
  for (double x : {-1.2, -0.3, 0.4, 1.1}) {
    const Vec v = conjugate_gradient(psi, -E.grad_unchecked(0.7, scalar(x)));
    EXPECT_NEAR(lagrangian(E, 0.7, scalar(x), v, 0.5 * std::exp(-n * A), n), 0.0, 1e-12);
  }
}

TEST(Stochastic, LegendreDualityGrid) {
  const Energy E = benchmark::energy();
  CounterRng rng(71, 0);
  for (int k = 0; k < 50; ++k) {
    const double alpha = rng.uniform(0.05, 1.0), beta = rng.uniform(0.5, 4.0);
    const double t = rng.uniform(0, 1.2);
    const Vec x = scalar(rng.uniform(-1.3, 1.3));
    const Vec v = scalar(rng.uniform(-1.0, 1.0));
    double best = -kInf;
    for (int j = 0; j <= 200000; ++j) {
      const double z = -15.0 + 30.0 * j / 200000.0;
      best = std::max(best, z * v[0] - hamiltonian(E, t, x, scalar(z), alpha, beta));
    }
    EXPECT_NEAR(lagrangian(E, t, x, v, alpha, beta), best, 1e-3);
  }
}

TEST(Stochastic, PathRateFunctional) {
  const Energy E = benchmark::energy();
  const double A = benchmark::kA;
  const int n = 5;
  const double alpha = 0.5 * std::exp(-n * A);
  const auto psi = DissipationPotential::cosh(A, n, 1);
  const AcTrajectory sol = solve_explicit(psi, E, scalar(-1.0), 4000);
  EXPECT_LT(path_rate_functional(sol, E, alpha, n), 1e-3);

  const AcTrajectory still = AcTrajectory::from_times({0.0, 0.6, 1.2}, {scalar(0.5), scalar(0.5), scalar(0.5)});
  EXPECT_GT(path_rate_functional(still, E, alpha, n), 0.0);

  const Energy Q = Energy::quadratic(1, 1.0, 1.0, 5.0);
  const AcTrajectory rest = AcTrajectory::from_times({0.0, 1.0}, {scalar(0.0), scalar(0.0)});
  EXPECT_NEAR(path_rate_functional(rest, Q, alpha, n), 0.0, 1e-15);
}
