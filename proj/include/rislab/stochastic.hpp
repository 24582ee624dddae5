#pragma once

#include "rislab/energy.hpp"
#include "rislab/trajectory.hpp"

#include <cstdint>
#include <vector>

namespace rislab {

/// Lattice jump process on (1/h) Z^d: coordinate i jumps by +-1/h with rate
/// h r_i^+-(x,t), r_i^+- = alpha exp(-+ beta D_iE(t,x)).
struct LatticeConfig {
  int h = 10;
  double alpha = 0.5;
  double beta = 1.0;
  const Energy* energy = nullptr;
  Vec x0;
  std::uint64_t seed = 1;

  /// alpha = e^{-nA}/2, beta = n
  static LatticeConfig from_cosh(int h, double A, int n, const Energy& E, const Vec& x0, std::uint64_t seed);
  void validate() const;
};

struct EventPath {
  std::vector<double> t;     // t[0] = 0 is the initial state
  std::vector<int> dir;      // coordinate index, -1 for the initial row
  std::vector<int> sign;     // +1 / -1, 0 for the initial row
  std::vector<Vec> x;

  std::size_t jumps() const { return t.size() - 1; }
  /// state at time t (right-continuous)
  Vec state_at(double time) const;
};

/// One realisation on [0,T] by thinning. The rates are dominated on windows
/// [t, t + w] using the Lipschitz bound of t -> DE at the current state, so
/// the simulation is exact (no time discretisation). Stream (seed, run)
/// makes every run reproducible independently of scheduling.
/// Throws EscapeError when the state leaves the energy's box.
EventPath simulate_gillespie(const LatticeConfig& cfg, std::uint64_t run = 0);

struct EnsembleSummary {
  std::vector<double> grid;
  std::vector<Vec> mean;          // empirical mean on the grid
  std::vector<Vec> variance;      // unbiased per-coordinate variance
  double mean_jumps = 0.0;
  double jumps_variance = 0.0;
  int runs = 0;
};

/// Runs 0..runs-1 on `threads` workers; aggregation is in run order so the
/// result does not depend on the thread count.
EnsembleSummary simulate_ensemble(const LatticeConfig& cfg, int runs, int grid_points, int threads = 1);

double hamiltonian(const Energy& E, double t, const Vec& x, const Vec& xi, double alpha, double beta);

/// Legendre transform of the Hamiltonian in xi, computed per coordinate as
///   v xi* - sqrt(v^2 + 4 r+ r-) + r+ + r-,  xi* = asinh(v/(2 sqrt(r+ r-))) + log(r-/r+)/2.
double lagrangian(const Energy& E, double t, const Vec& x, const Vec& v, double alpha, double beta);

/// Trapezoidal integral of L(u, u') with the difference quotient held fixed
/// on each interval.
double path_rate_functional(const AcTrajectory& path, const Energy& E, double alpha, double beta);

/// Linear interpolation of an event path through its event states, ending
/// at T with the final state.
AcTrajectory interpolate_event_path(const EventPath& path, double T);

}  // namespace rislab
