#include "rislab/stochastic.hpp"
#include "rislab/parallel.hpp"
#include "rislab/random.hpp"

#include <algorithm>
#include <cmath>

namespace rislab {

LatticeConfig LatticeConfig::from_cosh(int h, double A, int n, const Energy& E, const Vec& x0, std::uint64_t seed) {
  LatticeConfig c;
  c.h = h;
  c.alpha = 0.5 * std::exp(-n * A);
  c.beta = n;
  c.energy = &E;
  c.x0 = x0;
  c.seed = seed;
  return c;
}

void LatticeConfig::validate() const {
  if (h < 1) throw DomainError("lattice: h must be >= 1");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("lattice: alpha and beta must be positive");
  if (energy == nullptr) throw DomainError("lattice: energy missing");
  require_dim(x0, energy->dim(), "lattice x0");
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    const double scaled = x0[i] * h;
    if (std::abs(scaled - std::round(scaled)) > 1e-9) throw DomainError("lattice: x0 must lie on (1/h) Z^d");
  }
}

Vec EventPath::state_at(double time) const {
  const auto k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), time) - t.begin());
  return x[k == 0 ? 0 : k - 1];
}

EventPath simulate_gillespie(const LatticeConfig& cfg, std::uint64_t run) {
  cfg.validate();
  const Energy& E = *cfg.energy;
  const double T = E.horizon();
  const int d = E.dim();
  const double h = cfg.h;
  const double LE = E.constants().LE;
  // window on which the rate majorant inflates by at most e
  const double window = LE > 0.0 ? std::min(T, 1.0 / (cfg.beta * LE)) : T;

  CounterRng rng(cfg.seed, run);
  EventPath path;
  // integer lattice coordinates avoid drift from repeated +-1/h
  Eigen::VectorXi k(d);
  for (int i = 0; i < d; ++i) k[i] = static_cast<int>(std::lround(cfg.x0[i] * h));
  Vec x = k.cast<double>() / h;
  path.t.push_back(0.0);
  path.dir.push_back(-1);
  path.sign.push_back(0);
  path.x.push_back(x);

  std::vector<double> rates(static_cast<std::size_t>(2 * d));
  double t = 0.0;
  while (t < T) {
    const double t_end = std::min(T, t + window);
    double bound = 0.0;
    for (int i = 0; i < d; ++i) {
      const auto [lo, hi] = E.gradient_range(i, x[i], t, t_end);
      bound += h * cfg.alpha * (std::exp(-cfg.beta * lo) + std::exp(cfg.beta * hi));
    }
    if (!std::isfinite(bound)) throw EscapeError("simulate_gillespie: rate bound overflow", t);
    const double candidate = t + rng.exponential(bound);
    if (candidate >= t_end) {
      t = t_end;
      continue;
    }
    t = candidate;
    const Vec g = E.grad_unchecked(t, x);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
      rates[static_cast<std::size_t>(2 * i)] = h * cfg.alpha * std::exp(-cfg.beta * g[i]);
      rates[static_cast<std::size_t>(2 * i + 1)] = h * cfg.alpha * std::exp(cfg.beta * g[i]);
      total += rates[static_cast<std::size_t>(2 * i)] + rates[static_cast<std::size_t>(2 * i + 1)];
    }
    double u = rng.uniform01() * bound;
    if (u > total) continue;  // thinned
    std::size_t pick = 0;
    while (pick + 1 < rates.size() && u > rates[pick]) u -= rates[pick++];
    const int i = static_cast<int>(pick / 2);
    const int sgn = pick % 2 == 0 ? 1 : -1;
    k[i] += sgn;
    x[i] = k[i] / h;
    if (std::abs(x[i]) > E.box_radius()) throw EscapeError("simulate_gillespie: state left the box", t);
    path.t.push_back(t);
    path.dir.push_back(i);
    path.sign.push_back(sgn);
    path.x.push_back(x);
  }
  return path;
}

EnsembleSummary simulate_ensemble(const LatticeConfig& cfg, int runs, int grid_points, int threads) {
  if (runs < 1) throw DomainError("simulate_ensemble: runs must be >= 1");
  if (grid_points < 2) throw DomainError("simulate_ensemble: grid_points must be >= 2");
  cfg.validate();
  const double T = cfg.energy->horizon();
  const int d = cfg.energy->dim();
  EnsembleSummary out;
  out.runs = runs;
  for (int g = 0; g < grid_points; ++g) out.grid.push_back(T * g / (grid_points - 1));

  std::vector<std::vector<Vec>> samples(static_cast<std::size_t>(runs));
  std::vector<double> counts(static_cast<std::size_t>(runs));
  parallel_for(static_cast<std::size_t>(runs), threads, [&](std::size_t r) {
    const EventPath path = simulate_gillespie(cfg, r);
    std::vector<Vec> row;
    row.reserve(out.grid.size());
    for (double t : out.grid) row.push_back(path.state_at(t));
    samples[r] = std::move(row);
    counts[r] = static_cast<double>(path.jumps());
  });

  out.mean.assign(out.grid.size(), Vec::Zero(d));
  out.variance.assign(out.grid.size(), Vec::Zero(d));
  for (std::size_t g = 0; g < out.grid.size(); ++g) {
    for (int r = 0; r < runs; ++r) out.mean[g] += samples[static_cast<std::size_t>(r)][g];
    out.mean[g] /= runs;
    if (runs > 1) {
      for (int r = 0; r < runs; ++r) {
        out.variance[g] += (samples[static_cast<std::size_t>(r)][g] - out.mean[g]).array().square().matrix();
      }
      out.variance[g] /= (runs - 1);
    }
  }
  for (double c : counts) out.mean_jumps += c;
  out.mean_jumps /= runs;
  if (runs > 1) {
    for (double c : counts) out.jumps_variance += (c - out.mean_jumps) * (c - out.mean_jumps);
    out.jumps_variance /= (runs - 1);
  }
  return out;
}

double hamiltonian(const Energy& E, double t, const Vec& x, const Vec& xi, double alpha, double beta) {
  require_dim(x, E.dim(), "hamiltonian");
  require_dim(xi, E.dim(), "hamiltonian");
  const Vec g = E.grad_unchecked(t, x);
  double H = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double rp = alpha * std::exp(-beta * g[i]);
    const double rm = alpha * std::exp(beta * g[i]);
    H += rp * std::expm1(xi[i]) + rm * std::expm1(-xi[i]);
  }
  return H;
}

double lagrangian(const Energy& E, double t, const Vec& x, const Vec& v, double alpha, double beta) {
  require_dim(x, E.dim(), "lagrangian");
  require_dim(v, E.dim(), "lagrangian");
  const Vec g = E.grad_unchecked(t, x);
  double L = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double log_rp = std::log(alpha) - beta * g[i];
    const double log_rm = std::log(alpha) + beta * g[i];
    const double geo = std::exp(0.5 * (log_rp + log_rm));  // sqrt(r+ r-)
    const double xi_star = std::asinh(v[i] / (2.0 * geo)) + 0.5 * (log_rm - log_rp);
    L += v[i] * xi_star - std::hypot(v[i], 2.0 * geo) + std::exp(log_rp) + std::exp(log_rm);
  }
  return L;
}

double path_rate_functional(const AcTrajectory& path, const Energy& E, double alpha, double beta) {
  double sum = 0.0;
  for (std::size_t k = 0; k < path.intervals(); ++k) {
    const Vec v = path.velocity(k);
    sum += 0.5 * path.dt(k) *
           (lagrangian(E, path.t(k), path.u(k), v, alpha, beta) + lagrangian(E, path.t(k + 1), path.u(k + 1), v, alpha, beta));
  }
  return sum;
}

AcTrajectory interpolate_event_path(const EventPath& path, double T) {
  std::vector<double> times;
  std::vector<Vec> values;
  for (std::size_t k = 0; k < path.t.size(); ++k) {
    if (!times.empty() && !(path.t[k] > times.back())) {
      values.back() = path.x[k];
      continue;
    }
    times.push_back(path.t[k]);
    values.push_back(path.x[k]);
  }
  if (T > times.back()) {
    times.push_back(T);
    values.push_back(path.x.back());
  }
  return AcTrajectory::from_times(times, std::move(values));
}

}  // namespace rislab
