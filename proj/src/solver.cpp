#include "rislab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rislab {

namespace {

struct Slope {
  double dt;  // dt/ds
  Vec du;     // du/ds
};

class ArclengthField {
 public:
  ArclengthField(const DissipationPotential& psi, const Energy& E) : psi_(psi), E_(E) {}

  Slope operator()(double t, const Vec& u) const {
    const Vec f = conjugate_gradient(psi_, -E_.grad_unchecked(t, u));
    const double scale = 1.0 / (1.0 + norm1(f));
    if (!std::isfinite(scale) || scale == 0.0) {
      // |f| overflowed: the motion is purely spatial along sign(f)
      Vec dir(f.size());
      for (Eigen::Index i = 0; i < f.size(); ++i) dir[i] = std::isinf(f[i]) ? std::copysign(1.0, f[i]) : 0.0;
      const double k = norm1(dir);
      return {0.0, k > 0.0 ? Vec(dir / k) : dir};
    }
    return {scale, f * scale};
  }

 private:
  const DissipationPotential& psi_;
  const Energy& E_;
};

struct Increment {
  double dt;
  Vec du;
};

Increment advance(const ArclengthField& field, Scheme scheme, double t, const Vec& u, double ds) {
  if (scheme == Scheme::Euler) {
    const Slope k1 = field(t, u);
    return {ds * k1.dt, ds * k1.du};
  }
  const Slope k1 = field(t, u);
  const Slope k2 = field(t + 0.5 * ds * k1.dt, u + 0.5 * ds * k1.du);
  const Slope k3 = field(t + 0.5 * ds * k2.dt, u + 0.5 * ds * k2.du);
  const Slope k4 = field(t + ds * k3.dt, u + ds * k3.du);
  return {ds / 6.0 * (k1.dt + 2.0 * k2.dt + 2.0 * k3.dt + k4.dt),
          ds / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du)};
}

void check_state(const Vec& u, double t, double box) {
  if (!u.allFinite()) throw BlowupError("solver: non-finite state at t = " + std::to_string(t));
  if (norm_inf(u) > box) throw EscapeError("solver: state left the box |u|_inf <= " + std::to_string(box), t);
}

}  // namespace

AcTrajectory solve_explicit(const DissipationPotential& psi, const Energy& E, const Vec& u0, int steps, Scheme scheme) {
  if (psi.family() != Family::Cosh && psi.family() != Family::TwoNormViscous) {
    throw UnsupportedFamilyError("solve_explicit: needs a differentiable conjugate (cosh or two_norm_viscous)");
  }
  require_dim(u0, psi.dim(), "solve_explicit");
  require_dim(u0, E.dim(), "solve_explicit");
  if (steps < 1) throw DomainError("solve_explicit: steps must be >= 1");
  const double T = E.horizon();
  check_state(u0, 0.0, E.box_radius());

  const ArclengthField field(psi, E);
  const double ds = T / steps;
  // every step advances s by ds and s >= t + |u|_1-length, so this cap is
  // only reached when the path length is absurd
  const std::size_t cap = static_cast<std::size_t>(steps) * 1000 + 10;

  std::vector<double> increments;
  std::vector<Vec> values{u0};
  increments.reserve(static_cast<std::size_t>(steps) * 2);
  values.reserve(static_cast<std::size_t>(steps) * 2);
  double t = 0.0;
  Vec u = u0;
  while (T - t > 1e-14 * T) {
    if (increments.size() >= cap) throw NoConvergenceError("solve_explicit: step cap reached before T");
    Increment inc = advance(field, scheme, t, u, ds);
    if (t + inc.dt > T) {
      // shorten the last step so it lands on T; dt(ds) is increasing
      double lo = 0.0;
      double hi = ds;
      const double rest = T - t;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Increment trial = advance(field, scheme, t, u, mid);
        if (trial.dt > rest) hi = mid; else lo = mid;
        if (hi - lo <= 1e-15 * ds) break;
      }
      inc = advance(field, scheme, t, u, hi);
      inc.dt = rest;
    }
    if (!(inc.dt > 0.0)) {
      // a pure-space step (overflowed field) is merged with the next one
      u += inc.du;
      check_state(u, t, E.box_radius());
      values.back() = u;
      continue;
    }
    u += inc.du;
    t += inc.dt;
    check_state(u, t, E.box_radius());
    increments.push_back(inc.dt);
    values.push_back(u);
  }
  if (increments.empty()) {
    increments.push_back(T);
    values.push_back(u);
  }
  return AcTrajectory::from_increments(0.0, std::move(increments), std::move(values));
}

AcTrajectory solve_minimizing_movement(const DissipationPotential& psi, const Energy& E, const Vec& u0, int steps,
                                       double inner_tol, int max_inner) {
  if (psi.family() == Family::OneHom) {
    throw UnsupportedFamilyError("solve_minimizing_movement: the one-homogeneous potential has no viscous part");
  }
  require_dim(u0, psi.dim(), "solve_minimizing_movement");
  require_dim(u0, E.dim(), "solve_minimizing_movement");
  if (steps < 1) throw DomainError("solve_minimizing_movement: steps must be >= 1");
  if (!(inner_tol > 0.0)) throw DomainError("solve_minimizing_movement: inner_tol must be positive");
  const double T = E.horizon();
  const double tau = T / steps;
  check_state(u0, 0.0, E.box_radius());

  std::vector<double> times{0.0};
  std::vector<Vec> values{u0};
  Vec x = u0;
  double gamma = 1.0;
  for (int k = 0; k < steps; ++k) {
    const double t = k + 1 == steps ? T : (k + 1) * tau;
    const Vec center = values.back();
    bool converged = false;
    for (int it = 0; it < max_inner; ++it) {
      const Vec g = E.grad_unchecked(t, x);
      const double fx = E.value_unchecked(t, x);
      Vec y;
      // backtracking on the smooth part
      for (int bt = 0; bt < 100; ++bt) {
        y = prox_dissipation(psi, x - gamma * g, center, tau, gamma);
        const Vec d = y - x;
        if (E.value_unchecked(t, y) <= fx + g.dot(d) + 0.5 * d.squaredNorm() / gamma + 1e-15 * (1.0 + std::abs(fx))) break;
        gamma *= 0.5;
      }
      const double gap = (y - x).norm() / gamma;
      x = y;
      if (!x.allFinite()) throw BlowupError("solve_minimizing_movement: non-finite iterate");
      if (gap <= inner_tol) {
        converged = true;
        break;
      }
      gamma = std::min(gamma * 1.25, 1e6);
    }
    if (!converged) {
      throw NoConvergenceError("solve_minimizing_movement: inner iteration cap reached at step " + std::to_string(k + 1));
    }
    check_state(x, t, E.box_radius());
    times.push_back(t);
    values.push_back(x);
  }
  return AcTrajectory::from_times(times, std::move(values));
}

double residual_inclusion(const DissipationPotential& psi, const Energy& E, const AcTrajectory& traj) {
  require_dim(traj.u(0), psi.dim(), "residual_inclusion");
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.intervals(); ++k) {
    const double h = traj.dt(k);
    const Vec du = traj.u(k + 1) - traj.u(k);
    const Vec v = du / h;
    const Vec mid = 0.5 * (traj.u(k) + traj.u(k + 1));
    const Vec g = E.grad_unchecked(traj.t(k) + 0.5 * h, mid);
    const double conj = eval_conjugate(psi, -g);
    if (conj == kInf) return kInf;
    const double gap = std::max(0.0, eval_potential(psi, v) + conj + g.dot(v));
    worst = std::max(worst, h * gap / (h + norm1(du)));
  }
  return worst;
}

}  // namespace rislab
