#include "rislab/reparam.hpp"

#include <algorithm>
#include <cmath>

namespace rislab {

std::pair<double, Vec> ArclengthCurve::at(double s_query) const {
  if (s_query <= s.front()) return {t.front(), u.front()};
  if (s_query >= s.back()) return {t.back(), u.back()};
  const auto k = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), s_query) - s.begin());
  const double w = (s_query - s[k - 1]) / (s[k] - s[k - 1]);
  return {(1.0 - w) * t[k - 1] + w * t[k], (1.0 - w) * u[k - 1] + w * u[k]};
}

namespace {

TransitionPath choose_path(const ContactPotential& p, const Energy& E, double t, const Vec& from, const Vec& to,
                           const std::optional<TransitionPath>& stored, int samples, const JumpCostOptions& opts,
                           std::size_t jump_index) {
  if (stored) return *stored;
  if (from.size() == 1) return TransitionPath::straight(t, from, to, std::max(2, samples));
  JumpCostOptions o = opts;
  o.nodes = std::max(2, samples);
  JumpCostResult r = jump_cost(p, E, t, from, to, o);
  if (!r.certified) {
    throw MissingTransitionPathError("arclength_param: jump " + std::to_string(jump_index) +
                                     " has no stored transition path and none could be certified");
  }
  return r.path;
}

}  // namespace

ArclengthCurve arclength_param(const BvCurve& curve, double A, const ContactPotential& p, const Energy& E, int samples,
                               const JumpCostOptions& opts) {
  curve.validate();
  ArclengthCurve out;
  auto push = [&out](double ds, double t, const Vec& u, bool jump) {
    if (out.s.empty()) {
      out.s.push_back(0.0);
      out.t.push_back(t);
      out.u.push_back(u);
      return;
    }
    if (!(ds > 0.0)) {
      // zero-speed node: merge with its neighbour
      out.u.back() = u;
      out.t.back() = t;
      return;
    }
    out.s.push_back(out.s.back() + ds);
    out.t.push_back(t);
    out.u.push_back(u);
    out.in_jump.push_back(jump);
  };
  auto add_path = [&](const TransitionPath& path) {
    for (std::size_t m = 0; m + 1 < path.nodes.size(); ++m) {
      const double ds = path_cost(p, E, TransitionPath{path.t, {path.nodes[m], path.nodes[m + 1]}});
      push(ds, path.t, path.nodes[m + 1], true);
    }
  };
  for (std::size_t j = 0; j < curve.pieces.size(); ++j) {
    const AcTrajectory& pc = curve.pieces[j];
    if (j > 0) {
      const Jump& jp = curve.jumps[j - 1];
      if (norm_inf(jp.point - jp.left) > 0.0) {
        add_path(choose_path(p, E, jp.t, jp.left, jp.point, jp.path_in, samples, opts, j - 1));
      }
      if (norm_inf(jp.right - jp.point) > 0.0) {
        add_path(choose_path(p, E, jp.t, jp.point, jp.right, jp.path_out, samples, opts, j - 1));
      }
    }
    if (out.s.empty()) push(0.0, pc.t(0), pc.u(0), false);
    for (std::size_t k = 0; k < pc.intervals(); ++k) {
      push(pc.dt(k) + A * norm1(pc.u(k + 1) - pc.u(k)), pc.t(k + 1), pc.u(k + 1), false);
    }
  }
  return out;
}

RecoveryResult recovery_sequence(const BvCurve& curve, double A, const ContactPotential& p, const Energy& E,
                                 Family family, int n, int samples, const JumpCostOptions& opts) {
  if (family != Family::Cosh && family != Family::TwoNormViscous) {
    throw UnsupportedFamilyError("recovery_sequence: family must be cosh or two_norm_viscous");
  }
  if (n < 1) throw DomainError("recovery_sequence: n must be >= 1");
  const int d = curve.dim();
  const DissipationPotential psi = family == Family::Cosh ? DissipationPotential::cosh(A, n, d)
                                                          : DissipationPotential::two_norm_viscous(A, 1.0 / n, d);
  const double delta = std::sqrt(static_cast<double>(n));
  const ArclengthCurve arc = arclength_param(curve, A, p, E, samples, opts);

  RecoveryResult res;
  std::vector<double> dtn;
  dtn.reserve(arc.intervals());
  res.tau.reserve(arc.intervals());
  double Tn = 0.0;
  for (std::size_t k = 0; k < arc.intervals(); ++k) {
    const double ds = arc.s[k + 1] - arc.s[k];
    const double t_rate = std::max(0.0, arc.t[k + 1] - arc.t[k]) / ds;
    const Vec u_rate = (arc.u[k + 1] - arc.u[k]) / ds;
    double tau = 0.0;
    if (norm_inf(u_rate) > 0.0) {
      const Vec xi = -E.grad_unchecked(0.5 * (arc.t[k] + arc.t[k + 1]), 0.5 * (arc.u[k] + arc.u[k + 1]));
      try {
        tau = argmin_tau(psi, delta, u_rate, xi);
      } catch (const Error& e) {
        throw DegenerateInputError("recovery_sequence: node " + std::to_string(k) + ": " + e.what());
      }
    }
    res.tau.push_back(tau);
    const double step = std::max(t_rate, tau) * ds;
    dtn.push_back(step);
    Tn += step;
  }
  res.lambda = Tn / curve.T;
  for (double& h : dtn) h /= res.lambda;
  if (dtn.empty()) {
    // constant curve with a single node
    res.traj = AcTrajectory::from_times({0.0, curve.T}, {arc.u.front(), arc.u.front()});
    return res;
  }
  res.traj = AcTrajectory::from_increments(0.0, std::move(dtn), arc.u);
  return res;
}

std::vector<StrictConvergenceRow> strict_convergence_report(const std::vector<std::pair<int, AcTrajectory>>& u_n_list,
                                                            const BvCurve& curve, double A, double exclusion) {
  const double var = var_psi0(curve, A, 0.0, curve.T);
  std::vector<double> grid;
  for (const AcTrajectory& pc : curve.pieces) {
    for (double t : pc.times()) {
      bool near_jump = false;
      for (const Jump& jp : curve.jumps) near_jump = near_jump || std::abs(t - jp.t) <= exclusion;
      if (!near_jump) grid.push_back(t);
    }
  }
  std::vector<StrictConvergenceRow> rows;
  for (const auto& [n, traj] : u_n_list) {
    StrictConvergenceRow row;
    row.n = n;
    for (double t : grid) {
      row.sup_distance = std::max(row.sup_distance, norm_inf(traj.value_at(t) - curve.value_at(t)));
    }
    double var_n = 0.0;
    for (std::size_t k = 0; k < traj.intervals(); ++k) var_n += A * norm1(traj.u(k + 1) - traj.u(k));
    row.var_difference = std::abs(var_n - var);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rislab
