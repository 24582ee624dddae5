#pragma once

#include "rislab/bvcurve.hpp"

#include <utility>
#include <vector>

namespace rislab {

/// Curve s -> (t(s), u(s)) on [0,S] with s(t) = t + Var(u;0,t). Nodes are
/// the original grid nodes plus the transition-path nodes filling every jump
/// window; both components are linear between nodes.
struct ArclengthCurve {
  std::vector<double> s;
  std::vector<double> t;
  std::vector<Vec> u;
  std::vector<bool> in_jump;  // per interval

  double length() const { return s.back(); }
  std::size_t intervals() const { return s.size() - 1; }
  /// (t(s), u(s)) by linear interpolation
  std::pair<double, Vec> at(double s_query) const;
};

/// Jump windows use the stored transition paths when present. In one
/// dimension the straight path (with `samples` nodes) is used; in higher
/// dimensions a missing path is recomputed with jump_cost and accepted only
/// if certified, otherwise MissingTransitionPathError is thrown.
ArclengthCurve arclength_param(const BvCurve& curve, double A, const ContactPotential& p, const Energy& E, int samples,
                               const JumpCostOptions& opts = {});

struct RecoveryResult {
  AcTrajectory traj;
  double lambda = 1.0;
  std::vector<double> tau;  // selected tau per arclength interval
};

/// Recovery sequence of index n for the viscous family `family` (Cosh with
/// parameter n, or TwoNormViscous with eps = 1/n), with delta_n = sqrt(n):
/// t_n' = max(t', tau_n(s)), lambda_n = t_n(S)/T, u_n(t) = u(t_n^{-1}(lambda_n t)).
/// The node values of u_n are those of the arclength curve, so
/// int A|u_n'|_1 equals the Psi0-variation of the arclength curve exactly.
RecoveryResult recovery_sequence(const BvCurve& curve, double A, const ContactPotential& p, const Energy& E,
                                 Family family, int n, int samples, const JumpCostOptions& opts = {});

struct StrictConvergenceRow {
  int n = 0;
  double sup_distance = 0.0;
  double var_difference = 0.0;
};

/// Sup distance at the curve's grid times farther than `exclusion` from every
/// jump time, and |int A|u_n'|_1 - Var_Psi0(u;0,T)|.
std::vector<StrictConvergenceRow> strict_convergence_report(const std::vector<std::pair<int, AcTrajectory>>& u_n_list,
                                                            const BvCurve& curve, double A, double exclusion);

}  // namespace rislab
