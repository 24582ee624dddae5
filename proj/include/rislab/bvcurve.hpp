#pragma once

#include "rislab/contact.hpp"
#include "rislab/energy.hpp"
#include "rislab/trajectory.hpp"

#include <cstdint>

namespace rislab {

/// Psi0-variation of the curve on [a,b]: A |u'|_1 integrated over the pieces
/// plus A(|u(t)-u(t-)|_1 + |u(t+)-u(t)|_1) at interior jumps. At t = a only
/// u(a) -> u(a+) counts, at t = b only u(b-) -> u(b).
double var_psi0(const BvCurve& curve, double A, double a, double b);

struct JumpCostOptions {
  int nodes = 64;
  int restarts = 8;
  std::uint64_t seed = 7;
  int threads = 1;
  double quad_tol = 1e-8;
};

struct JumpCostResult {
  double cost = 0.0;
  TransitionPath path;
  bool certified = true;
  // best value reached by each restart (empty for the 1-d quadrature)
  std::vector<double> restart_costs;
};

/// Cost of connecting u_minus to u_plus at frozen time t, the infimum of
/// int_0^1 p(0, theta', -DE(t,theta)) over paths. In one dimension the
/// straight path is optimal and the integral is computed by adaptive
/// Simpson quadrature. In higher dimensions piecewise-linear paths are
/// optimised by multistart coordinate descent; the result is certified when
/// it meets the lower bound max(A|du|_1, E(u_minus) - E(u_plus)) or when two
/// restarts agree to 1e-4 relative.
JumpCostResult jump_cost(const ContactPotential& p, const Energy& E, double t, const Vec& u_minus, const Vec& u_plus,
                         const JumpCostOptions& opts = {});

/// Discretised cost of a given path, Simpson's rule on every segment.
double path_cost(const ContactPotential& p, const Energy& E, const TransitionPath& path);

struct VariationResult {
  double value = 0.0;
  bool certified = true;
};

/// Sum of jump costs over the half-jumps in [a,b].
VariationResult jump_variation(const ContactPotential& p, const Energy& E, const BvCurve& curve, double a, double b,
                               const JumpCostOptions& opts = {});

/// Diffuse part int A|u'|_1 over [a,b] plus the jump variation.
VariationResult pseudo_total_variation(double A, const ContactPotential& p, const Energy& E, const BvCurve& curve,
                                       double a, double b, const JumpCostOptions& opts = {});

/// Trapezoidal evaluation of
///   int Psi(u') + Psi*(-DE(t,u)) dt + E(T,u(T)) - E(0,u(0)) - int d_tE dt
/// on the trajectory grid; +inf if the conjugate is infinite at a node.
double functional_J_n(const DissipationPotential& psi, const Energy& E, const AcTrajectory& traj);

/// Pseudo-total variation on [0,T] + energy terms, or +inf when
/// |DE|_inf > A (1 + stability_tol) + stability_tol at a node of a piece of
/// positive length.
double functional_J_limit(double A, const ContactPotential& p, const Energy& E, const BvCurve& curve,
                          double stability_tol = 1e-8, const JumpCostOptions& opts = {});

struct BvCheckReport {
  double stability_residual = 0.0;
  double energy_residual = 0.0;
  bool certified = true;
  bool pass = false;
};

BvCheckReport check_bv_solution(double A, const ContactPotential& p, const Energy& E, const BvCurve& curve, double tol,
                                const JumpCostOptions& opts = {});

struct TransitionReport {
  bool contact_ok = true;
  double worst_contact_gap = 0.0;  // max |p - <theta', -DE>| / (1 + |<theta', -DE>|)
  double energy_drop = 0.0;
  double cost = 0.0;
  bool balance_ok = true;
  bool pass = true;
};

TransitionReport check_optimal_transition(const ContactPotential& p, const Energy& E, const TransitionPath& path,
                                          double tol);

}  // namespace rislab
