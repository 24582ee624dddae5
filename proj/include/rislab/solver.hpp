#pragma once

#include "rislab/convex.hpp"
#include "rislab/energy.hpp"
#include "rislab/trajectory.hpp"

namespace rislab {

enum class Scheme { Euler, Rk4 };

/// Explicit integration of u' = D Psi*(-DE(t,u)) on [0,T] (Cosh and
/// TwoNormViscous only).
///
/// The right-hand side of the cosh family grows like e^{n |DE|}, so a fixed
/// time step either wastes work on the stuck phases or explodes inside a
/// transition. The equation is therefore integrated in the arclength-type
/// variable s with dt/ds = 1/(1+|f|_1), du/ds = f/(1+|f|_1), f = D Psi*(-DE),
/// using the uniform step ds = T/steps. The last step is shortened so that
/// the trajectory ends exactly at T.
///
/// Throws EscapeError when |u|_inf leaves the energy's box, BlowupError on
/// non-finite states.
AcTrajectory solve_explicit(const DissipationPotential& psi, const Energy& E, const Vec& u0, int steps,
                            Scheme scheme = Scheme::Rk4);

/// Minimising movements with uniform tau = T/steps:
///   u_{k+1} in argmin_u tau Psi((u - u_k)/tau) + E(t_{k+1}, u),
/// solved by proximal gradient with backtracking until the gradient-mapping
/// norm drops below inner_tol. Throws NoConvergenceError past max_inner
/// iterations on any step.
AcTrajectory solve_minimizing_movement(const DissipationPotential& psi, const Energy& E, const Vec& u0, int steps,
                                       double inner_tol, int max_inner = 200000);

/// Fenchel gap Psi(u') + Psi*(-DE) + <DE, u'> on each interval, evaluated at
/// the interval midpoint with the difference quotient as u'. The gap of
/// interval k is weighted by h_k/(h_k + |du_k|_1), i.e. measured per unit of
/// time-plus-path length, and the maximum over intervals is returned.
double residual_inclusion(const DissipationPotential& psi, const Energy& E, const AcTrajectory& traj);

}  // namespace rislab
