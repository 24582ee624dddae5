#pragma once

#include "rislab/core.hpp"

#include <string>

namespace rislab {

enum class Family { OneHom, SelfViscous, TwoNormViscous, Cosh };

std::string to_string(Family family);

/// Dissipation potential on R^d built from the rate-independent part
/// Psi0(v) = A |v|_1. The four families are
///
///   OneHom          Psi(v) = A |v|_1
///   SelfViscous     Psi(v) = A |v|_1 + (eps/2) A^2 |v|_1^2
///   TwoNormViscous  Psi(v) = A |v|_1 + (eps/2) |v|_2^2
///   Cosh            Psi(v) = sum_i psi_n(v_i), the large-deviation potential
///                   whose conjugate is sum_i e^{-nA}/n (cosh(n xi_i) - 1).
///
/// Values are immutable after construction.
class DissipationPotential {
 public:
  static DissipationPotential one_homogeneous(double A, int dim);
  static DissipationPotential self_viscous(double A, double eps, int dim);
  static DissipationPotential two_norm_viscous(double A, double eps, int dim);
  static DissipationPotential cosh(double A, int n, int dim);

  Family family() const { return family_; }
  double slope() const { return A_; }
  double eps() const { return eps_; }
  int n() const { return n_; }
  int dim() const { return dim_; }

  /// e^{-nA}; only meaningful for Cosh.
  double cosh_scale() const;

 private:
  DissipationPotential(Family family, double A, double eps, int n, int dim)
      : family_(family), A_(A), eps_(eps), n_(n), dim_(dim) {}

  Family family_;
  double A_;
  double eps_;
  int n_;
  int dim_;
};

double eval_potential(const DissipationPotential& psi, const Vec& v);

/// Legendre conjugate, +inf where it is infinite (OneHom outside K*).
double eval_conjugate(const DissipationPotential& psi, const Vec& xi);

/// Brute-force Legendre transform: max over a tensor grid of <xi,v> - Psi(v).
/// The box grows by doubling until the maximiser is interior, then the grid
/// is zoomed around the best node. Every evaluated node is feasible, so the
/// result never exceeds the true conjugate.
double numeric_conjugate(const DissipationPotential& psi, const Vec& xi, double box_radius, int grid_pts);

/// Gradient of the conjugate; only for families whose conjugate is C^1
/// everywhere (Cosh, TwoNormViscous).
Vec conjugate_gradient(const DissipationPotential& psi, const Vec& xi);

enum class ViscousNorm { TwoNorm, OneNormScaled };

/// min over zeta in K* = {|zeta|_inf <= A} of |xi - zeta|_*, for the dual of
/// either |.|_2 or the scaled norm A|.|_1.
double dual_distance(const Vec& xi, double A, ViscousNorm norm);

/// argmin_x  gamma * tau * Psi((x - center)/tau) + 0.5 |x - y|^2
/// Used by the minimising-movement scheme. Not available for OneHom.
Vec prox_dissipation(const DissipationPotential& psi, const Vec& y, const Vec& center, double tau, double gamma);

namespace detail {

// Scalar pieces of the cosh family with scale c = e^{-nA}, evaluated without
// overflow for large n|x|.
double cosh_psi(double v, double n, double A);
double cosh_psi_star(double xi, double n, double A);
double cosh_psi_star_prime(double xi, double n, double A);
double cosh_psi_prime(double v, double n, double A);

}  // namespace detail

}  // namespace rislab
