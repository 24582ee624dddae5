#pragma once

#include "rislab/convex.hpp"

#include <vector>

namespace rislab {

enum class ContactFamily { VanishingViscosityTwoNorm, VanishingViscositySelf, Stochastic };

std::string to_string(ContactFamily family);

/// Limiting contact potential p(tau, v, xi) for Psi0 = A|.|_1.
struct ContactPotential {
  ContactFamily family = ContactFamily::Stochastic;
  double A = 1.0;
  int dim = 1;
};

/// b(tau,v,xi) = tau Psi(v/tau) + tau Psi*(xi) + tau delta, with the
/// convention 0 at (0,0,xi) and +inf at tau = 0, v != 0.
double eval_bipotential(const DissipationPotential& psi, double tau, const Vec& v, const Vec& xi, double delta = 0.0);

/// Minimiser of tau -> b^delta(tau, v, xi) over tau > 0 by golden-section
/// search on log tau; the bracket starts at [1e-9, 1e3] and grows until the
/// minimum is interior. Ties go to the smaller tau.
/// v = 0 has no interior minimiser (the infimum sits at tau -> 0) and throws
/// DegenerateInputError.
double argmin_tau(const DissipationPotential& psi, double delta, const Vec& v, const Vec& xi);

double eval_contact(const ContactPotential& p, double tau, const Vec& v, const Vec& xi);

/// |p - <v,xi>| <= tol (1 + |<v,xi>|); false where p is infinite.
bool in_contact_set(const ContactPotential& p, double tau, const Vec& v, const Vec& xi, double tol);

/// A v |xi|_inf + log(2 e n delta)/n, bounding |w|_inf over
/// {w : Psi_n*(w) <= Psi_n*(xi) + delta}.
double kstar_ndelta_bound(int n, double delta, double A, const Vec& xi);

/// Viscous potential of index n associated with a contact family: cosh with
/// parameter n for Stochastic, eps = 1/n for the viscous families.
DissipationPotential potential_for(const ContactPotential& p, int n);

/// Upper estimate of p(tau,v,xi): at the largest n in n_list, the smaller of
/// b_{Psi_n}(tau,v,xi) and b_{Psi_n}(tau_n,v,xi) with tau_n = argmin_tau at
/// delta = sqrt(n).
double contact_limit_probe(const ContactPotential& p, double tau, const Vec& v, const Vec& xi,
                           const std::vector<int>& n_list);

}  // namespace rislab
