#include "rislab/contact.hpp"

#include <algorithm>
#include <cmath>

namespace rislab {

std::string to_string(ContactFamily family) {
  switch (family) {
    case ContactFamily::VanishingViscosityTwoNorm: return "vanishing_viscosity_two_norm";
    case ContactFamily::VanishingViscositySelf: return "vanishing_viscosity_self";
    case ContactFamily::Stochastic: return "stochastic";
  }
  return "unknown";
}

double eval_bipotential(const DissipationPotential& psi, double tau, const Vec& v, const Vec& xi, double delta) {
  require_dim(v, psi.dim(), "eval_bipotential");
  require_dim(xi, psi.dim(), "eval_bipotential");
  if (!(tau >= 0.0) || !(delta >= 0.0)) throw DomainError("eval_bipotential: tau and delta must be nonnegative");
  if (tau == 0.0) return norm_inf(v) == 0.0 ? 0.0 : kInf;
  const double conj = eval_conjugate(psi, xi);
  if (conj == kInf) return kInf;
  return tau * eval_potential(psi, v / tau) + tau * conj + tau * delta;
}

namespace {

// d/dtau [tau Psi(v/tau)] = Psi(w) - <DPsi(w), w> at w = v/tau; the A|w|_1 part cancels
double perspective_slope(const DissipationPotential& psi, const Vec& w) {
  const double A = psi.slope();
  switch (psi.family()) {
    case Family::OneHom: return 0.0;
    case Family::SelfViscous: {
      const double r = norm1(w);
      return -0.5 * psi.eps() * A * A * r * r;
    }
    case Family::TwoNormViscous: return -0.5 * psi.eps() * w.squaredNorm();
    case Family::Cosh: {
      const double c = std::exp(-psi.n() * A);
      double sum = 0.0;
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double x = std::abs(w[i]);
        // c - sqrt(x^2 + c^2), without cancellation
        sum -= x * (x / (std::hypot(x, c) + c));
      }
      return sum / psi.n();
    }
  }
  return 0.0;
}

}  // namespace

double argmin_tau(const DissipationPotential& psi, double delta, const Vec& v, const Vec& xi) {
  require_dim(v, psi.dim(), "argmin_tau");
  require_dim(xi, psi.dim(), "argmin_tau");
  if (!(delta > 0.0)) throw DomainError("argmin_tau: delta must be positive");
  if (norm_inf(v) == 0.0) {
    throw DegenerateInputError("argmin_tau: v = 0, the infimum over tau > 0 is approached only as tau -> 0");
  }
  const double conj = eval_conjugate(psi, xi);
  if (conj == kInf) throw DomainError("argmin_tau: conjugate is infinite at xi");
  const double level = conj + delta;
  auto f = [&](double log_tau) {
    const double tau = std::exp(log_tau);
    return tau * eval_potential(psi, v / tau) + tau * level;
  };

  double lo = std::log(1e-9);
  double hi = std::log(1e3);
  const double step = std::log(10.0);
  while (lo > -700.0 && f(lo) <= f(lo + step)) lo -= 4.0 * step;
  while (hi < 700.0 && f(hi) <= f(hi - step)) hi += 4.0 * step;

  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > 1e-10) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = f(d);
    }
  }
  const double guess = 0.5 * (lo + hi);
  if (psi.family() == Family::OneHom) return std::exp(guess);

  // The comparison of nearly equal b-values limits golden section to about
  // sqrt(machine eps); polish on the first-order condition, which is monotone.
  auto slope = [&](double log_tau) { return perspective_slope(psi, v / std::exp(log_tau)) + level; };
  double a = guess - 1e-3;
  double b = guess + 1e-3;
  if (!(slope(a) <= 0.0 && slope(b) >= 0.0)) return std::exp(guess);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    if (slope(m) < 0.0) {
      a = m;
    } else {
      b = m;
    }
  }
  return std::exp(0.5 * (a + b));
}

double eval_contact(const ContactPotential& p, double tau, const Vec& v, const Vec& xi) {
  require_dim(v, p.dim, "eval_contact");
  require_dim(xi, p.dim, "eval_contact");
  if (!(tau >= 0.0)) throw DomainError("eval_contact: tau must be nonnegative");
  const double A = p.A;
  const double r = norm1(v);
  if (tau > 0.0) return norm_inf(xi) <= A ? A * r : kInf;
  switch (p.family) {
    case ContactFamily::Stochastic:
    case ContactFamily::VanishingViscositySelf:
      return r * std::max(A, norm_inf(xi));
    case ContactFamily::VanishingViscosityTwoNorm:
      return A * r + norm2(v) * dual_distance(xi, A, ViscousNorm::TwoNorm);
  }
  return kInf;
}

bool in_contact_set(const ContactPotential& p, double tau, const Vec& v, const Vec& xi, double tol) {
  const double val = eval_contact(p, tau, v, xi);
  if (!std::isfinite(val)) return false;
  const double pairing = v.dot(xi);
  return std::abs(val - pairing) <= tol * (1.0 + std::abs(pairing));
}

double kstar_ndelta_bound(int n, double delta, double A, const Vec& xi) {
  const double arg = 2.0 * std::exp(1.0) * n * delta;
  if (n < 1 || !(arg > 1.0)) throw DomainError("kstar_ndelta_bound: requires 2 e n delta > 1");
  return std::max(A, norm_inf(xi)) + std::log(arg) / n;
}

DissipationPotential potential_for(const ContactPotential& p, int n) {
  switch (p.family) {
    case ContactFamily::Stochastic: return DissipationPotential::cosh(p.A, n, p.dim);
    case ContactFamily::VanishingViscositySelf: return DissipationPotential::self_viscous(p.A, 1.0 / n, p.dim);
    case ContactFamily::VanishingViscosityTwoNorm: return DissipationPotential::two_norm_viscous(p.A, 1.0 / n, p.dim);
  }
  throw UnsupportedFamilyError("potential_for: unknown contact family");
}

double contact_limit_probe(const ContactPotential& p, double tau, const Vec& v, const Vec& xi,
                           const std::vector<int>& n_list) {
  if (n_list.empty()) throw DomainError("contact_limit_probe: n_list must be non-empty");
  for (std::size_t k = 1; k < n_list.size(); ++k) {
    if (n_list[k] <= n_list[k - 1]) throw DomainError("contact_limit_probe: n_list must be increasing");
  }
  if (tau == 0.0 && norm_inf(v) == 0.0) return 0.0;
  const int n = n_list.back();
  const DissipationPotential psi = potential_for(p, n);
  double best = eval_bipotential(psi, tau, v, xi);
  if (norm_inf(v) > 0.0) {
    const double tn = argmin_tau(psi, std::sqrt(static_cast<double>(n)), v, xi);
    best = std::min(best, eval_bipotential(psi, tn, v, xi));
  }
  return best;
}

}  // namespace rislab
