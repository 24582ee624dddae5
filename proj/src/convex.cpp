#include "rislab/convex.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rislab {

std::string to_string(Family family) {
  switch (family) {
    case Family::OneHom: return "one_hom";
    case Family::SelfViscous: return "self_viscous";
    case Family::TwoNormViscous: return "two_norm_viscous";
    case Family::Cosh: return "cosh";
  }
  return "unknown";
}

namespace {

void check_dim(int dim) {
  if (dim < 1) throw DimensionError("dissipation potential: dimension must be >= 1");
}

void check_slope(double A, bool allow_zero) {
  if (!std::isfinite(A) || A < 0.0 || (!allow_zero && A == 0.0)) {
    throw DomainError("dissipation potential: slope A must be positive and finite");
  }
}

void check_eps(double eps) {
  if (!std::isfinite(eps) || eps <= 0.0) throw DomainError("dissipation potential: eps must be positive");
}

double soft_threshold(double x, double threshold) {
  const double m = std::abs(x) - threshold;
  return m > 0.0 ? std::copysign(m, x) : 0.0;
}

}  // namespace

DissipationPotential DissipationPotential::one_homogeneous(double A, int dim) {
  check_dim(dim);
  check_slope(A, false);
  return {Family::OneHom, A, 0.0, 0, dim};
}

DissipationPotential DissipationPotential::self_viscous(double A, double eps, int dim) {
  check_dim(dim);
  check_slope(A, false);
  check_eps(eps);
  return {Family::SelfViscous, A, eps, 0, dim};
}

DissipationPotential DissipationPotential::two_norm_viscous(double A, double eps, int dim) {
  check_dim(dim);
  check_slope(A, false);
  check_eps(eps);
  return {Family::TwoNormViscous, A, eps, 0, dim};
}

DissipationPotential DissipationPotential::cosh(double A, int n, int dim) {
  check_dim(dim);
  // A = 0 is admitted for the cosh family: the potential stays a valid
  // dissipation potential, it just loses its rate-independent part.
  check_slope(A, true);
  if (n < 1) throw DomainError("dissipation potential: n must be a positive integer");
  return {Family::Cosh, A, 0.0, n, dim};
}

double DissipationPotential::cosh_scale() const { return std::exp(-static_cast<double>(n_) * A_); }

namespace detail {

namespace {

// asinh(av / e^{-nA}) for av >= 0.
double asinh_over_scale(double av, double n, double A) {
  const double c = std::exp(-n * A);
  if (c > 0.0) {
    const double r = av / c;
    if (std::isfinite(r)) return std::asinh(r);
  }
  return std::log(av + std::hypot(av, c)) + n * A;
}

}  // namespace

double cosh_psi(double v, double n, double A) {
  const double av = std::abs(v);
  if (av == 0.0) return 0.0;
  const double c = std::exp(-n * A);
  const double root = std::hypot(av, c);
  // sqrt(v^2 + c^2) - c, written without cancellation
  const double excess = av * (av / (root + c));
  return av * (asinh_over_scale(av, n, A) / n) - excess / n;
}

double cosh_psi_prime(double v, double n, double A) {
  return std::copysign(asinh_over_scale(std::abs(v), n, A), v) / n;
}

double cosh_psi_star(double xi, double n, double A) {
  const double a = n * std::abs(xi);
  if (a < 40.0) {
    const double s = std::sinh(0.5 * a);
    return 2.0 * std::exp(-n * A) * s * s / n;
  }
  // e^{-nA}(cosh a - 1) = e^{a - nA}/2 up to relative 1e-17
  return std::exp(a - n * A) / (2.0 * n);
}

double cosh_psi_star_prime(double xi, double n, double A) {
  const double a = n * std::abs(xi);
  if (a < 40.0) return std::exp(-n * A) * std::sinh(n * xi);
  return std::copysign(0.5 * std::exp(a - n * A), xi);
}

}  // namespace detail

double eval_potential(const DissipationPotential& psi, const Vec& v) {
  require_dim(v, psi.dim(), "eval_potential");
  const double A = psi.slope();
  switch (psi.family()) {
    case Family::OneHom: return A * norm1(v);
    case Family::SelfViscous: {
      const double r = norm1(v);
      return A * r + 0.5 * psi.eps() * A * A * r * r;
    }
    case Family::TwoNormViscous: return A * norm1(v) + 0.5 * psi.eps() * v.squaredNorm();
    case Family::Cosh: {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < v.size(); ++i) sum += detail::cosh_psi(v[i], psi.n(), A);
      return sum;
    }
  }
  return kInf;
}

double eval_conjugate(const DissipationPotential& psi, const Vec& xi) {
  require_dim(xi, psi.dim(), "eval_conjugate");
  const double A = psi.slope();
  switch (psi.family()) {
    case Family::OneHom: return norm_inf(xi) <= A ? 0.0 : kInf;
    case Family::SelfViscous: {
      // Psi depends on |v|_1 only; sup over |v|_1 = r of <xi,v> is r |xi|_inf,
      // leaving a scalar quadratic in r.
      const double excess = std::max(norm_inf(xi) - A, 0.0);
      return excess * excess / (2.0 * psi.eps() * A * A);
    }
    case Family::TwoNormViscous: {
      const double d = dual_distance(xi, A, ViscousNorm::TwoNorm);
      return d * d / (2.0 * psi.eps());
    }
    case Family::Cosh: {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < xi.size(); ++i) sum += detail::cosh_psi_star(xi[i], psi.n(), A);
      return sum;
    }
  }
  return kInf;
}

namespace {

struct GridScan {
  double value;
  Vec argmax;
  bool on_boundary;
};

GridScan scan_grid(const DissipationPotential& psi, const Vec& xi, const Vec& center, double half, int pts) {
  const auto d = static_cast<std::size_t>(xi.size());
  std::vector<int> idx(d, 0);
  Vec v(xi.size());
  GridScan best{-kInf, center, false};
  std::vector<int> best_idx(d, 0);
  const double h = 2.0 * half / (pts - 1);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) v[i] = center[i] - half + h * idx[i];
    const double f = xi.dot(v) - eval_potential(psi, v);
    if (f > best.value) {
      best.value = f;
      best.argmax = v;
      best_idx = idx;
    }
    std::size_t k = 0;
    while (k < d && ++idx[k] == pts) idx[k++] = 0;
    if (k == d) break;
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (best_idx[i] == 0 || best_idx[i] == pts - 1) best.on_boundary = true;
  }
  return best;
}

}  // namespace

double numeric_conjugate(const DissipationPotential& psi, const Vec& xi, double box_radius, int grid_pts) {
  require_dim(xi, psi.dim(), "numeric_conjugate");
  if (!(box_radius > 0.0)) throw DomainError("numeric_conjugate: box_radius must be positive");
  if (grid_pts < 3) throw DomainError("numeric_conjugate: grid_pts must be >= 3");
  // odd point counts put v = 0 on the grid
  const int pts = grid_pts % 2 == 1 ? grid_pts : grid_pts + 1;
  const Vec origin = Vec::Zero(xi.size());

  constexpr int kMaxDoublings = 60;
  double radius = box_radius;
  GridScan best = scan_grid(psi, xi, origin, radius, pts);
  for (int k = 0; k < kMaxDoublings && best.on_boundary; ++k) {
    radius *= 2.0;
    best = scan_grid(psi, xi, origin, radius, pts);
  }

  double half = 2.0 * radius / (pts - 1);
  for (int level = 0; level < 12; ++level) {
    const GridScan zoom = scan_grid(psi, xi, best.argmax, half, pts);
    if (zoom.value > best.value) best = zoom;
    half = 4.0 * half / (pts - 1);
    if (half < 1e-14 * (1.0 + norm_inf(best.argmax))) break;
  }
  return best.value;
}

Vec conjugate_gradient(const DissipationPotential& psi, const Vec& xi) {
  require_dim(xi, psi.dim(), "conjugate_gradient");
  const double A = psi.slope();
  Vec g(xi.size());
  switch (psi.family()) {
    case Family::Cosh:
      for (Eigen::Index i = 0; i < xi.size(); ++i) g[i] = detail::cosh_psi_star_prime(xi[i], psi.n(), A);
      return g;
    case Family::TwoNormViscous:
      for (Eigen::Index i = 0; i < xi.size(); ++i) g[i] = soft_threshold(xi[i], A) / psi.eps();
      return g;
    default:
      throw UnsupportedFamilyError("conjugate_gradient: conjugate of " + to_string(psi.family()) +
                                   " is not differentiable everywhere");
  }
}

double dual_distance(const Vec& xi, double A, ViscousNorm norm) {
  if (!(A > 0.0)) throw DomainError("dual_distance: A must be positive");
  if (norm == ViscousNorm::OneNormScaled) return std::max(norm_inf(xi) - A, 0.0) / A;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    const double e = std::max(std::abs(xi[i]) - A, 0.0);
    sum += e * e;
  }
  return std::sqrt(sum);
}

namespace {

// Solves (gamma/n) asinh(w/c) + tau w = r for w >= 0, r >= 0.
double solve_cosh_prox(double r, double tau, double gamma, double n, double A) {
  if (r == 0.0) return 0.0;
  double lo = 0.0;
  double hi = r / tau;
  auto g = [&](double w) { return gamma * detail::cosh_psi_prime(w, n, A) + tau * w - r; };
  const double c = std::exp(-n * A);
  double w = hi;
  for (int it = 0; it < 200; ++it) {
    const double gw = g(w);
    if (gw > 0.0) hi = w; else lo = w;
    if (gw == 0.0 || hi - lo <= 1e-15 * hi) break;
    const double slope = gamma / (n * std::hypot(w, c)) + tau;
    double next = w - gw / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    w = next;
  }
  return w;
}

}  // namespace

Vec prox_dissipation(const DissipationPotential& psi, const Vec& y, const Vec& center, double tau, double gamma) {
  require_dim(y, psi.dim(), "prox_dissipation");
  require_dim(center, psi.dim(), "prox_dissipation");
  if (!(tau > 0.0) || !(gamma > 0.0)) throw DomainError("prox_dissipation: tau and gamma must be positive");
  const double A = psi.slope();
  const Vec z = y - center;
  Vec d(z.size());
  switch (psi.family()) {
    case Family::OneHom:
      throw UnsupportedFamilyError("prox_dissipation: one-homogeneous potential has no viscous part");
    case Family::TwoNormViscous: {
      const double shrink = 1.0 / (1.0 + gamma * psi.eps() / tau);
      for (Eigen::Index i = 0; i < z.size(); ++i) d[i] = shrink * soft_threshold(z[i], gamma * A);
      break;
    }
    case Family::SelfViscous: {
      // d = soft(z, theta) with theta = gamma (A + eps A^2 r / tau), r = |d|_1
      const double kappa = gamma * psi.eps() * A * A / tau;
      auto residual = [&](double r) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < z.size(); ++i) s += std::max(std::abs(z[i]) - gamma * A - kappa * r, 0.0);
        return s - r;
      };
      double lo = 0.0;
      double hi = norm1(z);
      for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) > 0.0) lo = mid; else hi = mid;
      }
      const double theta = gamma * A + kappa * 0.5 * (lo + hi);
      for (Eigen::Index i = 0; i < z.size(); ++i) d[i] = soft_threshold(z[i], theta);
      break;
    }
    case Family::Cosh:
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double w = solve_cosh_prox(std::abs(z[i]), tau, gamma, psi.n(), A);
        d[i] = std::copysign(tau * w, z[i]);
      }
      break;
  }
  return center + d;
}

}  // namespace rislab
