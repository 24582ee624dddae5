#include "rislab/energy.hpp"
#include "rislab/random.hpp"

#include <algorithm>
#include <cmath>

namespace rislab {

Loading Loading::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw DomainError("loading: non-finite coefficient");
  }
  Loading l;
  l.coeffs_ = std::move(coeffs);
  return l;
}

Loading Loading::piecewise_linear(std::vector<double> knots_t, std::vector<double> knots_v) {
  if (knots_t.empty() || knots_t.size() != knots_v.size()) {
    throw DomainError("loading: knots_t and knots_v must be non-empty and of equal length");
  }
  for (std::size_t k = 1; k < knots_t.size(); ++k) {
    if (!(knots_t[k] > knots_t[k - 1])) throw DomainError("loading: knots_t must be strictly increasing");
  }
  Loading l;
  l.knots_t_ = std::move(knots_t);
  l.knots_v_ = std::move(knots_v);
  return l;
}

double Loading::value(double t) const {
  if (is_polynomial()) {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }
  if (t <= knots_t_.front()) return knots_v_.front();
  if (t >= knots_t_.back()) return knots_v_.back();
  const auto k = static_cast<std::size_t>(std::upper_bound(knots_t_.begin(), knots_t_.end(), t) - knots_t_.begin());
  const double w = (t - knots_t_[k - 1]) / (knots_t_[k] - knots_t_[k - 1]);
  return (1.0 - w) * knots_v_[k - 1] + w * knots_v_[k];
}

double Loading::rate(double t) const {
  if (is_polynomial()) {
    double acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * coeffs_[k];
    return acc;
  }
  if (t < knots_t_.front() || t >= knots_t_.back()) return 0.0;
  const auto k = static_cast<std::size_t>(std::upper_bound(knots_t_.begin(), knots_t_.end(), t) - knots_t_.begin());
  return (knots_v_[k] - knots_v_[k - 1]) / (knots_t_[k] - knots_t_[k - 1]);
}

double Loading::max_rate(double t0, double t1) const {
  if (!is_polynomial()) {
    double m = 0.0;
    for (std::size_t k = 1; k < knots_t_.size(); ++k) {
      if (knots_t_[k] < t0 || knots_t_[k - 1] > t1) continue;
      m = std::max(m, std::abs((knots_v_[k] - knots_v_[k - 1]) / (knots_t_[k] - knots_t_[k - 1])));
    }
    return m;
  }
  // |l'(t)| <= sum_k k |a_k| max(|t0|,|t1|)^{k-1}
  const double r = std::max(std::abs(t0), std::abs(t1));
  double bound = 0.0;
  double pw = 1.0;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    bound += static_cast<double>(k) * std::abs(coeffs_[k]) * pw;
    pw *= r;
  }
  return bound;
}

namespace {

double max_abs_on(const Loading& l, double t0, double t1) {
  if (!l.is_polynomial()) {
    double m = std::max(std::abs(l.value(t0)), std::abs(l.value(t1)));
    for (std::size_t k = 0; k < l.knots_t().size(); ++k) {
      if (l.knots_t()[k] >= t0 && l.knots_t()[k] <= t1) m = std::max(m, std::abs(l.knots_v()[k]));
    }
    return m;
  }
  const double r = std::max(std::abs(t0), std::abs(t1));
  double bound = 0.0;
  double pw = 1.0;
  for (double c : l.coeffs()) {
    bound += std::abs(c) * pw;
    pw *= r;
  }
  return bound;
}

}  // namespace

Energy::Energy(Kind kind, double T, double box_radius, std::vector<Well> wells, std::vector<Loading> loads)
    : Energy(kind, T, box_radius, wells, loads, derive_constants(T, box_radius, wells, loads)) {}

Energy::Energy(Kind kind, double T, double box_radius, std::vector<Well> wells, std::vector<Loading> loads,
               EnergyConstants constants)
    : kind_(kind), T_(T), box_(box_radius), wells_(std::move(wells)), loads_(std::move(loads)), constants_(constants) {
  if (!(T_ > 0.0) || !std::isfinite(T_)) throw DomainError("energy: horizon T must be positive");
  if (!(box_ > 0.0)) throw DomainError("energy: box radius must be positive");
  if (wells_.empty()) throw DimensionError("energy: at least one coordinate required");
  if (loads_.size() != wells_.size()) throw DimensionError("energy: one loading per coordinate required");
}

Energy Energy::quadratic(int dim, double k, double T, double box_radius) {
  if (dim < 1) throw DimensionError("energy: dimension must be >= 1");
  std::vector<Well> wells(static_cast<std::size_t>(dim), Well{0.0, k, 0.0});
  std::vector<Loading> loads(static_cast<std::size_t>(dim), Loading::zero());
  return {Kind::Quadratic, T, box_radius, std::move(wells), std::move(loads)};
}

Energy Energy::loaded_quadratic(double k, std::vector<Loading> loads, double T, double box_radius) {
  std::vector<Well> wells(loads.size(), Well{0.0, k, 0.0});
  return {Kind::Quadratic, T, box_radius, std::move(wells), std::move(loads)};
}

Energy Energy::double_well(int dim, double T, double box_radius) {
  if (dim < 1) throw DimensionError("energy: dimension must be >= 1");
  std::vector<Well> wells(static_cast<std::size_t>(dim), Well{1.0, -1.0, 0.0});
  std::vector<Loading> loads(static_cast<std::size_t>(dim), Loading::polynomial({0.0, 1.0}));
  return {Kind::PolynomialLoaded, T, box_radius, std::move(wells), std::move(loads)};
}

EnergyConstants Energy::derive_constants(double T, double box, const std::vector<Well>& wells,
                                         const std::vector<Loading>& loads) {
  // Crude but valid bounds on the box. C1 = 0 keeps the power estimate
  // independent of the sign of E.
  EnergyConstants c;
  double grad_sq = 0.0;
  double rate_sq = 0.0;
  double power = 0.0;
  for (std::size_t i = 0; i < wells.size(); ++i) {
    const Well& w = wells[i];
    const double slope = std::abs(w.c4) * box * box * box + std::abs(w.c2) * box + std::abs(w.c1);
    const double g = slope + max_abs_on(loads[i], 0.0, T);
    const double r = loads[i].max_rate(0.0, T);
    grad_sq += g * g;
    rate_sq += r * r;
    power += r * box;
  }
  c.C1 = 0.0;
  c.C2 = power;
  c.CE = std::sqrt(grad_sq);
  c.LE = std::sqrt(rate_sq);
  return c;
}

std::pair<double, double> Energy::gradient_range(int i, double u_i, double t0, double t1) const {
  const auto k = static_cast<std::size_t>(i);
  const double w = wells_[k].slope(u_i);
  const Loading& l = loads_[k];
  const double a = std::clamp(t0, 0.0, T_);
  const double b = std::clamp(t1, 0.0, T_);
  const double la = l.value(a);
  const double spread = l.max_rate(a, b) * (b - a);
  return {w - la - spread, w - la + spread};
}

double Energy::value_unchecked(double t, const Vec& u) const {
  t = std::clamp(t, 0.0, T_);
  double e = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    e += wells_[k].value(u[i]) - loads_[k].value(t) * u[i];
  }
  return e;
}

Vec Energy::grad_unchecked(double t, const Vec& u) const {
  t = std::clamp(t, 0.0, T_);
  Vec g(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    g[i] = wells_[k].slope(u[i]) - loads_[k].value(t);
  }
  return g;
}

double Energy::power_unchecked(double t, const Vec& u) const {
  t = std::clamp(t, 0.0, T_);
  double p = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) p -= loads_[static_cast<std::size_t>(i)].rate(t) * u[i];
  return p;
}

namespace {

void check_args(const Energy& E, double t, const Vec& u, const char* what) {
  require_dim(u, E.dim(), what);
  const double slack = 1e-12 * (1.0 + E.horizon());
  if (!(t >= -slack && t <= E.horizon() + slack)) {
    throw DomainError(std::string(what) + ": time " + std::to_string(t) + " outside [0,T]");
  }
}

}  // namespace

double energy_eval(const Energy& E, double t, const Vec& u) {
  check_args(E, t, u, "energy_eval");
  return E.value_unchecked(t, u);
}

Vec energy_grad(const Energy& E, double t, const Vec& u) {
  check_args(E, t, u, "energy_grad");
  return E.grad_unchecked(t, u);
}

double energy_power(const Energy& E, double t, const Vec& u) {
  check_args(E, t, u, "energy_power");
  return E.power_unchecked(t, u);
}

RegularityReport validate_regularity(const Energy& E, double box, int samples, std::uint64_t seed) {
  if (!(box > 0.0) || !std::isfinite(box)) throw DomainError("validate_regularity: box must be bounded");
  RegularityReport rep;
  CounterRng rng(seed, 0);
  const EnergyConstants& c = E.constants();
  const double T = E.horizon();
  Vec u(E.dim());
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = rng.uniform(-box, box);
    const double t1 = rng.uniform(0.0, T);
    const double t2 = rng.uniform(0.0, T);
    const double e = E.value_unchecked(t1, u);
    const double pw = E.power_unchecked(t1, u);
    rep.power_violation = std::max(rep.power_violation, std::abs(pw) - c.C1 * e - c.C2);
    const Vec g1 = E.grad_unchecked(t1, u);
    const Vec g2 = E.grad_unchecked(t2, u);
    rep.lipschitz_violation = std::max(rep.lipschitz_violation, (g1 - g2).norm() - c.LE * std::abs(t1 - t2));
    rep.gradient_violation = std::max(rep.gradient_violation, g1.norm() - c.CE);
  }
  rep.samples = samples;
  // tiny round-off above a sharp constant is not a violation
  auto clip = [](double v) { return v > 1e-12 ? v : 0.0; };
  rep.power_violation = clip(rep.power_violation);
  rep.lipschitz_violation = clip(rep.lipschitz_violation);
  rep.gradient_violation = clip(rep.gradient_violation);
  return rep;
}

}  // namespace rislab
