#pragma once

#include "rislab/core.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace rislab {

/// Scalar loading l(t), either a polynomial sum_k a_k t^k or piecewise linear
/// through knots (constant extrapolation outside the knot range).
class Loading {
 public:
  static Loading polynomial(std::vector<double> coeffs);
  static Loading piecewise_linear(std::vector<double> knots_t, std::vector<double> knots_v);
  static Loading zero() { return polynomial({0.0}); }

  double value(double t) const;
  double rate(double t) const;
  /// sup |l'| on [t0, t1]
  double max_rate(double t0, double t1) const;

  bool is_polynomial() const { return knots_t_.empty(); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::vector<double>& knots_t() const { return knots_t_; }
  const std::vector<double>& knots_v() const { return knots_v_; }

 private:
  std::vector<double> coeffs_;
  std::vector<double> knots_t_;
  std::vector<double> knots_v_;
};

/// W(x) = c4 x^4/4 + c2 x^2/2 + c1 x
struct Well {
  double c4 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;

  double value(double x) const { return 0.25 * c4 * x * x * x * x + 0.5 * c2 * x * x + c1 * x; }
  double slope(double x) const { return c4 * x * x * x + c2 * x + c1; }
};

struct EnergyConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  double CE = 0.0;  // sup |DE| on the box
  double LE = 0.0;  // Lipschitz constant of t -> DE(t,u)
};

/// Separable energy E(t,u) = sum_i W_i(u_i) - <l(t), u> on [0,T], with states
/// confined to the box |u|_inf <= box_radius.
class Energy {
 public:
  enum class Kind { PolynomialLoaded, Quadratic };

  /// Constants are derived from the box unless given explicitly.
  Energy(Kind kind, double T, double box_radius, std::vector<Well> wells, std::vector<Loading> loads);
  Energy(Kind kind, double T, double box_radius, std::vector<Well> wells, std::vector<Loading> loads,
         EnergyConstants constants);

  /// E(t,u) = (k/2)|u|^2, autonomous
  static Energy quadratic(int dim, double k, double T, double box_radius);
  /// E(t,u) = (k/2)|u|^2 - <l(t), u>
  static Energy loaded_quadratic(double k, std::vector<Loading> loads, double T, double box_radius);
  /// W(x) = x^4/4 - x^2/2, l(t) = t in every coordinate.
  static Energy double_well(int dim, double T, double box_radius);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(wells_.size()); }
  double horizon() const { return T_; }
  double box_radius() const { return box_; }
  const EnergyConstants& constants() const { return constants_; }
  const std::vector<Well>& wells() const { return wells_; }
  const std::vector<Loading>& loads() const { return loads_; }

  /// Range of D_iE(s,u) over s in [t0,t1] for fixed u_i (used by thinning).
  std::pair<double, double> gradient_range(int i, double u_i, double t0, double t1) const;

  // Unchecked evaluation, t is only clamped to [0,T].
  double value_unchecked(double t, const Vec& u) const;
  Vec grad_unchecked(double t, const Vec& u) const;
  double power_unchecked(double t, const Vec& u) const;

 private:
  static EnergyConstants derive_constants(double T, double box, const std::vector<Well>& wells,
                                          const std::vector<Loading>& loads);

  Kind kind_;
  double T_;
  double box_;
  std::vector<Well> wells_;
  std::vector<Loading> loads_;
  EnergyConstants constants_;
};

double energy_eval(const Energy& E, double t, const Vec& u);
Vec energy_grad(const Energy& E, double t, const Vec& u);
/// partial_t E
double energy_power(const Energy& E, double t, const Vec& u);

struct RegularityReport {
  double power_violation = 0.0;      // max (|d_t E| - C1 E - C2)_+
  double lipschitz_violation = 0.0;  // max (|DE(t1,u) - DE(t2,u)| - LE |t1 - t2|)_+
  double gradient_violation = 0.0;   // max (|DE| - CE)_+
  int samples = 0;

  bool ok() const { return power_violation == 0.0 && lipschitz_violation == 0.0 && gradient_violation == 0.0; }
};

/// Monte Carlo audit of the declared constants on [0,T] x {|u|_inf <= box}.
RegularityReport validate_regularity(const Energy& E, double box, int samples, std::uint64_t seed = 1);

}  // namespace rislab
