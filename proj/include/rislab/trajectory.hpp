#pragma once

#include "rislab/core.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rislab {

/// Sampled absolutely continuous curve, linear between nodes.
///
/// Interval lengths are stored explicitly. Inside a steep transition the
/// increments can drop below the spacing of doubles near t, so node times
/// obtained by summation may repeat while every interval is still positive.
class AcTrajectory {
 public:
  AcTrajectory() = default;

  /// times must be strictly increasing
  static AcTrajectory from_times(const std::vector<double>& times, std::vector<Vec> values);
  /// every increment must be positive
  static AcTrajectory from_increments(double t0, std::vector<double> increments, std::vector<Vec> values);
  /// single node (zero-length piece)
  static AcTrajectory point(double t, const Vec& value);

  std::size_t nodes() const { return values_.size(); }
  std::size_t intervals() const { return dt_.size(); }
  int dim() const { return values_.empty() ? 0 : static_cast<int>(values_.front().size()); }

  double t(std::size_t k) const { return t_[k]; }
  double dt(std::size_t k) const { return dt_[k]; }
  const Vec& u(std::size_t k) const { return values_[k]; }
  const std::vector<Vec>& values() const { return values_; }
  const std::vector<double>& times() const { return t_; }

  double t_begin() const { return t_.front(); }
  double t_end() const { return t_.back(); }
  /// sum of the stored increments
  double duration() const;

  /// Difference quotient on interval k.
  Vec velocity(std::size_t k) const { return (values_[k + 1] - values_[k]) / dt_[k]; }

  /// Linear interpolation, clamped to the end values outside the range.
  Vec value_at(double t) const;

 private:
  std::vector<double> t_;
  std::vector<double> dt_;
  std::vector<Vec> values_;
};

/// Piecewise-linear path at frozen time, nodes at uniform parameters in [0,1].
struct TransitionPath {
  double t = 0.0;
  std::vector<Vec> nodes;

  static TransitionPath straight(double t, const Vec& from, const Vec& to, int nodes);
};

struct Jump {
  double t = 0.0;
  Vec left;
  Vec point;
  Vec right;
  // optional transition paths left -> point and point -> right
  std::optional<TransitionPath> path_in;
  std::optional<TransitionPath> path_out;
};

/// Curve on [0,T] made of absolutely continuous pieces separated by finitely
/// many jumps. pieces.size() == jumps.size() + 1; piece k ends at jump k's
/// left value and piece k+1 starts at its right value. A jump at 0 or T is
/// bordered by a single-node piece.
struct BvCurve {
  double T = 0.0;
  std::vector<AcTrajectory> pieces;
  std::vector<Jump> jumps;

  int dim() const { return pieces.empty() ? 0 : pieces.front().dim(); }

  /// Throws DomainError naming the offending piece or jump.
  void validate(double tol = 1e-9) const;

  Vec initial_value() const;
  /// u(T), the point value when a jump sits at T
  Vec final_value() const;
  /// u(t) for a non-jump time; at a jump time returns the point value
  Vec value_at(double t) const;

  /// Curve without jumps wrapping one trajectory.
  static BvCurve from_trajectory(const AcTrajectory& traj);
};

// CSV: header "t,u_1,...,u_d", one row per node, 12 significant digits.
void write_trajectory_csv(std::ostream& os, const AcTrajectory& traj);
AcTrajectory read_trajectory_csv(std::istream& is);

// JSON: {"T":..., "ac_pieces":[{"t":[...],"u":[[...]]}], "jumps":[{"t","left","point","right"}]}
std::string bv_curve_to_json(const BvCurve& curve);
BvCurve bv_curve_from_json(const std::string& text);

/// printf("%.12g")
std::string format_number(double x);

}  // namespace rislab
