#include "rislab/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rislab::benchmark {

Energy energy(double T, double box) { return Energy::double_well(1, T, box); }

double fold_state() { return -1.0 / std::sqrt(3.0); }

double jump_time(double A) { return 2.0 / (3.0 * std::sqrt(3.0)) + A; }

double right_root(double c) {
  // Newton from the right is monotone for the convex branch u > 1/sqrt(3)
  double u = std::max(2.0, std::cbrt(std::abs(c)) + 1.5);
  for (int it = 0; it < 100; ++it) {
    const double f = u * u * u - u - c;
    const double step = f / (3.0 * u * u - 1.0);
    u -= step;
    if (std::abs(step) <= 1e-16 * std::abs(u)) break;
  }
  return u;
}

namespace {

Vec scalar(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

}  // namespace

BvCurve reference_curve(double A, double T, int samples, double target_shift) {
  if (samples < 2) throw DomainError("reference_curve: samples must be >= 2");
  const double ts = jump_time(A);
  if (!(A > 0.0) || !(T > ts)) throw DomainError("reference_curve: need A > 0 and T beyond the jump time");

  std::vector<double> t;
  std::vector<Vec> u;
  // stuck phase: DE(t,-1) = -t stays in [-A, 0]
  for (int k = 0; k < samples; ++k) {
    t.push_back(A * k / (samples - 1));
    u.push_back(scalar(-1.0));
  }
  // left branch, uniform in u
  const double uf = fold_state();
  for (int k = 1; k < samples; ++k) {
    const double x = -1.0 + (uf + 1.0) * k / (samples - 1);
    t.push_back(x * x * x - x + A);
    u.push_back(scalar(x));
  }
  t.back() = ts;
  u.back() = scalar(uf);

  const double up = right_root(ts - A);
  const double uT = right_root(T - A);
  std::vector<double> t2;
  std::vector<Vec> u2;
  for (int k = 0; k < samples; ++k) {
    const double x = up + (uT - up) * k / (samples - 1);
    t2.push_back(k == 0 ? ts : (k == samples - 1 ? T : x * x * x - x + A));
    u2.push_back(scalar(x + target_shift));
  }

  BvCurve c;
  c.T = T;
  c.pieces.push_back(AcTrajectory::from_times(t, std::move(u)));
  c.pieces.push_back(AcTrajectory::from_times(t2, std::move(u2)));
  Jump jp;
  jp.t = ts;
  jp.left = scalar(uf);
  jp.point = scalar(uf);
  jp.right = scalar(up + target_shift);
  c.jumps.push_back(jp);
  c.validate();
  return c;
}

}  // namespace rislab::benchmark
