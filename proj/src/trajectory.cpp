#include "rislab/trajectory.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace rislab {

namespace {

void check_values(const std::vector<Vec>& values, const char* what) {
  if (values.empty()) throw DomainError(std::string(what) + ": at least one node required");
  const auto d = values.front().size();
  if (d < 1) throw DimensionError(std::string(what) + ": empty state vector");
  for (const Vec& v : values) {
    if (v.size() != d) throw DimensionError(std::string(what) + ": inconsistent state dimension");
    if (!v.allFinite()) throw DomainError(std::string(what) + ": non-finite state");
  }
}

}  // namespace

AcTrajectory AcTrajectory::from_times(const std::vector<double>& times, std::vector<Vec> values) {
  check_values(values, "AcTrajectory");
  if (times.size() != values.size()) throw DimensionError("AcTrajectory: times and values differ in length");
  AcTrajectory tr;
  tr.t_ = times;
  tr.values_ = std::move(values);
  tr.dt_.reserve(times.size() - 1);
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw DomainError("AcTrajectory: times must be strictly increasing");
    tr.dt_.push_back(times[k] - times[k - 1]);
  }
  return tr;
}

AcTrajectory AcTrajectory::from_increments(double t0, std::vector<double> increments, std::vector<Vec> values) {
  check_values(values, "AcTrajectory");
  if (increments.size() + 1 != values.size()) throw DimensionError("AcTrajectory: need one increment per interval");
  AcTrajectory tr;
  tr.t_.reserve(values.size());
  tr.t_.push_back(t0);
  for (double h : increments) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("AcTrajectory: increments must be positive");
    tr.t_.push_back(tr.t_.back() + h);
  }
  tr.dt_ = std::move(increments);
  tr.values_ = std::move(values);
  return tr;
}

AcTrajectory AcTrajectory::point(double t, const Vec& value) { return from_times({t}, {value}); }

double AcTrajectory::duration() const {
  double s = 0.0;
  for (double h : dt_) s += h;
  return s;
}

Vec AcTrajectory::value_at(double t) const {
  if (t <= t_.front()) return values_.front();
  if (t >= t_.back()) return values_.back();
  auto k = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin());
  // t_[k-1] <= t < t_[k]
  const double span = t_[k] - t_[k - 1];
  if (!(span > 0.0)) return values_[k];
  const double w = (t - t_[k - 1]) / span;
  return (1.0 - w) * values_[k - 1] + w * values_[k];
}

TransitionPath TransitionPath::straight(double t, const Vec& from, const Vec& to, int nodes) {
  if (nodes < 2) throw DomainError("TransitionPath: at least two nodes required");
  TransitionPath p;
  p.t = t;
  p.nodes.reserve(static_cast<std::size_t>(nodes));
  for (int m = 0; m < nodes; ++m) {
    const double r = static_cast<double>(m) / (nodes - 1);
    p.nodes.push_back((1.0 - r) * from + r * to);
  }
  p.nodes.back() = to;
  return p;
}

void BvCurve::validate(double tol) const {
  if (!(T > 0.0)) throw DomainError("BvCurve: T must be positive");
  if (pieces.size() != jumps.size() + 1) throw DomainError("BvCurve: need exactly one more piece than jumps");
  const int d = dim();
  auto close = [tol](const Vec& a, const Vec& b) { return norm_inf(a - b) <= tol * (1.0 + norm_inf(a)); };
  auto tclose = [tol, this](double a, double b) { return std::abs(a - b) <= tol * (1.0 + T); };
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const AcTrajectory& pc = pieces[k];
    if (pc.nodes() == 0) throw DomainError("BvCurve: piece " + std::to_string(k) + " is empty");
    if (pc.dim() != d) throw DimensionError("BvCurve: piece " + std::to_string(k) + " has wrong dimension");
    const double start = k == 0 ? 0.0 : jumps[k - 1].t;
    const double end = k == jumps.size() ? T : jumps[k].t;
    if (!tclose(pc.t_begin(), start) || !tclose(pc.t_end(), end)) {
      throw DomainError("BvCurve: piece " + std::to_string(k) + " does not span its interval");
    }
  }
  for (std::size_t j = 0; j < jumps.size(); ++j) {
    const Jump& jp = jumps[j];
    if (jp.left.size() != d || jp.point.size() != d || jp.right.size() != d) {
      throw DimensionError("BvCurve: jump " + std::to_string(j) + " has wrong dimension");
    }
    if (j > 0 && !(jp.t > jumps[j - 1].t)) throw DomainError("BvCurve: jump times must be strictly increasing");
    if (jp.t < 0.0 || jp.t > T) throw DomainError("BvCurve: jump " + std::to_string(j) + " outside [0,T]");
    if (!close(pieces[j].values().back(), jp.left)) {
      throw DomainError("BvCurve: jump " + std::to_string(j) + " left value does not match piece end");
    }
    if (!close(pieces[j + 1].values().front(), jp.right)) {
      throw DomainError("BvCurve: jump " + std::to_string(j) + " right value does not match piece start");
    }
  }
}

Vec BvCurve::initial_value() const {
  if (!jumps.empty() && jumps.front().t == 0.0) return jumps.front().point;
  return pieces.front().values().front();
}

Vec BvCurve::final_value() const {
  if (!jumps.empty() && jumps.back().t == T) return jumps.back().point;
  return pieces.back().values().back();
}

Vec BvCurve::value_at(double t) const {
  for (std::size_t j = 0; j < jumps.size(); ++j) {
    if (t == jumps[j].t) return jumps[j].point;
    if (t < jumps[j].t) return pieces[j].value_at(t);
  }
  return pieces.back().value_at(t);
}

BvCurve BvCurve::from_trajectory(const AcTrajectory& traj) {
  BvCurve c;
  c.T = traj.t_end();
  c.pieces.push_back(traj);
  return c;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const AcTrajectory& traj) {
  os << "t";
  for (int i = 0; i < traj.dim(); ++i) os << ",u_" << (i + 1);
  os << '\n';
  for (std::size_t k = 0; k < traj.nodes(); ++k) {
    os << format_number(traj.t(k));
    for (Eigen::Index i = 0; i < traj.u(k).size(); ++i) os << ',' << format_number(traj.u(k)[i]);
    os << '\n';
  }
}

AcTrajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("trajectory csv: missing header");
  std::vector<double> times;
  std::vector<Vec> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() < 2) throw DomainError("trajectory csv: row needs t and at least one component");
    times.push_back(row.front());
    values.push_back(Eigen::Map<Vec>(row.data() + 1, static_cast<Eigen::Index>(row.size() - 1)));
  }
  // repeated times (printed at 12 digits) are not representable; drop them
  std::vector<double> t_out;
  std::vector<Vec> v_out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!t_out.empty() && !(times[k] > t_out.back())) {
      v_out.back() = values[k];
      continue;
    }
    t_out.push_back(times[k]);
    v_out.push_back(values[k]);
  }
  return AcTrajectory::from_times(t_out, std::move(v_out));
}

namespace {

using nlohmann::json;

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec json_vec(const json& a, const std::string& where) {
  if (!a.is_array()) throw DomainError(where + ": expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw DomainError(where + "[" + std::to_string(i) + "]: expected a number");
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

}  // namespace

std::string bv_curve_to_json(const BvCurve& curve) {
  json j;
  j["T"] = curve.T;
  j["ac_pieces"] = json::array();
  for (const AcTrajectory& pc : curve.pieces) {
    json p;
    p["t"] = pc.times();
    p["u"] = json::array();
    for (const Vec& v : pc.values()) p["u"].push_back(vec_json(v));
    j["ac_pieces"].push_back(p);
  }
  j["jumps"] = json::array();
  for (const Jump& jp : curve.jumps) {
    j["jumps"].push_back({{"t", jp.t}, {"left", vec_json(jp.left)}, {"point", vec_json(jp.point)}, {"right", vec_json(jp.right)}});
  }
  return j.dump();
}

BvCurve bv_curve_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("curve: invalid JSON: ") + e.what());
  }
  BvCurve c;
  if (!j.contains("ac_pieces") || !j["ac_pieces"].is_array()) throw DomainError("curve.ac_pieces: missing array");
  for (std::size_t k = 0; k < j["ac_pieces"].size(); ++k) {
    const json& p = j["ac_pieces"][k];
    const std::string where = "curve.ac_pieces[" + std::to_string(k) + "]";
    if (!p.contains("t") || !p.contains("u")) throw DomainError(where + ": needs t and u");
    const Vec t = json_vec(p["t"], where + ".t");
    std::vector<Vec> u;
    for (std::size_t m = 0; m < p["u"].size(); ++m) u.push_back(json_vec(p["u"][m], where + ".u"));
    c.pieces.push_back(AcTrajectory::from_times(std::vector<double>(t.data(), t.data() + t.size()), std::move(u)));
  }
  if (j.contains("jumps")) {
    for (std::size_t k = 0; k < j["jumps"].size(); ++k) {
      const json& q = j["jumps"][k];
      const std::string where = "curve.jumps[" + std::to_string(k) + "]";
      Jump jp;
      if (!q.contains("t") || !q["t"].is_number()) throw DomainError(where + ".t: expected a number");
      jp.t = q["t"].get<double>();
      jp.left = json_vec(q.value("left", json()), where + ".left");
      jp.point = json_vec(q.value("point", json()), where + ".point");
      jp.right = json_vec(q.value("right", json()), where + ".right");
      c.jumps.push_back(std::move(jp));
    }
  }
  if (j.contains("T")) {
    c.T = j["T"].get<double>();
  } else if (!c.pieces.empty()) {
    c.T = c.pieces.back().t_end();
  }
  c.validate();
  return c;
}

}  // namespace rislab
