#include "rislab/bvcurve.hpp"
#include "rislab/parallel.hpp"
#include "rislab/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace rislab {

namespace {

// int A|u'|_1 over the part of the piece inside [a,b]
double piece_variation(const AcTrajectory& pc, double A, double a, double b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < pc.intervals(); ++k) {
    const double t0 = pc.t(k);
    const double t1 = pc.t(k + 1);
    const double w = norm1(pc.u(k + 1) - pc.u(k));
    if (t0 >= a && t1 <= b) {
      sum += A * w;
    } else if (t1 > t0 && t1 > a && t0 < b) {
      sum += A * w * (std::min(b, t1) - std::max(a, t0)) / (t1 - t0);
    }
  }
  return sum;
}

double piece_power_integral(const Energy& E, const AcTrajectory& pc) {
  double sum = 0.0;
  for (std::size_t k = 0; k < pc.intervals(); ++k) {
    sum += 0.5 * pc.dt(k) * (E.power_unchecked(pc.t(k), pc.u(k)) + E.power_unchecked(pc.t(k + 1), pc.u(k + 1)));
  }
  return sum;
}

void check_interval(const BvCurve& curve, double a, double b, const char* what) {
  if (!(a >= 0.0 && b <= curve.T && a <= b)) throw DomainError(std::string(what) + ": interval outside [0,T]");
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 50);
}

// Simpson rule along one straight segment
double segment_cost(const ContactPotential& p, const Energy& E, double t, const Vec& from, const Vec& to) {
  const Vec d = to - from;
  if (norm_inf(d) == 0.0) return 0.0;
  const double c0 = eval_contact(p, 0.0, d, -E.grad_unchecked(t, from));
  const double cm = eval_contact(p, 0.0, d, -E.grad_unchecked(t, 0.5 * (from + to)));
  const double c1 = eval_contact(p, 0.0, d, -E.grad_unchecked(t, to));
  return (c0 + 4.0 * cm + c1) / 6.0;
}

double total_cost(const ContactPotential& p, const Energy& E, double t, const std::vector<Vec>& nodes) {
  double sum = 0.0;
  for (std::size_t m = 0; m + 1 < nodes.size(); ++m) sum += segment_cost(p, E, t, nodes[m], nodes[m + 1]);
  return sum;
}

// coordinate descent on the interior nodes
double descend(const ContactPotential& p, const Energy& E, double t, std::vector<Vec>& nodes, double scale) {
  const std::size_t M = nodes.size();
  std::vector<double> seg(M - 1);
  for (std::size_t m = 0; m + 1 < M; ++m) seg[m] = segment_cost(p, E, t, nodes[m], nodes[m + 1]);
  double h = 0.25 * scale / static_cast<double>(M);
  const double h_min = 1e-10 * (scale + 1e-300);
  for (int pass = 0; pass < 4000 && h > h_min; ++pass) {
    bool improved = false;
    for (std::size_t m = 1; m + 1 < M; ++m) {
      for (Eigen::Index i = 0; i < nodes[m].size(); ++i) {
        for (double sgn : {1.0, -1.0}) {
          const double saved = nodes[m][i];
          nodes[m][i] = saved + sgn * h;
          const double a = segment_cost(p, E, t, nodes[m - 1], nodes[m]);
          const double b = segment_cost(p, E, t, nodes[m], nodes[m + 1]);
          if (a + b < seg[m - 1] + seg[m] - 1e-15 * (1.0 + seg[m - 1] + seg[m])) {
            seg[m - 1] = a;
            seg[m] = b;
            improved = true;
            break;
          }
          nodes[m][i] = saved;
        }
      }
    }
    if (!improved) h *= 0.5;
  }
  double sum = 0.0;
  for (double s : seg) sum += s;
  return sum;
}

}  // namespace

double var_psi0(const BvCurve& curve, double A, double a, double b) {
  check_interval(curve, a, b, "var_psi0");
  double sum = 0.0;
  for (const AcTrajectory& pc : curve.pieces) sum += piece_variation(pc, A, a, b);
  for (const Jump& jp : curve.jumps) {
    if (jp.t < a || jp.t > b || a == b) continue;
    if (jp.t > a) sum += A * norm1(jp.point - jp.left);
    if (jp.t < b) sum += A * norm1(jp.right - jp.point);
  }
  return sum;
}

double path_cost(const ContactPotential& p, const Energy& E, const TransitionPath& path) {
  return total_cost(p, E, path.t, path.nodes);
}

JumpCostResult jump_cost(const ContactPotential& p, const Energy& E, double t, const Vec& u_minus, const Vec& u_plus,
                         const JumpCostOptions& opts) {
  require_dim(u_minus, p.dim, "jump_cost");
  require_dim(u_plus, p.dim, "jump_cost");
  if (opts.nodes < 2) throw DomainError("jump_cost: nodes must be >= 2");
  JumpCostResult res;
  res.path = TransitionPath::straight(t, u_minus, u_plus, opts.nodes);
  const Vec delta = u_plus - u_minus;
  if (norm_inf(delta) == 0.0) return res;

  if (p.dim == 1) {
    const Vec unit = Vec::Ones(1);
    auto f = [&](double x) {
      Vec y(1);
      y[0] = x;
      return eval_contact(p, 0.0, unit, -E.grad_unchecked(t, y));
    };
    res.cost = integrate(f, std::min(u_minus[0], u_plus[0]), std::max(u_minus[0], u_plus[0]), opts.quad_tol);
    return res;
  }

  const int restarts = std::max(1, opts.restarts);
  const double scale = norm_inf(delta);
  std::vector<std::vector<Vec>> paths(static_cast<std::size_t>(restarts));
  std::vector<double> costs(static_cast<std::size_t>(restarts));
  parallel_for(static_cast<std::size_t>(restarts), opts.threads, [&](std::size_t r) {
    std::vector<Vec> nodes = res.path.nodes;
    if (r > 0) {
      CounterRng rng(opts.seed, r);
      Vec bump(delta.size());
      for (Eigen::Index i = 0; i < bump.size(); ++i) bump[i] = rng.uniform(-0.5, 0.5) * scale;
      for (std::size_t m = 1; m + 1 < nodes.size(); ++m) {
        const double s = static_cast<double>(m) / static_cast<double>(nodes.size() - 1);
        nodes[m] += std::sin(3.141592653589793 * s) * bump;
      }
    }
    costs[r] = descend(p, E, t, nodes, scale);
    paths[r] = std::move(nodes);
  });
  const auto best = static_cast<std::size_t>(std::min_element(costs.begin(), costs.end()) - costs.begin());
  res.cost = costs[best];
  res.path.nodes = paths[best];
  res.restart_costs = costs;

  const double lower = std::max(p.A * norm1(delta), E.value_unchecked(t, u_minus) - E.value_unchecked(t, u_plus));
  int agreeing = 0;
  for (double c : costs) {
    if (c - res.cost <= 1e-4 * (1.0 + res.cost)) ++agreeing;
  }
  res.certified = res.cost <= lower + 1e-6 * (1.0 + lower) || agreeing >= 2;
  return res;
}

VariationResult jump_variation(const ContactPotential& p, const Energy& E, const BvCurve& curve, double a, double b,
                               const JumpCostOptions& opts) {
  check_interval(curve, a, b, "jump_variation");
  VariationResult out;
  auto add = [&](double t, const Vec& from, const Vec& to) {
    if (norm_inf(to - from) == 0.0) return;
    const JumpCostResult r = jump_cost(p, E, t, from, to, opts);
    out.value += r.cost;
    out.certified = out.certified && r.certified;
  };
  for (const Jump& jp : curve.jumps) {
    if (jp.t < a || jp.t > b || a == b) continue;
    if (jp.t > a) add(jp.t, jp.left, jp.point);
    if (jp.t < b) add(jp.t, jp.point, jp.right);
  }
  return out;
}

VariationResult pseudo_total_variation(double A, const ContactPotential& p, const Energy& E, const BvCurve& curve,
                                       double a, double b, const JumpCostOptions& opts) {
  VariationResult out = jump_variation(p, E, curve, a, b, opts);
  for (const AcTrajectory& pc : curve.pieces) out.value += piece_variation(pc, A, a, b);
  return out;
}

double functional_J_n(const DissipationPotential& psi, const Energy& E, const AcTrajectory& traj) {
  require_dim(traj.u(0), psi.dim(), "functional_J_n");
  std::vector<double> conj(traj.nodes());
  std::vector<double> power(traj.nodes());
  for (std::size_t k = 0; k < traj.nodes(); ++k) {
    conj[k] = eval_conjugate(psi, -E.grad_unchecked(traj.t(k), traj.u(k)));
    if (conj[k] == kInf) return kInf;
    power[k] = E.power_unchecked(traj.t(k), traj.u(k));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < traj.intervals(); ++k) {
    const double h = traj.dt(k);
    sum += h * eval_potential(psi, traj.velocity(k));
    sum += 0.5 * h * (conj[k] + conj[k + 1]);
    sum -= 0.5 * h * (power[k] + power[k + 1]);
  }
  sum += E.value_unchecked(traj.t_end(), traj.values().back()) - E.value_unchecked(traj.t_begin(), traj.values().front());
  return sum;
}

double functional_J_limit(double A, const ContactPotential& p, const Energy& E, const BvCurve& curve,
                          double stability_tol, const JumpCostOptions& opts) {
  for (const AcTrajectory& pc : curve.pieces) {
    if (pc.intervals() == 0) continue;
    for (std::size_t k = 0; k < pc.nodes(); ++k) {
      if (norm_inf(E.grad_unchecked(pc.t(k), pc.u(k))) > A * (1.0 + stability_tol) + stability_tol) return kInf;
    }
  }
  double sum = pseudo_total_variation(A, p, E, curve, 0.0, curve.T, opts).value;
  for (const AcTrajectory& pc : curve.pieces) sum -= piece_power_integral(E, pc);
  sum += E.value_unchecked(curve.T, curve.final_value()) - E.value_unchecked(0.0, curve.initial_value());
  return sum;
}

BvCheckReport check_bv_solution(double A, const ContactPotential& p, const Energy& E, const BvCurve& curve, double tol,
                                const JumpCostOptions& opts) {
  BvCheckReport rep;
  auto is_jump_time = [&](double t) {
    for (const Jump& jp : curve.jumps) {
      if (jp.t == t) return true;
    }
    return false;
  };
  for (const AcTrajectory& pc : curve.pieces) {
    for (std::size_t k = 0; k < pc.nodes(); ++k) {
      if (is_jump_time(pc.t(k))) continue;
      const double excess = norm_inf(E.grad_unchecked(pc.t(k), pc.u(k))) - A;
      rep.stability_residual = std::max(rep.stability_residual, excess);
    }
  }

  const Vec u0 = curve.initial_value();
  const double e0 = E.value_unchecked(0.0, u0);
  double var = 0.0;
  double work = 0.0;
  auto record = [&](double t, const Vec& u) {
    rep.energy_residual = std::max(rep.energy_residual, std::abs(var + E.value_unchecked(t, u) - e0 - work));
  };
  auto cross = [&](double t, const Vec& from, const Vec& to) {
    if (norm_inf(to - from) == 0.0) return;
    const JumpCostResult r = jump_cost(p, E, t, from, to, opts);
    var += r.cost;
    rep.certified = rep.certified && r.certified;
  };
  for (std::size_t j = 0; j < curve.pieces.size(); ++j) {
    const AcTrajectory& pc = curve.pieces[j];
    if (j > 0) {
      const Jump& jp = curve.jumps[j - 1];
      cross(jp.t, jp.left, jp.point);
      record(jp.t, jp.point);
      cross(jp.t, jp.point, jp.right);
    }
    record(pc.t(0), pc.u(0));
    for (std::size_t k = 0; k < pc.intervals(); ++k) {
      var += A * norm1(pc.u(k + 1) - pc.u(k));
      work += 0.5 * pc.dt(k) * (E.power_unchecked(pc.t(k), pc.u(k)) + E.power_unchecked(pc.t(k + 1), pc.u(k + 1)));
      record(pc.t(k + 1), pc.u(k + 1));
    }
  }
  rep.pass = rep.stability_residual <= tol && rep.energy_residual <= tol;
  return rep;
}

TransitionReport check_optimal_transition(const ContactPotential& p, const Energy& E, const TransitionPath& path,
                                          double tol) {
  TransitionReport rep;
  const std::size_t M = path.nodes.size();
  if (M < 2) return rep;
  const double speed = static_cast<double>(M - 1);
  for (std::size_t m = 0; m + 1 < M; ++m) {
    const Vec v = speed * (path.nodes[m + 1] - path.nodes[m]);
    if (norm_inf(v) == 0.0) continue;
    const Vec xi = -E.grad_unchecked(path.t, 0.5 * (path.nodes[m] + path.nodes[m + 1]));
    const double val = eval_contact(p, 0.0, v, xi);
    const double pairing = v.dot(xi);
    const double gap = std::isfinite(val) ? std::abs(val - pairing) / (1.0 + std::abs(pairing)) : kInf;
    rep.worst_contact_gap = std::max(rep.worst_contact_gap, gap);
  }
  rep.contact_ok = rep.worst_contact_gap <= tol;
  rep.energy_drop = E.value_unchecked(path.t, path.nodes.front()) - E.value_unchecked(path.t, path.nodes.back());
  rep.cost = path_cost(p, E, path);
  rep.balance_ok = std::abs(rep.energy_drop - rep.cost) <= tol * (1.0 + std::abs(rep.cost));
  rep.pass = rep.contact_ok && rep.balance_ok;
  return rep;
}

}  // namespace rislab
