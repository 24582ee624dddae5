#include "rislab/cli.hpp"
#include "rislab/benchmark.hpp"
#include "rislab/bvcurve.hpp"
#include "rislab/config.hpp"
#include "rislab/parallel.hpp"
#include "rislab/random.hpp"
#include "rislab/reparam.hpp"
#include "rislab/solver.hpp"
#include "rislab/stochastic.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace rislab::cli {

namespace fs = std::filesystem;
using config::ConfigError;
using config::json;
using config::Node;
using config::number;

namespace {

struct Context {
  json doc;
  std::string base_dir;
  fs::path out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::ostream* out = nullptr;

  Node root() const { return {doc, ""}; }
  std::uint64_t seed_or(std::uint64_t fallback) const {
    if (seed) return *seed;
    const Node r = root();
    return r.has("seed") ? static_cast<std::uint64_t>(r.integer("seed")) : fallback;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

void write_json(const Context& ctx, const std::string& name, const json& j) {
  write_text(ctx.out_dir / name, j.dump(2) + "\n");
}

void write_csv(const Context& ctx, const std::string& name, const AcTrajectory& traj) {
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  write_text(ctx.out_dir / name, os.str());
}

Vec state_vector(const Node& n, const std::string& key, int dim) {
  const Vec v = n.vector(key);
  if (v.size() != dim) n.at(key).fail("expected " + std::to_string(dim) + " components");
  return v;
}

int positive_int(const Node& n, const std::string& key, long long fallback) {
  const long long v = n.integer(key, fallback);
  if (v < 1) n.at(key).fail("must be >= 1");
  return static_cast<int>(v);
}

JumpCostOptions jump_options(const Context& ctx) {
  JumpCostOptions o;
  const Node r = ctx.root();
  if (r.has("jump_cost")) {
    const Node j = r.at("jump_cost");
    o.nodes = positive_int(j, "nodes", o.nodes);
    o.restarts = positive_int(j, "restarts", o.restarts);
  }
  o.seed = ctx.seed_or(o.seed);
  o.threads = ctx.threads;
  return o;
}

double sup_distance(const AcTrajectory& traj, const BvCurve& curve, double exclusion) {
  double worst = 0.0;
  for (const AcTrajectory& pc : curve.pieces) {
    for (double t : pc.times()) {
      bool skip = false;
      for (const Jump& jp : curve.jumps) skip = skip || std::abs(t - jp.t) <= exclusion;
      if (!skip) worst = std::max(worst, norm_inf(traj.value_at(t) - curve.value_at(t)));
    }
  }
  return worst;
}

ContactPotential default_contact(const Context& ctx, Family family, double A, int dim) {
  const Node r = ctx.root();
  if (r.has("contact")) return config::parse_contact(r.at("contact"), dim);
  ContactPotential p;
  p.family = family == Family::Cosh ? ContactFamily::Stochastic : ContactFamily::VanishingViscosityTwoNorm;
  p.A = A;
  p.dim = dim;
  return p;
}

int cmd_solve(const Context& ctx) {
  const Node r = ctx.root();
  const Energy E = config::parse_energy(r.at("energy"));
  const DissipationPotential psi = config::parse_potential(r.at("potential"), E.dim());
  const Vec u0 = state_vector(r, "u0", E.dim());
  static const json kEmpty = json::object();
  const Node s = r.has("solver") ? r.at("solver") : Node(kEmpty, "solver");
  const std::string method = s.has("method") ? s.string("method") : "explicit";
  const int steps = positive_int(s, "steps", 20000);
  const double tol = r.positive("tolerance", 1e-2);

  AcTrajectory traj;
  if (method == "explicit") {
    const std::string scheme = s.string("scheme", "rk4");
    if (scheme != "rk4" && scheme != "euler") s.at("scheme").fail("expected 'rk4' or 'euler'");
    if (psi.family() != Family::Cosh && psi.family() != Family::TwoNormViscous) {
      r.at("potential").at("family").fail("explicit solver needs cosh or two_norm_viscous");
    }
    traj = solve_explicit(psi, E, u0, steps, scheme == "rk4" ? Scheme::Rk4 : Scheme::Euler);
  } else if (method == "minimizing_movement") {
    if (psi.family() == Family::OneHom) r.at("potential").at("family").fail("minimizing movements need a viscous family");
    traj = solve_minimizing_movement(psi, E, u0, steps, s.positive("inner_tol", 1e-10));
  } else {
    s.at("method").fail("expected 'explicit' or 'minimizing_movement'");
  }
  const double residual = residual_inclusion(psi, E, traj);
  const double jn = functional_J_n(psi, E, traj);
  write_csv(ctx, "trajectory.csv", traj);
  json rep = {{"method", method},
              {"nodes", traj.nodes()},
              {"residual", number(residual)},
              {"J_n", number(jn)},
              {"final_state", config::vec(traj.values().back())},
              {"tolerance", number(tol)},
              {"pass", residual <= tol}};
  write_json(ctx, "solve.json", rep);
  *ctx.out << "residual " << format_number(residual) << " J_n " << format_number(jn) << '\n';
  return residual <= tol ? kPass : kNumericalFailure;
}

int cmd_jump_cost(const Context& ctx) {
  const Node r = ctx.root();
  const Energy E = config::parse_energy(r.at("energy"));
  const ContactPotential p = config::parse_contact(r.at("contact"), E.dim());
  const double t = r.number("t");
  const Vec a = state_vector(r, "u_minus", E.dim());
  const Vec b = state_vector(r, "u_plus", E.dim());
  JumpCostOptions o = jump_options(ctx);
  o.nodes = positive_int(r, "nodes", o.nodes);
  o.restarts = positive_int(r, "restarts", o.restarts);
  const JumpCostResult res = jump_cost(p, E, t, a, b, o);
  const double lower = std::max(p.A * norm1(b - a), E.value_unchecked(t, a) - E.value_unchecked(t, b));
  json path = json::array();
  for (const Vec& v : res.path.nodes) path.push_back(config::vec(v));
  json costs = json::array();
  for (double c : res.restart_costs) costs.push_back(number(c));
  write_json(ctx, "jump_cost.json",
             {{"cost", number(res.cost)}, {"certified", res.certified}, {"lower_bound", number(lower)},
              {"restart_costs", costs}, {"path", path}});
  *ctx.out << "cost " << format_number(res.cost) << (res.certified ? " certified" : " not certified") << '\n';
  return res.certified ? kPass : kNumericalFailure;
}

int cmd_functional(const Context& ctx) {
  const Node r = ctx.root();
  const Energy E = config::parse_energy(r.at("energy"));
  const ContactPotential p = config::parse_contact(r.at("contact"), E.dim());
  const BvCurve curve = config::parse_curve(r.at("curve"), ctx.base_dir);
  const JumpCostOptions o = jump_options(ctx);
  const VariationResult ptv = pseudo_total_variation(p.A, p, E, curve, 0.0, curve.T, o);
  const double jl = functional_J_limit(p.A, p, E, curve, r.positive("stability_tol", 1e-8), o);
  json rep = {{"J_limit", number(jl)},
              {"pseudo_total_variation", number(ptv.value)},
              {"var_psi0", number(var_psi0(curve, p.A, 0.0, curve.T))},
              {"certified", ptv.certified}};
  if (r.has("trajectory")) {
    std::string path = r.string("trajectory");
    if (!path.empty() && path.front() != '/' && !ctx.base_dir.empty()) path = ctx.base_dir + "/" + path;
    std::ifstream in(path);
    if (!in) r.at("trajectory").fail("cannot open '" + path + "'");
    const AcTrajectory traj = read_trajectory_csv(in);
    const DissipationPotential psi = config::parse_potential(r.at("potential"), E.dim());
    rep["J_n"] = number(functional_J_n(psi, E, traj));
  }
  write_json(ctx, "functional.json", rep);
  *ctx.out << "J_limit " << format_number(jl) << '\n';
  if (r.has("tolerance")) return jl <= r.positive("tolerance") ? kPass : kNumericalFailure;
  return kPass;
}

int cmd_bvcheck(const Context& ctx) {
  const Node r = ctx.root();
  const Energy E = config::parse_energy(r.at("energy"));
  const ContactPotential p = config::parse_contact(r.at("contact"), E.dim());
  const BvCurve curve = config::parse_curve(r.at("curve"), ctx.base_dir);
  const double tol = r.positive("tolerance", 1e-2);
  const BvCheckReport rep = check_bv_solution(p.A, p, E, curve, tol, jump_options(ctx));
  write_json(ctx, "bvcheck.json",
             {{"stability_residual", number(rep.stability_residual)},
              {"energy_residual", number(rep.energy_residual)},
              {"certified", rep.certified},
              {"pass", rep.pass}});
  *ctx.out << (rep.pass ? "pass" : "fail") << " stability " << format_number(rep.stability_residual) << " energy "
           << format_number(rep.energy_residual) << '\n';
  return rep.pass ? kPass : kNumericalFailure;
}

int cmd_recover(const Context& ctx) {
  const Node r = ctx.root();
  const Energy E = config::parse_energy(r.at("energy"));
  const Family family = config::parse_family(r.at("family"));
  if (family != Family::Cosh && family != Family::TwoNormViscous) r.at("family").fail("expected cosh or two_norm_viscous");
  const ContactPotential p = default_contact(ctx, family, r.positive("A", benchmark::kA), E.dim());
  const BvCurve curve = config::parse_curve(r.at("curve"), ctx.base_dir);
  const int n = positive_int(r, "n", 20);
  const int samples = positive_int(r, "samples", 64);
  const JumpCostOptions o = jump_options(ctx);
  const RecoveryResult rec = recovery_sequence(curve, p.A, p, E, family, n, samples, o);
  const DissipationPotential psi = family == Family::Cosh ? DissipationPotential::cosh(p.A, n, E.dim())
                                                          : DissipationPotential::two_norm_viscous(p.A, 1.0 / n, E.dim());
  const double jn = functional_J_n(psi, E, rec.traj);
  const double jl = functional_J_limit(p.A, p, E, curve, 1e-8, o);
  const auto rows = strict_convergence_report({{n, rec.traj}}, curve, p.A, r.number("exclusion", 0.05));
  write_csv(ctx, "recovery.csv", rec.traj);
  write_json(ctx, "recover.json",
             {{"n", n}, {"lambda", number(rec.lambda)}, {"J_n", number(jn)}, {"J_limit", number(jl)},
              {"gap", number(jn - jl)}, {"sup_distance", number(rows[0].sup_distance)},
              {"var_difference", number(rows[0].var_difference)}});
  *ctx.out << "lambda " << format_number(rec.lambda) << " J_n " << format_number(jn) << '\n';
  return kPass;
}

int cmd_sweep(const Context& ctx) {
  const Node r = ctx.root();
  const Node sw = r.at("sweep");
  const Family family = config::parse_family(sw.at("family"));
  if (family != Family::Cosh && family != Family::TwoNormViscous) sw.at("family").fail("expected cosh or two_norm_viscous");
  const std::vector<double> values = sw.at("values").numbers();
  if (values.empty()) sw.at("values").fail("sweep list is empty");
  const Energy E = config::parse_energy(r.at("energy"));
  const double A = r.positive("A", benchmark::kA);
  const ContactPotential p = default_contact(ctx, family, A, E.dim());
  const Vec u0 = r.has("u0") ? state_vector(r, "u0", E.dim()) : Vec::Constant(E.dim(), benchmark::kU0);
  const BvCurve curve = r.has("curve") ? config::parse_curve(r.at("curve"), ctx.base_dir)
                                       : benchmark::reference_curve(A, E.horizon());
  const int steps = positive_int(r, "steps", 20000);
  const int samples = positive_int(r, "recovery_samples", 64);
  const double tol = r.positive("tolerance", 1e-2);
  const double exclusion = r.number("exclusion", 0.05);
  const JumpCostOptions o = jump_options(ctx);

  std::vector<int> ns;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (family == Family::Cosh) {
      if (v < 1 || v != std::floor(v)) sw.at("values").at(k).fail("n must be a positive integer");
      ns.push_back(static_cast<int>(v));
    } else {
      if (!(v > 0.0)) sw.at("values").at(k).fail("eps must be positive");
      ns.push_back(static_cast<int>(std::lround(1.0 / v)));
    }
  }

  const double jl = functional_J_limit(A, p, E, curve, 1e-8, o);
  const double ptv = pseudo_total_variation(A, p, E, curve, 0.0, curve.T, o).value;
  struct Row {
    double j_solver, j_recovery, dissipation, sup_solver, sup_recovery, var_diff;
  };
  std::vector<Row> rows(values.size());
  parallel_for(values.size(), ctx.threads, [&](std::size_t k) {
    const DissipationPotential psi = family == Family::Cosh ? DissipationPotential::cosh(A, ns[k], E.dim())
                                                            : DissipationPotential::two_norm_viscous(A, values[k], E.dim());
    const AcTrajectory traj = solve_explicit(psi, E, u0, steps, Scheme::Rk4);
    Row row{};
    row.j_solver = functional_J_n(psi, E, traj);
    const double energy_terms = E.value_unchecked(traj.t_end(), traj.values().back()) -
                                E.value_unchecked(0.0, traj.values().front());
    double work = 0.0;
    for (std::size_t i = 0; i < traj.intervals(); ++i) {
      work += 0.5 * traj.dt(i) * (E.power_unchecked(traj.t(i), traj.u(i)) + E.power_unchecked(traj.t(i + 1), traj.u(i + 1)));
    }
    row.dissipation = row.j_solver - energy_terms + work;
    row.sup_solver = sup_distance(traj, curve, exclusion);
    const DissipationPotential psi_rec = family == Family::Cosh ? psi : DissipationPotential::two_norm_viscous(A, 1.0 / ns[k], E.dim());
    const RecoveryResult rec = recovery_sequence(curve, A, p, E, family, ns[k], samples, o);
    row.j_recovery = functional_J_n(psi_rec, E, rec.traj);
    const auto sc = strict_convergence_report({{ns[k], rec.traj}}, curve, A, exclusion);
    row.sup_recovery = sc[0].sup_distance;
    row.var_diff = sc[0].var_difference;
    rows[k] = row;
  });

  std::ostringstream csv;
  csv << (family == Family::Cosh ? "n" : "eps")
      << ",J_n_solver,J_n_recovery,J_limit,dissipation_solver,liminf_slack,sup_dist_solver,sup_dist_recovery,var_difference\n";
  bool solver_ok = true;
  bool recovery_monotone = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& w = rows[k];
    csv << format_number(values[k]) << ',' << format_number(w.j_solver) << ',' << format_number(w.j_recovery) << ','
        << format_number(jl) << ',' << format_number(w.dissipation) << ',' << format_number(w.dissipation - ptv) << ','
        << format_number(w.sup_solver) << ',' << format_number(w.sup_recovery) << ',' << format_number(w.var_diff) << '\n';
    solver_ok = solver_ok && w.j_solver <= tol;
    if (k > 0) recovery_monotone = recovery_monotone && w.j_recovery <= rows[k - 1].j_recovery;
  }
  write_text(ctx.out_dir / "sweep.csv", csv.str());
  *ctx.out << csv.str();
  return solver_ok && recovery_monotone ? kPass : kNumericalFailure;
}

int cmd_stochastic(const Context& ctx) {
  const Node r = ctx.root();
  const Node lat = r.at("lattice");
  const Energy E = r.has("energy") ? config::parse_energy(r.at("energy")) : benchmark::energy();
  const long long runs = lat.integer("runs", 1000);
  if (runs < 1) lat.at("runs").fail("at least one run required");
  std::vector<int> hs;
  const Node hv = lat.at("h_values");
  for (std::size_t k = 0; k < hv.size(); ++k) {
    const long long h = hv.at(k).integer();
    if (h < 1) hv.at(k).fail("must be >= 1");
    hs.push_back(static_cast<int>(h));
  }
  if (hs.empty()) hv.fail("no lattice sizes given");
  const double A = lat.positive("A", benchmark::kA);
  const int n = positive_int(lat, "n", 5);
  const Vec x0 = lat.has("x0") ? state_vector(lat, "x0", E.dim()) : Vec::Constant(E.dim(), benchmark::kU0);
  const int grid = positive_int(lat, "grid_points", 121);
  if (grid < 2) lat.at("grid_points").fail("must be >= 2");
  const int write_events = static_cast<int>(lat.integer("write_events", 0));
  const std::uint64_t seed = ctx.seed_or(1);

  const DissipationPotential psi = DissipationPotential::cosh(A, n, E.dim());
  const AcTrajectory det = solve_explicit(psi, E, x0, positive_int(r, "solver_steps", 20000), Scheme::Rk4);

  json rows = json::array();
  std::vector<double> dist;
  for (int h : hs) {
    const LatticeConfig cfg = LatticeConfig::from_cosh(h, A, n, E, x0, seed);
    try {
      cfg.validate();
    } catch (const DomainError& e) {
      lat.at("x0").fail(e.what());
    }
    const EnsembleSummary sum = simulate_ensemble(cfg, static_cast<int>(runs), grid, ctx.threads);
    double d = 0.0;
    for (std::size_t g = 0; g < sum.grid.size(); ++g) d = std::max(d, norm_inf(sum.mean[g] - det.value_at(sum.grid[g])));
    dist.push_back(d);
    rows.push_back({{"h", h},
                    {"sup_distance", number(d)},
                    {"mean_jumps", number(sum.mean_jumps)},
                    {"jumps_std", number(std::sqrt(sum.jumps_variance))},
                    {"final_mean", config::vec(sum.mean.back())},
                    {"final_std", config::vec(sum.variance.back().cwiseSqrt())}});
    for (int k = 0; k < write_events && k < runs; ++k) {
      const EventPath path = simulate_gillespie(cfg, static_cast<std::uint64_t>(k));
      std::ostringstream os;
      os << "t_event,i,sign";
      for (int i = 0; i < E.dim(); ++i) os << ",x_" << (i + 1);
      os << '\n';
      for (std::size_t e = 0; e < path.t.size(); ++e) {
        os << format_number(path.t[e]) << ',' << path.dir[e] << ',' << path.sign[e];
        for (Eigen::Index i = 0; i < path.x[e].size(); ++i) os << ',' << format_number(path.x[e][i]);
        os << '\n';
      }
      write_text(ctx.out_dir / ("events_h" + std::to_string(h) + "_run" + std::to_string(k) + ".csv"), os.str());
    }
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < dist.size(); ++k) decreasing = decreasing && dist[k] < dist[k - 1];
  json summary = {{"runs", runs},  {"n", n}, {"A", number(A)}, {"seed", seed},
                  {"rows", rows}, {"distance_decreasing", decreasing}};
  write_json(ctx, "stochastic.json", summary);
  *ctx.out << summary.dump() << '\n';
  return decreasing ? kPass : kNumericalFailure;
}

int cmd_conjugate_check(const Context& ctx) {
  const Node r = ctx.root();
  const int cases = positive_int(r, "cases", 200);
  const double tol = r.positive("tolerance", 1e-3);
  CounterRng rng(ctx.seed_or(11), 0);
  int finite = 0;
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const int d = rng.uniform01() < 0.5 ? 1 : 2;
    const double A = rng.uniform(0.2, 2.0);
    const int kind = static_cast<int>(rng.uniform01() * 4.0 - 1e-12);
    std::optional<DissipationPotential> psi;
    double spread = 0.0;
    switch (kind) {
      case 0:
        psi = DissipationPotential::one_homogeneous(A, d);
        spread = 1.5 * A;
        break;
      case 1:
        psi = DissipationPotential::self_viscous(A, rng.uniform(0.05, 2.0), d);
        spread = 2.0 * A + 1.0;
        break;
      case 2:
        psi = DissipationPotential::two_norm_viscous(A, rng.uniform(0.05, 2.0), d);
        spread = 2.0 * A + 1.0;
        break;
      default: {
        const int nn = 1 + static_cast<int>(rng.uniform01() * 20.0 - 1e-12);
        psi = DissipationPotential::cosh(A, nn, d);
        spread = A + 3.0 / nn;
      }
    }
    Vec xi(d);
    for (int i = 0; i < d; ++i) xi[i] = rng.uniform(-spread, spread);
    const double exact = eval_conjugate(*psi, xi);
    if (!std::isfinite(exact)) continue;
    ++finite;
    const double approx = numeric_conjugate(*psi, xi, 2.0, d == 1 ? 1001 : 101);
    worst = std::max(worst, std::abs(exact - approx));
  }
  const bool pass = worst <= tol;
  write_json(ctx, "conjugate_check.json",
             {{"cases", cases}, {"finite_cases", finite}, {"max_error", number(worst)}, {"pass", pass}});
  *ctx.out << "max_error " << format_number(worst) << (pass ? " pass" : " fail") << '\n';
  return pass ? kPass : kNumericalFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rislab: rate-independent systems lab"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 1;
  const std::vector<std::string> names = {"solve",   "jump-cost", "functional", "bvcheck",
                                          "recover", "sweep",     "stochastic", "conjugate-check"};
  for (const std::string& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "RNG seed override");
    sub->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }
  std::string command;
  for (const std::string& name : names) {
    if (app.got_subcommand(name)) command = name;
  }

  Context ctx;
  ctx.out = &out;
  ctx.seed = seed;
  ctx.threads = threads;
  ctx.out_dir = out_dir;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("--config: cannot open '" + config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    ctx.doc = config::parse_document(ss.str());
    ctx.base_dir = fs::path(config_path).parent_path().string();
    fs::create_directories(ctx.out_dir);

    if (command == "solve") return cmd_solve(ctx);
    if (command == "jump-cost") return cmd_jump_cost(ctx);
    if (command == "functional") return cmd_functional(ctx);
    if (command == "bvcheck") return cmd_bvcheck(ctx);
    if (command == "recover") return cmd_recover(ctx);
    if (command == "sweep") return cmd_sweep(ctx);
    if (command == "stochastic") return cmd_stochastic(ctx);
    return cmd_conjugate_check(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const fs::filesystem_error& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace rislab::cli
