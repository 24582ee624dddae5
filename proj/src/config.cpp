#include "rislab/config.hpp"
#include "rislab/benchmark.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rislab::config {

Node Node::at(const std::string& key) const {
  if (!j_->is_object()) fail("expected an object");
  if (!j_->contains(key)) throw ConfigError((path_.empty() ? key : path_ + "." + key) + ": missing field");
  return {(*j_)[key], path_.empty() ? key : path_ + "." + key};
}

Node Node::at(std::size_t index) const {
  if (!j_->is_array() || index >= j_->size()) fail("index out of range");
  return {(*j_)[index], path_ + "[" + std::to_string(index) + "]"};
}

std::size_t Node::size() const {
  if (!j_->is_array()) fail("expected an array");
  return j_->size();
}

void Node::fail(const std::string& msg) const { throw ConfigError((path_.empty() ? "<root>" : path_) + ": " + msg); }

double Node::number() const {
  if (!j_->is_number()) fail("expected a number");
  const double v = j_->get<double>();
  if (!std::isfinite(v)) fail("expected a finite number");
  return v;
}

double Node::positive(const std::string& key) const {
  const Node n = at(key);
  const double v = n.number();
  if (!(v > 0.0)) n.fail("must be positive");
  return v;
}

long long Node::integer() const {
  if (!j_->is_number_integer()) fail("expected an integer");
  return j_->get<long long>();
}

std::string Node::string() const {
  if (!j_->is_string()) fail("expected a string");
  return j_->get<std::string>();
}

Vec Node::vector() const {
  const std::vector<double> xs = numbers();
  if (xs.empty()) fail("expected a non-empty array");
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

std::vector<double> Node::numbers() const {
  if (!j_->is_array()) fail("expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j_->size(); ++i) out.push_back(at(i).number());
  return out;
}

json parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("<root>: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<root>: expected an object");
  const Node root(j, "");
  const std::string schema = root.string("schema");
  if (schema != kSchema) root.at("schema").fail("unsupported schema '" + schema + "', expected '" + kSchema + "'");
  return j;
}

Energy parse_energy(const Node& n) {
  const std::string kind = n.string("kind", "double_well");
  const long long dim = n.integer("dim", 1);
  if (dim < 1) n.at("dim").fail("must be >= 1");
  const double T = n.positive("T", benchmark::kT);
  const double box = n.positive("box", benchmark::kBox);
  if (kind == "double_well") return Energy::double_well(static_cast<int>(dim), T, box);
  if (kind == "quadratic") {
    const double k = n.number("k", 1.0);
    if (!n.has("loading")) return Energy::quadratic(static_cast<int>(dim), k, T, box);
  }
  if (kind != "quadratic" && kind != "polynomial") n.at("kind").fail("unknown energy kind '" + kind + "'");

  std::vector<Loading> loads;
  if (n.has("loading")) {
    const Node l = n.at("loading");
    if (l.size() != static_cast<std::size_t>(dim)) l.fail("needs one entry per coordinate");
    for (std::size_t i = 0; i < l.size(); ++i) {
      const Node e = l.at(i);
      if (e.has("poly")) {
        loads.push_back(Loading::polynomial(e.at("poly").numbers()));
      } else if (e.has("knots_t")) {
        try {
          loads.push_back(Loading::piecewise_linear(e.at("knots_t").numbers(), e.at("knots_v").numbers()));
        } catch (const DomainError& err) {
          e.fail(err.what());
        }
      } else {
        e.fail("expected 'poly' or 'knots_t'/'knots_v'");
      }
    }
  } else {
    loads.assign(static_cast<std::size_t>(dim), Loading::zero());
  }
  if (kind == "quadratic") return Energy::loaded_quadratic(n.number("k", 1.0), std::move(loads), T, box);

  const Node w = n.at("wells");
  if (w.size() != static_cast<std::size_t>(dim)) w.fail("needs one entry per coordinate");
  std::vector<Well> wells;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Node e = w.at(i);
    wells.push_back(Well{e.number("c4", 0.0), e.number("c2", 0.0), e.number("c1", 0.0)});
  }
  return {Energy::Kind::PolynomialLoaded, T, box, std::move(wells), std::move(loads)};
}

Family parse_family(const Node& n) {
  const std::string f = n.string();
  if (f == "one_hom") return Family::OneHom;
  if (f == "self_viscous") return Family::SelfViscous;
  if (f == "two_norm_viscous") return Family::TwoNormViscous;
  if (f == "cosh") return Family::Cosh;
  n.fail("unknown family '" + f + "'");
}

DissipationPotential parse_potential(const Node& n, int dim) {
  const Family f = parse_family(n.at("family"));
  const double A = n.number("A");
  try {
    switch (f) {
      case Family::OneHom: return DissipationPotential::one_homogeneous(A, dim);
      case Family::SelfViscous: return DissipationPotential::self_viscous(A, n.positive("eps"), dim);
      case Family::TwoNormViscous: return DissipationPotential::two_norm_viscous(A, n.positive("eps"), dim);
      case Family::Cosh: {
        const long long k = n.integer("n");
        if (k < 1) n.at("n").fail("must be >= 1");
        return DissipationPotential::cosh(A, static_cast<int>(k), dim);
      }
    }
  } catch (const DomainError& e) {
    n.fail(e.what());
  }
  n.fail("unknown family");
}

ContactPotential parse_contact(const Node& n, int dim) {
  ContactPotential p;
  const std::string f = n.string("family", "stochastic");
  if (f == "stochastic") {
    p.family = ContactFamily::Stochastic;
  } else if (f == "vanishing_viscosity_two_norm") {
    p.family = ContactFamily::VanishingViscosityTwoNorm;
  } else if (f == "vanishing_viscosity_self") {
    p.family = ContactFamily::VanishingViscositySelf;
  } else {
    n.at("family").fail("unknown contact family '" + f + "'");
  }
  p.A = n.positive("A", benchmark::kA);
  p.dim = dim;
  return p;
}

BvCurve parse_curve(const Node& n, const std::string& base_dir) {
  try {
    if (n.has("builtin")) {
      const std::string name = n.string("builtin");
      if (name != "benchmark_reference") n.at("builtin").fail("unknown builtin curve '" + name + "'");
      const long long samples = n.integer("samples", 400);
      if (samples < 2) n.at("samples").fail("must be >= 2");
      return benchmark::reference_curve(n.positive("A", benchmark::kA), n.positive("T", benchmark::kT),
                                        static_cast<int>(samples), n.number("target_shift", 0.0));
    }
    if (n.has("file")) {
      std::string path = n.string("file");
      if (!path.empty() && path.front() != '/' && !base_dir.empty()) path = base_dir + "/" + path;
      std::ifstream in(path);
      if (!in) n.at("file").fail("cannot open '" + path + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      return bv_curve_from_json(ss.str());
    }
    return bv_curve_from_json(n.raw().dump());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return std::stod(format_number(x));
}

json vec(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

}  // namespace rislab::config
