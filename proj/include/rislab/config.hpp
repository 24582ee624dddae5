#pragma once

#include "rislab/contact.hpp"
#include "rislab/energy.hpp"
#include "rislab/trajectory.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace rislab::config {

inline constexpr const char* kSchema = "rislab-config/1";

using nlohmann::json;

/// Malformed configuration; the message starts with the offending field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Thin accessor that remembers where it is in the document.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *j_; }
  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }
  Node at(const std::string& key) const;
  Node at(std::size_t index) const;
  std::size_t size() const;

  double number() const;
  double number(const std::string& key) const { return at(key).number(); }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
  double positive(const std::string& key) const;
  double positive(const std::string& key, double fallback) const { return has(key) ? positive(key) : fallback; }
  long long integer() const;
  long long integer(const std::string& key) const { return at(key).integer(); }
  long long integer(const std::string& key, long long fallback) const { return has(key) ? integer(key) : fallback; }
  std::string string() const;
  std::string string(const std::string& key) const { return at(key).string(); }
  std::string string(const std::string& key, const std::string& fallback) const { return has(key) ? string(key) : fallback; }
  Vec vector() const;
  Vec vector(const std::string& key) const { return at(key).vector(); }
  std::vector<double> numbers() const;

  [[noreturn]] void fail(const std::string& msg) const;

 private:
  const json* j_;
  std::string path_;
};

/// Parses a config document and checks the schema field.
json parse_document(const std::string& text);

Energy parse_energy(const Node& n);
DissipationPotential parse_potential(const Node& n, int dim);
ContactPotential parse_contact(const Node& n, int dim);
Family parse_family(const Node& n);

/// {"builtin": "benchmark_reference", ...}, {"file": path} or an inline curve
BvCurve parse_curve(const Node& n, const std::string& base_dir);

/// Number rounded to 12 significant digits; non-finite values become strings.
json number(double x);
json vec(const Vec& v);

}  // namespace rislab::config
