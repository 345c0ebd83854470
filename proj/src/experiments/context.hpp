#pragma once

// Shared plumbing for experiment implementations (not installed).

#include "oalab/experiments.hpp"
#include "oalab/numkit.hpp"

#include <functional>
#include <string>
#include <vector>

namespace oalab::experiments::detail {

class Context {
public:
  Context(Report& report, const nlohmann::json& params, std::uint64_t seed, std::optional<double> tol_abs,
          std::optional<double> tol_rel)
      : report_(report), params_(params), seed_(seed), tol_abs_(tol_abs), tol_rel_(tol_rel) {}

  int integer(const std::string& key) const { return params_.at(key).get<int>(); }
  double real(const std::string& key) const { return params_.at(key).get<double>(); }
  bool flag(const std::string& key) const { return params_.at(key).get<bool>(); }
  std::string choice(const std::string& key) const { return params_.at(key).get<std::string>(); }

  std::uint64_t seed() const { return seed_; }
  /// Independent stream for sub-task `index`.
  numkit::Rng rng(std::uint64_t index) const { return numkit::Rng(numkit::derive_seed(seed_, index)); }

  void metric(const std::string& name, double value) { report_.metrics[name] = value; }

  /// value <= tol, tol replaced by --tol-abs when given.
  void at_most_abs(const std::string& name, double value, double tol) {
    add(name, value, tol_abs_.value_or(tol), Check::AtMostAbs);
  }
  /// value <= tol, tol replaced by --tol-rel when given.
  void at_most_rel(const std::string& name, double value, double tol) {
    add(name, value, tol_rel_.value_or(tol), Check::AtMostRel);
  }
  void at_most(const std::string& name, double value, double bound) { add(name, value, bound, Check::AtMost); }
  void at_least(const std::string& name, double value, double bound) { add(name, value, bound, Check::AtLeast); }
  void greater_than(const std::string& name, double value, double bound) {
    add(name, value, bound, Check::GreaterThan);
  }
  void is_true(const std::string& name, bool value) { add(name, value ? 1.0 : 0.0, 0.0, Check::IsTrue); }

  nlohmann::json& data() { return report_.data; }
  Table& table(const std::string& name, std::vector<std::string> columns) {
    report_.tables.push_back({name, std::move(columns), {}});
    return report_.tables.back();
  }

private:
  void add(const std::string& name, double value, double tol, Check check);

  Report& report_;
  const nlohmann::json& params_;
  std::uint64_t seed_;
  std::optional<double> tol_abs_, tol_rel_;
};

struct Entry {
  ExperimentInfo info;
  std::function<void(Context&)> run;
};

// Schema helpers.
ParamSpec int_param(std::string name, int def, std::string help, std::optional<double> min = {},
                    std::optional<double> max = {});
ParamSpec real_param(std::string name, double def, std::string help, std::optional<double> min = {},
                     std::optional<double> max = {});
ParamSpec bool_param(std::string name, bool def, std::string help);
ParamSpec choice_param(std::string name, std::string def, std::vector<std::string> choices, std::string help);

void register_modular(std::vector<Entry>& out);
void register_factors(std::vector<Entry>& out);
void register_fields(std::vector<Entry>& out);
void register_lattice(std::vector<Entry>& out);
void register_channels(std::vector<Entry>& out);

}  // namespace oalab::experiments::detail
