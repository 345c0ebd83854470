#pragma once

// Named, seeded experiments with a parameter schema and a machine-readable
// report. Every experiment is a pure function of (name, params, seed, tolerance
// overrides) apart from wall_time_s.

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oalab::experiments {

enum class ParamType { Int, Real, Bool, Choice };

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::Real;
  nlohmann::json default_value;
  std::string help;
  std::vector<std::string> choices;  // Choice only
  std::optional<double> min, max;    // Int / Real only, inclusive
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
};

/// Invalid parameters; keys() lists the offending parameter names.
class SchemaError : public std::invalid_argument {
public:
  SchemaError(const std::string& experiment, std::vector<std::string> keys, const std::string& detail);
  const std::vector<std::string>& keys() const { return keys_; }

private:
  std::vector<std::string> keys_;
};

/// How an assertion compares its measured value against its tolerance.
/// AtMostAbs / AtMostRel follow the --tol-abs / --tol-rel overrides; the
/// other kinds are fixed bounds.
enum class Check { AtMostAbs, AtMostRel, AtMost, AtLeast, GreaterThan, IsTrue };

struct Assertion {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  Check check = Check::AtMostAbs;
  bool pass = false;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunSpec {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 1;
  std::optional<double> tol_abs;
  std::optional<double> tol_rel;
};

struct Report {
  std::string experiment;
  nlohmann::json params;   // full echo including defaults
  std::uint64_t seed = 0;
  std::optional<double> tol_abs, tol_rel;
  std::map<std::string, double> metrics;
  std::vector<Assertion> assertions;
  nlohmann::json data = nlohmann::json::object();
  std::vector<Table> tables;
  double wall_time_s = 0.0;

  bool all_pass() const;
};

/// Registry in a stable order.
const std::vector<ExperimentInfo>& list_experiments();

/// Names, descriptions and parameter schemas as JSON.
nlohmann::json registry_json();

/// Throws std::invalid_argument for an unknown name.
const ExperimentInfo& find_experiment(const std::string& name);

/// Fills defaults, type-checks and range-checks; throws SchemaError listing
/// every unknown, mistyped or out-of-range key.
nlohmann::json validate_params(const ExperimentInfo& info, const nlohmann::json& given);

/// Converts command-line strings to typed JSON values per the schema. Throws
/// SchemaError (via validate_params, listing every bad key) when a key is
/// unknown or a value does not parse.
nlohmann::json parse_param_strings(const ExperimentInfo& info, const std::map<std::string, std::string>& raw);

Report run(const RunSpec& spec);

/// {experiment, params, seed, tolerances, metrics, assertions, data, wall_time_s}.
nlohmann::json to_json(const Report& r, bool with_wall_time = true);

/// Assertions and metrics as CSV sections, followed by every table.
void write_csv(std::ostream& out, const Report& r);

std::string check_name(Check c);

}  // namespace oalab::experiments
