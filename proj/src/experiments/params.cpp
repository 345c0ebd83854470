#include "context.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oalab::experiments {

namespace {

std::string join(const std::vector<std::string>& keys) {
  std::string out;
  for (const auto& k : keys) out += (out.empty() ? "" : ", ") + k;
  return out;
}

}  // namespace

SchemaError::SchemaError(const std::string& experiment, std::vector<std::string> keys, const std::string& detail)
    : std::invalid_argument(experiment + ": invalid parameters [" + join(keys) + "]: " + detail), keys_(std::move(keys)) {}

namespace detail {

ParamSpec int_param(std::string name, int def, std::string help, std::optional<double> min, std::optional<double> max) {
  return {std::move(name), ParamType::Int, def, std::move(help), {}, min, max};
}

ParamSpec real_param(std::string name, double def, std::string help, std::optional<double> min,
                     std::optional<double> max) {
  return {std::move(name), ParamType::Real, def, std::move(help), {}, min, max};
}

ParamSpec bool_param(std::string name, bool def, std::string help) {
  return {std::move(name), ParamType::Bool, def, std::move(help), {}, {}, {}};
}

ParamSpec choice_param(std::string name, std::string def, std::vector<std::string> choices, std::string help) {
  return {std::move(name), ParamType::Choice, std::move(def), std::move(help), std::move(choices), {}, {}};
}

}  // namespace detail

nlohmann::json validate_params(const ExperimentInfo& info, const nlohmann::json& given) {
  if (!given.is_object()) throw SchemaError(info.name, {"<params>"}, "parameters must be an object");
  std::vector<std::string> bad;
  std::vector<std::string> why;
  for (const auto& [key, _] : given.items()) {
    bool known = false;
    for (const auto& p : info.params) known = known || p.name == key;
    if (!known) {
      bad.push_back(key);
      why.push_back(key + " is not a parameter");
    }
  }
  nlohmann::json out = nlohmann::json::object();
  for (const auto& p : info.params) {
    if (!given.contains(p.name)) {
      out[p.name] = p.default_value;
      continue;
    }
    const auto& v = given.at(p.name);
    bool ok = true;
    std::string reason;
    switch (p.type) {
      case ParamType::Int:
        ok = v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
        if (ok) out[p.name] = static_cast<long long>(v.get<double>());
        reason = "expected an integer";
        break;
      case ParamType::Real:
        ok = v.is_number() && std::isfinite(v.get<double>());
        if (ok) out[p.name] = v.get<double>();
        reason = "expected a finite number";
        break;
      case ParamType::Bool:
        ok = v.is_boolean();
        if (ok) out[p.name] = v;
        reason = "expected true or false";
        break;
      case ParamType::Choice:
        ok = v.is_string() && std::find(p.choices.begin(), p.choices.end(), v.get<std::string>()) != p.choices.end();
        if (ok) out[p.name] = v;
        reason = "expected one of " + join(p.choices);
        break;
    }
    if (ok && (p.type == ParamType::Int || p.type == ParamType::Real)) {
      const double x = out[p.name].get<double>();
      if ((p.min && x < *p.min) || (p.max && x > *p.max)) {
        ok = false;
        std::ostringstream os;
        os << "outside [";
        if (p.min) os << *p.min; else os << "-inf";
        os << ", ";
        if (p.max) os << *p.max; else os << "inf";
        os << "]";
        reason = os.str();
      }
    }
    if (!ok) {
      bad.push_back(p.name);
      why.push_back(p.name + " " + reason);
    }
  }
  if (!bad.empty()) throw SchemaError(info.name, bad, join(why));
  return out;
}

nlohmann::json parse_param_strings(const ExperimentInfo& info, const std::map<std::string, std::string>& raw) {
  nlohmann::json out = nlohmann::json::object();
  bool all_parsed = true;
  for (const auto& [key, text] : raw) {
    const ParamSpec* spec = nullptr;
    for (const auto& p : info.params) if (p.name == key) spec = &p;
    if (!spec) {
      out[key] = text;
      all_parsed = false;
      continue;
    }
    try {
      std::size_t used = 0;
      switch (spec->type) {
        case ParamType::Int: {
          const long long v = std::stoll(text, &used);
          if (used != text.size()) throw std::invalid_argument(text);
          out[key] = v;
          break;
        }
        case ParamType::Real: {
          const double v = std::stod(text, &used);
          if (used != text.size()) throw std::invalid_argument(text);
          out[key] = v;
          break;
        }
        case ParamType::Bool:
          if (text == "true" || text == "1") out[key] = true;
          else if (text == "false" || text == "0") out[key] = false;
          else throw std::invalid_argument(text);
          break;
        case ParamType::Choice:
          out[key] = text;
          break;
      }
    } catch (const std::exception&) {
      out[key] = text;  // left as a string so validation names it
      all_parsed = false;
    }
  }
  // One error listing every bad key, range violations included.
  if (!all_parsed) validate_params(info, out);
  return out;
}

}  // namespace oalab::experiments
