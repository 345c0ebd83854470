#include "context.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

namespace oalab::experiments {

namespace detail {

void Context::add(const std::string& name, double value, double tol, Check check) {
  bool pass = false;
  switch (check) {
    case Check::AtMostAbs:
    case Check::AtMostRel:
    case Check::AtMost:
      pass = value <= tol;
      break;
    case Check::AtLeast:
      pass = value >= tol;
      break;
    case Check::GreaterThan:
      pass = value > tol;
      break;
    case Check::IsTrue:
      pass = value != 0.0;
      break;
  }
  // NaN never passes.
  if (std::isnan(value)) pass = false;
  report_.assertions.push_back({name, value, tol, check, pass});
}

}  // namespace detail

namespace {

const std::vector<detail::Entry>& entries() {
  static const std::vector<detail::Entry> all = [] {
    std::vector<detail::Entry> out;
    detail::register_modular(out);
    detail::register_factors(out);
    detail::register_fields(out);
    detail::register_lattice(out);
    detail::register_channels(out);
    std::set<std::string> seen;
    for (const auto& e : out) {
      if (!seen.insert(e.info.name).second) throw std::logic_error("duplicate experiment " + e.info.name);
    }
    return out;
  }();
  return all;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json schema_json(const ParamSpec& p) {
  static const char* names[] = {"int", "real", "bool", "choice"};
  nlohmann::json j{{"name", p.name}, {"type", names[static_cast<int>(p.type)]}, {"default", p.default_value},
                   {"help", p.help}};
  if (!p.choices.empty()) j["choices"] = p.choices;
  if (p.min) j["min"] = *p.min;
  if (p.max) j["max"] = *p.max;
  return j;
}

}  // namespace

bool Report::all_pass() const {
  for (const auto& a : assertions) if (!a.pass) return false;
  return true;
}

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const ExperimentInfo& find_experiment(const std::string& name) {
  for (const auto& info : list_experiments()) if (info.name == name) return info;
  throw std::invalid_argument("unknown experiment '" + name + "' (see 'list')");
}

Report run(const RunSpec& spec) {
  const detail::Entry* entry = nullptr;
  for (const auto& e : entries()) if (e.info.name == spec.name) entry = &e;
  if (!entry) find_experiment(spec.name);  // throws with the standard message

  Report r;
  r.experiment = spec.name;
  r.params = validate_params(entry->info, spec.params);
  r.seed = spec.seed;
  r.tol_abs = spec.tol_abs;
  r.tol_rel = spec.tol_rel;
  if (spec.tol_abs && !(*spec.tol_abs > 0.0)) throw std::invalid_argument("--tol-abs must be positive");
  if (spec.tol_rel && !(*spec.tol_rel > 0.0)) throw std::invalid_argument("--tol-rel must be positive");

  const auto t0 = std::chrono::steady_clock::now();
  detail::Context ctx(r, r.params, spec.seed, spec.tol_abs, spec.tol_rel);
  entry->run(ctx);
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string check_name(Check c) {
  switch (c) {
    case Check::AtMostAbs: return "<= (abs)";
    case Check::AtMostRel: return "<= (rel)";
    case Check::AtMost: return "<=";
    case Check::AtLeast: return ">=";
    case Check::GreaterThan: return ">";
    case Check::IsTrue: return "true";
  }
  return "?";
}

nlohmann::json to_json(const Report& r, bool with_wall_time) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["params"] = r.params;
  j["seed"] = r.seed;
  j["tolerance_overrides"] = {{"abs", r.tol_abs ? nlohmann::json(*r.tol_abs) : nlohmann::json()},
                              {"rel", r.tol_rel ? nlohmann::json(*r.tol_rel) : nlohmann::json()}};
  j["metrics"] = nlohmann::json::object();
  for (const auto& [k, v] : r.metrics) j["metrics"][k] = v;
  j["assertions"] = nlohmann::json::array();
  for (const auto& a : r.assertions) {
    j["assertions"].push_back(
        {{"name", a.name}, {"value", a.value}, {"tolerance", a.tolerance}, {"check", check_name(a.check)}, {"pass", a.pass}});
  }
  j["pass"] = r.all_pass();
  j["data"] = r.data;
  nlohmann::json tables = nlohmann::json::object();
  for (const auto& t : r.tables) tables[t.name] = {{"columns", t.columns}, {"rows", t.rows}};
  j["tables"] = tables;
  if (with_wall_time) j["wall_time_s"] = r.wall_time_s;
  return j;
}

void write_csv(std::ostream& out, const Report& r) {
  out << "# assertions\nname,value,tolerance,check,pass\n";
  for (const auto& a : r.assertions) {
    out << a.name << ',' << fmt(a.value) << ',' << fmt(a.tolerance) << ',' << check_name(a.check) << ','
        << (a.pass ? "true" : "false") << '\n';
  }
  out << "# metrics\nname,value\n";
  for (const auto& [k, v] : r.metrics) out << k << ',' << fmt(v) << '\n';
  for (const auto& t : r.tables) {
    out << "# table " << t.name << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
      out << '\n';
    }
  }
}

nlohmann::json registry_json() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& info : list_experiments()) {
    nlohmann::json params = nlohmann::json::array();
    for (const auto& p : info.params) params.push_back(schema_json(p));
    out.push_back({{"name", info.name}, {"description", info.description}, {"params", params}});
  }
  return out;
}

}  // namespace oalab::experiments
