// oalab <experiment> [--param value ...] [--seed S] [--tol-abs T] [--tol-rel T]
//       [--out FILE] [--format json|csv]
// oalab list
// Exit status: 0 iff every assertion passed; 1 on a failed assertion; 2 on
// bad usage or a schema error.

#include "oalab/experiments.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>

namespace ex = oalab::experiments;

namespace {

// "--key value" / "--key=value" pairs left over after CLI11 took its flags.
std::map<std::string, std::string> collect_params(const std::vector<std::string>& extras) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& a = extras[i];
    if (a.rfind("--", 0) != 0 || a.size() < 3) throw std::invalid_argument("unexpected argument '" + a + "'");
    std::string key = a.substr(2), value;
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw std::invalid_argument("missing value for --" + key);
      value = extras[++i];
    }
    out[key] = value;
  }
  return out;
}

void print_list(std::ostream& os) {
  for (const auto& e : ex::list_experiments()) {
    os << e.name << "\n    " << e.description << "\n";
    for (const auto& p : e.params) os << "    --" << p.name << " (default " << p.default_value.dump() << ")  " << p.help << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator-algebra lab: seeded experiments with JSON/CSV reports"};
  app.allow_extras();
  std::string name;
  std::uint64_t seed = 1;
  std::optional<double> tol_abs, tol_rel;
  std::string out_path, format = "json";
  bool as_json_list = false;
  app.add_option("experiment", name, "experiment name, or 'list'")->required();
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  app.add_option("--tol-abs", tol_abs, "override absolute tolerances");
  app.add_option("--tol-rel", tol_rel, "override relative tolerances");
  app.add_option("--out", out_path, "report file (default: stdout)");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_flag("--json", as_json_list, "with 'list': print the registry as JSON");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (name == "list") {
    if (as_json_list)
      std::cout << ex::registry_json().dump(2) << "\n";
    else
      print_list(std::cout);
    return 0;
  }

  ex::Report report;
  try {
    const auto& info = ex::find_experiment(name);
    ex::RunSpec spec;
    spec.name = name;
    spec.params = ex::parse_param_strings(info, collect_params(app.remaining()));
    spec.seed = seed;
    spec.tol_abs = tol_abs;
    spec.tol_rel = tol_rel;
    report = ex::run(spec);
  } catch (const ex::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot open " << out_path << "\n";
      return 2;
    }
  }
  std::ostream& os = out_path.empty() ? std::cout : file;
  if (format == "csv")
    ex::write_csv(os, report);
  else
    os << ex::to_json(report).dump(2) << "\n";

  for (const auto& a : report.assertions)
    if (!a.pass) std::cerr << "FAIL " << a.name << ": value " << a.value << ", tolerance " << a.tolerance << "\n";
  return report.all_pass() ? 0 : 1;
}
