#include "oalab/experiments.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

namespace ex = oalab::experiments;

TEST(Registry, ContainsRequiredNamesUniquely) {
  const std::vector<std::string> required{
      "kms-random",    "modular-flow",     "powers",          "araki-woods",     "wedge-localization",
      "fock-ccr",      "reeh-schlieder-rank", "cluster-decay", "entropy-scan",    "local-difference",
      "causality-probe", "local-prepare",  "disentangle",     "genericity",      "isometry-impossibility"};
  std::set<std::string> names;
  for (const auto& e : ex::list_experiments()) {
    EXPECT_TRUE(names.insert(e.name).second) << "duplicate " << e.name;
    EXPECT_FALSE(e.description.empty()) << e.name;
    EXPECT_EQ(e.description.find('\n'), std::string::npos) << e.name;
    EXPECT_FALSE(e.params.empty()) << e.name;
  }
  for (const auto& r : required) EXPECT_TRUE(names.count(r)) << r;
  EXPECT_EQ(ex::registry_json().size(), ex::list_experiments().size());
  EXPECT_THROW(ex::find_experiment("no-such"), std::invalid_argument);
}

TEST(Registry, SchemaErrorListsEveryOffendingKey) {
  ex::RunSpec spec;
  spec.name = "kms-random";
  spec.params = {{"bogus", 1}, {"dim", 9}, {"mixed_dims", "yes"}};
  try {
    ex::run(spec);
    FAIL() << "expected SchemaError";
  } catch (const ex::SchemaError& e) {
    auto keys = e.keys();
    std::sort(keys.begin(), keys.end());
    EXPECT_EQ(keys, (std::vector<std::string>{"bogus", "dim", "mixed_dims"}));
  }
}

TEST(Registry, ParamStringsAreTyped) {
  const auto& info = ex::find_experiment("kms-random");
  const auto j = ex::parse_param_strings(info, {{"dim", "2"}, {"mixed_dims", "true"}});
  EXPECT_TRUE(j.at("dim").is_number_integer());
  EXPECT_TRUE(j.at("mixed_dims").get<bool>());
  EXPECT_THROW(ex::parse_param_strings(info, {{"dim", "two"}}), ex::SchemaError);
  try {
    ex::parse_param_strings(info, {{"bogus", "1"}, {"dim", "9"}, {"instances", "x"}});
    FAIL() << "expected SchemaError";
  } catch (const ex::SchemaError& e) {
    auto keys = e.keys();
    std::sort(keys.begin(), keys.end());
    EXPECT_EQ(keys, (std::vector<std::string>{"bogus", "dim", "instances"}));
  }
  const auto full = ex::validate_params(info, nlohmann::json::object());
  EXPECT_EQ(full.at("instances").get<int>(), 20);
}

TEST(Reports, BitStableAcrossRuns) {
  ex::RunSpec spec;
  spec.name = "kms-random";
  spec.params = {{"dim", 2}, {"instances", 3}};
  spec.seed = 7;
  const auto a = ex::to_json(ex::run(spec), false).dump();
  const auto b = ex::to_json(ex::run(spec), false).dump();
  EXPECT_EQ(a, b);
  spec.seed = 8;
  EXPECT_NE(ex::to_json(ex::run(spec), false).dump(), a);
}

TEST(Reports, JsonSchemaAndCsvSections) {
  ex::RunSpec spec;
  spec.name = "powers";
  spec.params = {{"N", 2}};
  const auto r = ex::run(spec);
  EXPECT_TRUE(r.all_pass());
  const auto j = ex::to_json(r);
  for (const char* key : {"experiment", "params", "seed", "metrics", "assertions", "wall_time_s"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_DOUBLE_EQ(j.at("params").at("lambda").get<double>(), 0.5);  // defaults echoed
  for (const auto& a : j.at("assertions")) {
    EXPECT_TRUE(a.contains("value"));
    EXPECT_TRUE(a.contains("tolerance"));
    EXPECT_TRUE(a.contains("pass"));
  }
  std::ostringstream csv;
  ex::write_csv(csv, r);
  EXPECT_NE(csv.str().find("# assertions"), std::string::npos);
  EXPECT_NE(csv.str().find("# table purity"), std::string::npos);
}

TEST(Reports, ToleranceOverrideTightensAbsoluteChecks) {
  ex::RunSpec spec;
  spec.name = "kms-random";
  spec.params = {{"dim", 2}, {"instances", 2}};
  EXPECT_TRUE(ex::run(spec).all_pass());
  spec.tol_abs = 1e-300;
  const auto r = ex::run(spec);
  EXPECT_FALSE(r.all_pass());
  spec.tol_abs = -1.0;
  EXPECT_THROW(ex::run(spec), std::invalid_argument);
}

TEST(Reports, ZeroProbeBoundFails) {
  // cluster-decay with a zero probe bound: |F| > 0 fails.
  ex::RunSpec spec;
  spec.name = "cluster-decay";
  spec.params = {{"probe_bound", 0.0}};
  EXPECT_FALSE(ex::run(spec).all_pass());
}
