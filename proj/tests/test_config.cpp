#include "latune/config.hpp"

#include <gtest/gtest.h>

#include "latune/report.hpp"
#include "test_util.hpp"

namespace latune {
namespace {

using nlohmann::json;

json minimal_sim_config() {
  return json::parse(R"({
    "schema_version": 1,
    "budget_seconds": 500,
    "seed": 7,
    "hyper": {"num_refine": 3},
    "parameters": [
      {"name": "x", "type": "integer"},
      {"name": "y", "type": "integer"}
    ],
    "initial_distribution": {
      "x": {"base": 0, "delta": {"poisson": 3.0}},
      "y": {"base": 0, "delta": {"poisson": 3.0}}
    },
    "analyzer": {
      "kind": "simulator",
      "benchmark": {
        "id": "toy",
        "base_cost_seconds": 0.5,
        "cost_weights": [0.05, 0.05],
        "alarms": [
          {"id": "a1", "threshold": {"x": 2, "y": 1}},
          {"id": "a2", "threshold": {"x": 1, "y": 3}}
        ]
      }
    }
  })");
}

std::vector<std::string> fields_of(const std::vector<ConfigError>& errors) {
  std::vector<std::string> out;
  for (const auto& e : errors) out.push_back(e.field);
  return out;
}

TEST(Config, MinimalSimulatorParses) {
  std::vector<ConfigError> errors;
  const auto config = parse_config(minimal_sim_config(), errors);
  ASSERT_TRUE(config.has_value()) << fields_of(errors).size();
  EXPECT_TRUE(config->simulated);
  EXPECT_EQ(config->parameters.size(), 2u);
  EXPECT_EQ(config->benchmark.model.alarms.size(), 2u);
  EXPECT_EQ(config->hyper.num_refine, 3);
  EXPECT_EQ(config->hyper.num_sample, 4);  // paper default kept
  EXPECT_EQ(config->program.identifier, "toy");
}

TEST(Config, MissingDistributionEntryNamesTheParameter) {
  json doc = minimal_sim_config();
  doc["initial_distribution"].erase("y");
  std::vector<ConfigError> errors;
  EXPECT_FALSE(parse_config(doc, errors).has_value());
  ASSERT_FALSE(errors.empty());
  bool named = false;
  for (const auto& e : errors) {
    named = named || (e.field == "initial_distribution.y" &&
                      e.message.find("'y'") != std::string::npos);
  }
  EXPECT_TRUE(named);
}

TEST(Config, FamilyMismatchRejected) {
  json doc = minimal_sim_config();
  doc["parameters"].push_back({{"name", "b"}, {"type", "boolean"}});
  doc["initial_distribution"]["b"] = {{"base", false},
                                      {"delta", {{"poisson", 1.0}}}};
  std::vector<ConfigError> errors;
  EXPECT_FALSE(parse_config(doc, errors).has_value());
  bool found = false;
  for (const auto& e : errors) {
    found = found || e.field == "initial_distribution.b";
  }
  EXPECT_TRUE(found);
}

TEST(Config, JointBernoulliWidthMismatchRejected) {
  json doc = minimal_sim_config();
  doc["parameters"].push_back(
      {{"name", "s"}, {"type", {{"set", {"a", "b", "c", "d", "e"}}}}});
  doc["initial_distribution"]["s"] = {
      {"base", json::array({"a"})},
      {"delta", {{"joint_bernoulli", {0.5, 0.5, 0.5, 0.5}}}}};
  std::vector<ConfigError> errors;
  EXPECT_FALSE(parse_config(doc, errors).has_value());
  bool found = false;
  for (const auto& e : errors) {
    found = found || (e.field == "initial_distribution.s" &&
                      e.message.find("width") != std::string::npos);
  }
  EXPECT_TRUE(found);
}

TEST(Config, UnknownFieldRejectedButCommentsAllowed) {
  json doc = minimal_sim_config();
  doc["_note"] = "fine";
  std::vector<ConfigError> errors;
  EXPECT_TRUE(parse_config(doc, errors).has_value());

  doc["budget_secods"] = 3;  // typo
  errors.clear();
  EXPECT_FALSE(parse_config(doc, errors).has_value());
  EXPECT_EQ(errors.front().field, "budget_secods");
}

TEST(Config, GeneratorBlockBuildsTheModel) {
  json doc = minimal_sim_config();
  doc["analyzer"]["benchmark"] = {
      {"id", "gen"},
      {"generator",
       {{"seed", 11}, {"n_params", 2}, {"n_alarms", 4}, {"max_threshold", 8},
        {"cost_scale", 1.5}}}};
  std::vector<ConfigError> errors;
  const auto config = parse_config(doc, errors);
  ASSERT_TRUE(config.has_value());
  EXPECT_EQ(config->benchmark.model.alarms.size(), 4u);
  EXPECT_EQ(config->benchmark.model.profile[0].name, "x");  // configured names kept
  const auto direct = gen_benchmark(RngSeed{11}, {2, 4, 8, 1.5});
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(config->benchmark.model.alarms[i].thresholds,
              direct.model.alarms[i].thresholds);
  }
}

TEST(Config, LadderMustStrictlyIncrease) {
  json doc = minimal_sim_config();
  doc["expert_ladder"] = json::array({
      json{{"x", 2}, {"y", 2}},
      json{{"x", 1}, {"y", 5}},
  });
  std::vector<ConfigError> errors;
  EXPECT_FALSE(parse_config(doc, errors).has_value());
  EXPECT_EQ(errors.front().field, "expert_ladder");
}

TEST(Config, RoundTripIsIdentityOnCanonicalForm) {
  std::vector<ConfigError> errors;
  const auto config = parse_config(minimal_sim_config(), errors);
  ASSERT_TRUE(config.has_value());
  const json once = config_to_json(*config);
  errors.clear();
  const auto again = parse_config(once, errors);
  ASSERT_TRUE(again.has_value()) << (errors.empty() ? "" : errors.front().field);
  EXPECT_EQ(once.dump(), config_to_json(*again).dump());
}

TEST(Config, ShippedPresetsValidate) {
  for (const std::string name : {"frama-c-eva.json", "mopsa.json"}) {
    std::vector<ConfigError> errors;
    const auto config =
        load_config_file(std::string(LATUNE_PRESET_DIR) + "/" + name, errors);
    ASSERT_TRUE(config.has_value())
        << name << ": " << (errors.empty() ? "?" : errors.front().field + ": " +
                                                       errors.front().message);
    EXPECT_FALSE(config->simulated);
  }
}

TEST(Config, EvaPresetMatchesStockDistributions) {
  std::vector<ConfigError> errors;
  const auto config = load_config_file(
      std::string(LATUNE_PRESET_DIR) + "/frama-c-eva.json", errors);
  ASSERT_TRUE(config.has_value());
  ASSERT_EQ(config->parameters.size(), 13u);

  const auto [base, delta] = extract(config->initial);
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < config->parameters.size(); ++i) {
      if (config->parameters[i].name == name) return i;
    }
    return std::size_t(9999);
  };
  EXPECT_EQ(base[index_of("-eva-slevel")], ParamValue::integer(0));
  EXPECT_EQ(base[index_of("-eva-ilevel")], ParamValue::integer(8));
  EXPECT_EQ(base[index_of("-eva-plevel")], ParamValue::integer(10));
  EXPECT_EQ(base[index_of("-eva-domains")],
            ParamValue::bits({true, false, false, false, false}));
  EXPECT_DOUBLE_EQ(
      std::get<PoissonDelta>(delta[index_of("-eva-slevel")]).lambda, 20.0);
  EXPECT_DOUBLE_EQ(
      std::get<PoissonDelta>(delta[index_of("-eva-auto-loop-unroll")]).lambda,
      10.0);
  EXPECT_DOUBLE_EQ(
      std::get<BernoulliDelta>(delta[index_of("-eva-split-return")]).q, 0.5);

  // the default base renders to explicit stock flags
  const auto argv =
      render_command(config->analyzer_profile, config->parameters,
                     config->program, base);
  auto has_pair = [&argv](const std::string& flag, const std::string& value) {
    for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
      if (argv[i] == flag && argv[i + 1] == value) return true;
    }
    return false;
  };
  EXPECT_TRUE(has_pair("-eva-slevel", "0"));
  EXPECT_TRUE(has_pair("-eva-domains", "cvalue"));
  EXPECT_TRUE(has_pair("-eva-equality-through-calls", "none"));
  EXPECT_NE(std::find(argv.begin(), argv.end(),
                      "-no-eva-octagon-through-calls"),
            argv.end());
  // empty split-return label is omitted by the preset rule
  EXPECT_EQ(std::find(argv.begin(), argv.end(), "-eva-split-return"),
            argv.end());
}

TEST(Config, MopsaPresetMatchesStockDistributions) {
  std::vector<ConfigError> errors;
  const auto config =
      load_config_file(std::string(LATUNE_PRESET_DIR) + "/mopsa.json", errors);
  ASSERT_TRUE(config.has_value());
  ASSERT_EQ(config->parameters.size(), 6u);
  const auto [base, delta] = extract(config->initial);
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < config->parameters.size(); ++i) {
      if (config->parameters[i].name == name) return i;
    }
    return std::size_t(9999);
  };
  EXPECT_EQ(base[index_of("-loop-unrolling")], ParamValue::integer(1));
  EXPECT_EQ(base[index_of("-numeric")], ParamValue::enum_index(0));
  EXPECT_DOUBLE_EQ(
      std::get<PoissonDelta>(delta[index_of("-loop-unrolling")]).lambda, 2.0);
  EXPECT_EQ(config->hyper.num_refine, 3);
}

TEST(Serialize, ValueRoundTripsIncludingInfinity) {
  testing::TestRand rnd(19);
  for (int iter = 0; iter < 400; ++iter) {
    const ParamType type = testing::random_type(rnd);
    const ParamValue v = testing::random_value(type, rnd, 30, true);
    std::string err;
    const auto back = value_from_json(type, value_to_json(type, v), err);
    ASSERT_TRUE(back.has_value()) << err;
    EXPECT_EQ(*back, v);
  }
}

TEST(Serialize, SettingRejectsUnknownAndMissingNames) {
  const Profile profile = {{"x", ParamType::integer()}};
  std::string err;
  EXPECT_FALSE(setting_from_json(profile, json{{"z", 1}}, err).has_value());
  EXPECT_NE(err.find("unknown"), std::string::npos);
  EXPECT_FALSE(setting_from_json(profile, json::object(), err).has_value());
  EXPECT_NE(err.find("missing"), std::string::npos);
}

TEST(Report, RecordsAreSelfDescribingAndCarrySettings) {
  const Profile profile = testing::int_profile(2);
  ReportContext ctx{profile, false};

  RoundReport round;
  round.round_index = 1;
  round.round_budget_seconds = 4.0;
  round.sampled = {testing::int_setting({1, 2})};
  round.outcomes = {AnalysisOutcome::completed(testing::int_setting({1, 2}),
                                               {"a", "b"}, 0.7),
                    AnalysisOutcome::failed(testing::int_setting({3, 3}),
                                            FailReason::timeout)};
  round.eta = 0.75;
  round.base_after = testing::int_setting({1, 2});
  round.delta_after = {PoissonDelta{2.0}, BernoulliDelta{0.25}};
  round.remaining_budget_seconds = 6.0;

  const json record = round_record(ctx, round);
  EXPECT_EQ(record.at("record"), "round");
  EXPECT_EQ(record.at("record_schema"), 1);
  EXPECT_FALSE(record.contains("ts"));
  EXPECT_EQ(record.at("outcomes").size(), 2u);
  EXPECT_EQ(record.at("outcomes")[0].at("alarms"),
            json::array({"a", "b"}));
  EXPECT_EQ(record.at("outcomes")[1].at("reason"), "timeout");

  std::string err;
  const auto setting = setting_of_record(profile, record, err);
  ASSERT_TRUE(setting.has_value());
  EXPECT_EQ(*setting, round.base_after);

  const json line = json::parse(to_report_line(record));
  EXPECT_EQ(line.dump(), record.dump());

  ReportContext stamped{profile, true};
  EXPECT_TRUE(round_record(stamped, round).contains("ts"));
}

}  // namespace
}  // namespace latune
