#ifndef LATUNE_CONFIG_HPP
#define LATUNE_CONFIG_HPP

#include <fstream>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "latune/engine.hpp"
#include "latune/serialize.hpp"

namespace latune {

struct ConfigError {
  std::string field;
  std::string message;
};

/// Parsed, validated tuning configuration. One file fully describes a run:
/// the parameter profile, the initial distribution, the analyzer (external
/// command or simulator benchmark), hyper-parameters and budget.
struct TuneConfig {
  int schema_version = 1;
  Profile parameters;
  JointDistribution initial;
  HyperParams hyper;
  double budget_seconds = 3600.0;
  RngSeed seed{0};
  std::string report_path;
  std::optional<double> baseline_cap_seconds;
  bool simulated = false;
  AnalyzerProfile analyzer_profile;  // when external
  SimBenchmark benchmark;            // when simulated
  ProgramRef program;
  std::vector<Setting> expert_ladder;  // optional; bench falls back to a diagonal
};

namespace detail {

class ConfigReader {
 public:
  explicit ConfigReader(std::vector<ConfigError>& errors) : errors_(errors) {}

  void fail(const std::string& field, const std::string& message) {
    errors_.push_back({field, message});
  }

  bool expect_keys(const nlohmann::json& obj, const std::string& where,
                   const std::set<std::string>& allowed) {
    bool ok = true;
    for (const auto& [key, unused] : obj.items()) {
      (void)unused;
      if (!key.empty() && key.front() == '_') continue;  // comment entries
      if (allowed.count(key) == 0) {
        fail(where.empty() ? key : where + "." + key, "unknown field");
        ok = false;
      }
    }
    return ok;
  }

  template <typename T>
  std::optional<T> get(const nlohmann::json& obj, const std::string& where,
                       const std::string& key, bool required) {
    if (!obj.contains(key)) {
      if (required) fail(join(where, key), "missing field");
      return std::nullopt;
    }
    try {
      return obj.at(key).get<T>();
    } catch (const std::exception&) {
      fail(join(where, key), "wrong type");
      return std::nullopt;
    }
  }

  static std::string join(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
  }

 private:
  std::vector<ConfigError>& errors_;
};

inline std::optional<HyperParams> parse_hyper(const nlohmann::json& j,
                                              ConfigReader& r) {
  HyperParams hyper;
  if (!j.is_object()) {
    r.fail("hyper", "must be an object");
    return std::nullopt;
  }
  r.expect_keys(j, "hyper",
                {"alpha", "beta_mode", "beta", "num_sample", "num_refine",
                 "jobs"});
  if (auto v = r.get<double>(j, "hyper", "alpha", false)) hyper.alpha = *v;
  if (auto v = r.get<std::string>(j, "hyper", "beta_mode", false)) {
    if (*v == "literal") {
      hyper.beta_mode = BetaMode::Literal;
    } else if (*v == "fit-series") {
      hyper.beta_mode = BetaMode::FitSeries;
    } else {
      r.fail("hyper.beta_mode", "must be \"literal\" or \"fit-series\"");
    }
  }
  if (auto v = r.get<double>(j, "hyper", "beta", false)) hyper.beta = *v;
  if (auto v = r.get<int>(j, "hyper", "num_sample", false)) hyper.num_sample = *v;
  if (auto v = r.get<int>(j, "hyper", "num_refine", false)) hyper.num_refine = *v;
  if (auto v = r.get<int>(j, "hyper", "jobs", false)) hyper.jobs = *v;

  if (!(hyper.alpha > 0.0 && hyper.alpha < 1.0)) {
    r.fail("hyper.alpha", "must lie in (0,1)");
  }
  if (!(hyper.beta > 0.0)) r.fail("hyper.beta", "must be positive");
  if (hyper.num_sample < 1) r.fail("hyper.num_sample", "must be >= 1");
  if (hyper.num_refine < 0) r.fail("hyper.num_refine", "must be >= 0");
  if (hyper.jobs < 1) r.fail("hyper.jobs", "must be >= 1");
  return hyper;
}

inline void parse_parameters(const nlohmann::json& doc, TuneConfig& config,
                             ConfigReader& r) {
  if (!doc.contains("parameters") || !doc.at("parameters").is_array()) {
    r.fail("parameters", "missing or not an array");
    return;
  }
  std::set<std::string> seen;
  std::size_t index = 0;
  for (const auto& entry : doc.at("parameters")) {
    const std::string where = "parameters[" + std::to_string(index++) + "]";
    if (!entry.is_object()) {
      r.fail(where, "must be an object");
      continue;
    }
    r.expect_keys(entry, where, {"name", "type"});
    const auto name = r.get<std::string>(entry, where, "name", true);
    if (!name) continue;
    if (!seen.insert(*name).second) {
      r.fail(where + ".name", "duplicate parameter '" + *name + "'");
      continue;
    }
    if (!entry.contains("type")) {
      r.fail(where + ".type", "missing field");
      continue;
    }
    std::string err;
    auto type = type_from_json(entry.at("type"), err);
    if (!type) {
      r.fail(where + ".type", err);
      continue;
    }
    config.parameters.push_back({*name, std::move(*type)});
  }
  if (config.parameters.empty()) r.fail("parameters", "no valid parameters");
}

inline void parse_initial_distribution(const nlohmann::json& doc,
                                       TuneConfig& config, ConfigReader& r) {
  if (!doc.contains("initial_distribution") ||
      !doc.at("initial_distribution").is_object()) {
    r.fail("initial_distribution", "missing or not an object");
    return;
  }
  const auto& dist = doc.at("initial_distribution");
  for (const auto& [key, unused] : dist.items()) {
    (void)unused;
    if (!key.empty() && key.front() == '_') continue;
    bool known = false;
    for (const auto& spec : config.parameters) known = known || spec.name == key;
    if (!known) {
      r.fail("initial_distribution." + key, "no such parameter");
    }
  }
  for (const auto& spec : config.parameters) {
    const std::string where = "initial_distribution." + spec.name;
    if (!dist.contains(spec.name)) {
      r.fail(where, "missing distribution for parameter '" + spec.name + "'");
      continue;
    }
    const auto& entry = dist.at(spec.name);
    if (!entry.is_object()) {
      r.fail(where, "must be an object");
      continue;
    }
    r.expect_keys(entry, where, {"base", "delta"});
    if (!entry.contains("base") || !entry.contains("delta")) {
      r.fail(where, "needs both base and delta");
      continue;
    }
    std::string err;
    auto base = value_from_json(spec.type, entry.at("base"), err);
    if (!base) {
      r.fail(where + ".base", err);
      continue;
    }
    auto delta = delta_from_json(entry.at("delta"), err);
    if (!delta) {
      r.fail(where + ".delta", err);
      continue;
    }
    ParamDistribution pd{spec, std::move(*base), std::move(*delta)};
    const std::string check = check_param_distribution(pd);
    if (!check.empty()) {
      r.fail(where, check);
      continue;
    }
    config.initial.params.push_back(std::move(pd));
  }
}

inline void parse_extraction(const nlohmann::json& j, ExtractionRule& rule,
                             const std::string& where, ConfigReader& r) {
  if (!j.is_object()) {
    r.fail(where, "must be an object");
    return;
  }
  r.expect_keys(j, where, {"mode", "pattern", "pointer", "normalization"});
  std::string mode = "regex-lines";
  if (auto v = r.get<std::string>(j, where, "mode", false)) mode = *v;
  if (mode == "regex-lines") {
    rule.mode = ExtractionRule::Mode::RegexLines;
    if (auto v = r.get<std::string>(j, where, "pattern", true)) {
      rule.pattern = *v;
      try {
        std::regex probe(rule.pattern);
      } catch (const std::regex_error& e) {
        r.fail(where + ".pattern", std::string("invalid regex: ") + e.what());
      }
    }
  } else if (mode == "json-pointer") {
    rule.mode = ExtractionRule::Mode::JsonPointer;
    if (auto v = r.get<std::string>(j, where, "pointer", true)) {
      rule.pattern = *v;
      try {
        nlohmann::json::json_pointer probe(rule.pattern);
      } catch (const nlohmann::json::exception&) {
        r.fail(where + ".pointer", "invalid json pointer");
      }
    }
  } else {
    r.fail(where + ".mode", "must be \"regex-lines\" or \"json-pointer\"");
  }
  if (j.contains("normalization")) {
    rule.normalization.clear();
    if (!j.at("normalization").is_array()) {
      r.fail(where + ".normalization", "must be an array");
      return;
    }
    for (const auto& step : j.at("normalization")) {
      const std::string s = step.is_string() ? step.get<std::string>() : "";
      if (s == "strip") {
        rule.normalization.push_back(NormStep::Strip);
      } else if (s == "collapse-spaces") {
        rule.normalization.push_back(NormStep::CollapseSpaces);
      } else if (s == "drop-line-numbers") {
        rule.normalization.push_back(NormStep::DropLineNumbers);
      } else {
        r.fail(where + ".normalization", "unknown step");
      }
    }
  }
}

inline void parse_rendering(const nlohmann::json& j, const ParamSpec& spec,
                            RenderRule& rule, const std::string& where,
                            ConfigReader& r) {
  if (!j.is_object()) {
    r.fail(where, "must be an object");
    return;
  }
  r.expect_keys(j, where,
                {"style", "flag", "negative_flag", "separator", "empty_set",
                 "omit_label"});
  std::string style;
  if (auto v = r.get<std::string>(j, where, "style", true)) style = *v;
  if (auto v = r.get<std::string>(j, where, "flag", true)) rule.flag = *v;
  if (auto v = r.get<std::string>(j, where, "negative_flag", false)) {
    rule.negative_flag = *v;
  }
  if (auto v = r.get<std::string>(j, where, "separator", false)) {
    rule.separator = *v;
  }
  if (auto v = r.get<std::string>(j, where, "empty_set", false)) {
    if (*v == "omit") {
      rule.omit_empty_set = true;
    } else if (*v == "empty-arg") {
      rule.omit_empty_set = false;
    } else {
      r.fail(where + ".empty_set", "must be \"omit\" or \"empty-arg\"");
    }
  }
  if (j.contains("omit_label")) {
    if (auto v = r.get<std::string>(j, where, "omit_label", false)) {
      rule.omit_label = *v;
    }
  }

  const ParamKind kind = spec.type.kind();
  if (style == "integer") {
    rule.style = RenderStyle::IntegerArg;
    if (kind == ParamKind::StringSet) {
      r.fail(where + ".style", "integer style does not fit a set parameter");
    }
  } else if (style == "enum-label") {
    rule.style = RenderStyle::EnumLabelArg;
    if (kind != ParamKind::OrderedEnum) {
      r.fail(where + ".style", "enum-label style needs an enum parameter");
    }
  } else if (style == "bool-literal") {
    rule.style = RenderStyle::BoolLiteralArg;
    if (kind != ParamKind::Boolean) {
      r.fail(where + ".style", "bool-literal style needs a boolean parameter");
    }
  } else if (style == "presence") {
    rule.style = RenderStyle::PresenceFlag;
    if (kind != ParamKind::Boolean) {
      r.fail(where + ".style", "presence style needs a boolean parameter");
    }
  } else if (style == "set-joined") {
    rule.style = RenderStyle::SetJoinedArg;
    if (kind != ParamKind::StringSet) {
      r.fail(where + ".style", "set-joined style needs a set parameter");
    }
  } else if (!style.empty()) {
    r.fail(where + ".style", "unknown style '" + style + "'");
  }
}

inline void parse_external_analyzer(const nlohmann::json& j, TuneConfig& config,
                                    ConfigReader& r) {
  r.expect_keys(j, "analyzer",
                {"kind", "command_template", "workdir", "env",
                 "accept_exit_codes", "timeout_grace_seconds",
                 "alarm_extraction", "param_renderings"});
  auto& profile = config.analyzer_profile;
  if (auto v = r.get<std::vector<std::string>>(j, "analyzer", "command_template",
                                               true)) {
    profile.command_template = *v;
    if (profile.command_template.empty()) {
      r.fail("analyzer.command_template", "must not be empty");
    }
  }
  if (auto v = r.get<std::string>(j, "analyzer", "workdir", false)) {
    profile.workdir = *v;
  }
  if (j.contains("env")) {
    if (auto v = r.get<std::map<std::string, std::string>>(j, "analyzer", "env",
                                                           false)) {
      profile.env = *v;
    }
  }
  if (auto v = r.get<std::vector<int>>(j, "analyzer", "accept_exit_codes",
                                       false)) {
    profile.accept_exit_codes = *v;
  }
  if (auto v = r.get<double>(j, "analyzer", "timeout_grace_seconds", false)) {
    profile.timeout_grace_seconds = *v;
    if (*v < 0.0) r.fail("analyzer.timeout_grace_seconds", "must be >= 0");
  }
  if (j.contains("alarm_extraction")) {
    parse_extraction(j.at("alarm_extraction"), profile.alarm_extraction,
                     "analyzer.alarm_extraction", r);
  } else {
    r.fail("analyzer.alarm_extraction", "missing field");
  }
  if (!j.contains("param_renderings") || !j.at("param_renderings").is_object()) {
    r.fail("analyzer.param_renderings", "missing or not an object");
    return;
  }
  const auto& renderings = j.at("param_renderings");
  for (const auto& [key, unused] : renderings.items()) {
    (void)unused;
    if (!key.empty() && key.front() == '_') continue;
    bool known = false;
    for (const auto& spec : config.parameters) known = known || spec.name == key;
    if (!known) r.fail("analyzer.param_renderings." + key, "no such parameter");
  }
  for (const auto& spec : config.parameters) {
    const std::string where = "analyzer.param_renderings." + spec.name;
    if (!renderings.contains(spec.name)) {
      r.fail(where, "missing rendering for parameter '" + spec.name + "'");
      continue;
    }
    RenderRule rule;
    parse_rendering(renderings.at(spec.name), spec, rule, where, r);
    profile.param_renderings[spec.name] = std::move(rule);
  }
}

inline void parse_sim_analyzer(const nlohmann::json& j, TuneConfig& config,
                               ConfigReader& r) {
  r.expect_keys(j, "analyzer", {"kind", "benchmark"});
  if (!j.contains("benchmark") || !j.at("benchmark").is_object()) {
    r.fail("analyzer.benchmark", "missing or not an object");
    return;
  }
  const auto& b = j.at("benchmark");
  r.expect_keys(b, "analyzer.benchmark",
                {"id", "base_cost_seconds", "cost_weights", "failure_cap",
                 "alarms", "generator"});
  SimBenchmark& bench = config.benchmark;
  if (auto v = r.get<std::string>(b, "analyzer.benchmark", "id", true)) {
    bench.id = *v;
  }

  if (b.contains("generator")) {
    const auto& g = b.at("generator");
    const std::string where = "analyzer.benchmark.generator";
    if (!g.is_object()) {
      r.fail(where, "must be an object");
      return;
    }
    ConfigReader sub = r;
    sub.expect_keys(g, where,
                    {"seed", "n_params", "n_alarms", "max_threshold",
                     "cost_scale"});
    GenKnobs knobs;
    if (auto v = r.get<std::uint64_t>(g, where, "seed", true)) {
      bench.gen_seed = RngSeed{*v};
    }
    if (auto v = r.get<std::size_t>(g, where, "n_params", true)) {
      knobs.n_params = *v;
    }
    if (auto v = r.get<std::size_t>(g, where, "n_alarms", true)) {
      knobs.n_alarms = *v;
    }
    if (auto v = r.get<std::uint64_t>(g, where, "max_threshold", true)) {
      knobs.max_threshold = *v;
    }
    if (auto v = r.get<double>(g, where, "cost_scale", true)) {
      knobs.cost_scale = *v;
    }
    if (knobs.n_params != config.parameters.size()) {
      r.fail(where + ".n_params", "does not match the parameters section");
      return;
    }
    for (const auto& spec : config.parameters) {
      if (spec.type.kind() != ParamKind::Integer) {
        r.fail(where, "generated benchmarks use integer parameters only");
        return;
      }
    }
    const SimBenchmark generated = gen_benchmark(bench.gen_seed, knobs);
    bench.knobs = knobs;
    bench.model = generated.model;
    bench.model.profile = config.parameters;  // keep configured names
    return;
  }

  bench.model.profile = config.parameters;
  if (auto v = r.get<double>(b, "analyzer.benchmark", "base_cost_seconds",
                             true)) {
    bench.model.base_cost_seconds = *v;
    if (!(*v > 0.0)) {
      r.fail("analyzer.benchmark.base_cost_seconds", "must be positive");
    }
  }
  if (auto v = r.get<std::vector<double>>(b, "analyzer.benchmark",
                                          "cost_weights", true)) {
    bench.model.cost_weights = *v;
    if (v->size() != config.parameters.size()) {
      r.fail("analyzer.benchmark.cost_weights",
             "needs one weight per parameter");
    }
    for (double w : *v) {
      if (w < 0.0) r.fail("analyzer.benchmark.cost_weights", "must be >= 0");
    }
  }
  if (b.contains("failure_cap")) {
    if (auto v = r.get<double>(b, "analyzer.benchmark", "failure_cap", false)) {
      bench.model.failure_cap = *v;
      if (!(*v > 0.0)) r.fail("analyzer.benchmark.failure_cap", "must be positive");
    }
  }
  if (!b.contains("alarms") || !b.at("alarms").is_array()) {
    r.fail("analyzer.benchmark.alarms", "missing or not an array");
    return;
  }
  std::size_t index = 0;
  for (const auto& alarm : b.at("alarms")) {
    const std::string where =
        "analyzer.benchmark.alarms[" + std::to_string(index++) + "]";
    if (!alarm.is_object()) {
      r.fail(where, "must be an object");
      continue;
    }
    r.expect_keys(alarm, where, {"id", "threshold", "thresholds"});
    SimAlarm out;
    if (auto v = r.get<std::string>(alarm, where, "id", true)) out.id = *v;
    std::vector<nlohmann::json> threshold_docs;
    if (alarm.contains("threshold")) threshold_docs.push_back(alarm.at("threshold"));
    if (alarm.contains("thresholds") && alarm.at("thresholds").is_array()) {
      for (const auto& t : alarm.at("thresholds")) threshold_docs.push_back(t);
    }
    if (threshold_docs.empty()) {
      r.fail(where, "needs a threshold");
      continue;
    }
    for (const auto& doc : threshold_docs) {
      std::string err;
      auto t = setting_from_json(config.parameters, doc, err);
      if (!t) {
        r.fail(where + ".threshold", err);
        continue;
      }
      bool finite = true;
      for (const auto& v : t->values()) finite = finite && !v.is_infinity();
      if (!finite) {
        r.fail(where + ".threshold", "thresholds must be finite");
        continue;
      }
      out.thresholds.push_back(std::move(*t));
    }
    if (!out.thresholds.empty()) bench.model.alarms.push_back(std::move(out));
  }
}

}  // namespace detail

/// Parse and validate a whole configuration document. Returns the config
/// when `errors` stays empty.
inline std::optional<TuneConfig> parse_config(const nlohmann::json& doc,
                                              std::vector<ConfigError>& errors) {
  detail::ConfigReader r(errors);
  TuneConfig config;
  if (!doc.is_object()) {
    r.fail("", "config must be a JSON object");
    return std::nullopt;
  }
  r.expect_keys(doc, "",
                {"schema_version", "parameters", "initial_distribution",
                 "hyper", "budget_seconds", "seed", "report_path",
                 "baseline_cap_seconds", "analyzer", "program",
                 "expert_ladder"});

  if (auto v = r.get<int>(doc, "", "schema_version", true)) {
    config.schema_version = *v;
    if (*v != 1) r.fail("schema_version", "unsupported version");
  }
  detail::parse_parameters(doc, config, r);
  detail::parse_initial_distribution(doc, config, r);
  if (doc.contains("hyper")) {
    if (auto h = detail::parse_hyper(doc.at("hyper"), r)) config.hyper = *h;
  }
  if (auto v = r.get<double>(doc, "", "budget_seconds", true)) {
    config.budget_seconds = *v;
    if (!(*v > 0.0)) r.fail("budget_seconds", "must be positive");
  }
  if (auto v = r.get<std::uint64_t>(doc, "", "seed", false)) {
    config.seed = RngSeed{*v};
  }
  if (auto v = r.get<std::string>(doc, "", "report_path", false)) {
    config.report_path = *v;
  }
  if (doc.contains("baseline_cap_seconds")) {
    if (auto v = r.get<double>(doc, "", "baseline_cap_seconds", false)) {
      config.baseline_cap_seconds = *v;
      if (!(*v > 0.0)) r.fail("baseline_cap_seconds", "must be positive");
    }
  }

  if (!doc.contains("program")) {
    config.program = {"program", {}};
  } else if (doc.at("program").is_object()) {
    r.expect_keys(doc.at("program"), "program", {"identifier", "sources"});
    if (auto v = r.get<std::string>(doc.at("program"), "program", "identifier",
                                    false)) {
      config.program.identifier = *v;
    }
    if (auto v = r.get<std::vector<std::string>>(doc.at("program"), "program",
                                                 "sources", false)) {
      config.program.source_paths = *v;
    }
  } else {
    r.fail("program", "must be an object");
  }

  if (!doc.contains("analyzer") || !doc.at("analyzer").is_object()) {
    r.fail("analyzer", "missing or not an object");
  } else {
    const auto kind =
        r.get<std::string>(doc.at("analyzer"), "analyzer", "kind", true);
    if (kind && *kind == "external") {
      config.simulated = false;
      detail::parse_external_analyzer(doc.at("analyzer"), config, r);
    } else if (kind && *kind == "simulator") {
      config.simulated = true;
      detail::parse_sim_analyzer(doc.at("analyzer"), config, r);
      if (config.program.identifier == "program") {
        config.program.identifier = config.benchmark.id;
      }
    } else if (kind) {
      r.fail("analyzer.kind", "must be \"external\" or \"simulator\"");
    }
  }

  if (doc.contains("expert_ladder")) {
    if (!doc.at("expert_ladder").is_array()) {
      r.fail("expert_ladder", "must be an array of settings");
    } else {
      std::size_t index = 0;
      for (const auto& entry : doc.at("expert_ladder")) {
        const std::string where =
            "expert_ladder[" + std::to_string(index++) + "]";
        std::string err;
        auto s = setting_from_json(config.parameters, entry, err);
        if (!s) {
          r.fail(where, err);
          continue;
        }
        config.expert_ladder.push_back(std::move(*s));
      }
      for (std::size_t i = 0; i + 1 < config.expert_ladder.size(); ++i) {
        if (!setting_leq(config.expert_ladder[i], config.expert_ladder[i + 1]) ||
            config.expert_ladder[i] == config.expert_ladder[i + 1]) {
          r.fail("expert_ladder", "must strictly increase in the lattice order");
          break;
        }
      }
    }
  }

  if (!errors.empty()) return std::nullopt;
  return config;
}

inline std::optional<TuneConfig> load_config_file(
    const std::string& path, std::vector<ConfigError>& errors) {
  std::ifstream in(path);
  if (!in) {
    errors.push_back({path, "cannot open config file"});
    return std::nullopt;
  }
  const nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    errors.push_back({path, "invalid JSON"});
    return std::nullopt;
  }
  return parse_config(doc, errors);
}

/// Canonical serialization; parse(config_to_json(c)) == c.
inline nlohmann::json config_to_json(const TuneConfig& config) {
  nlohmann::json doc;
  doc["schema_version"] = config.schema_version;
  doc["budget_seconds"] = config.budget_seconds;
  doc["seed"] = config.seed.value;
  if (!config.report_path.empty()) doc["report_path"] = config.report_path;
  if (config.baseline_cap_seconds) {
    doc["baseline_cap_seconds"] = *config.baseline_cap_seconds;
  }
  doc["hyper"] = {
      {"alpha", config.hyper.alpha},
      {"beta_mode",
       config.hyper.beta_mode == BetaMode::Literal ? "literal" : "fit-series"},
      {"beta", config.hyper.beta},
      {"num_sample", config.hyper.num_sample},
      {"num_refine", config.hyper.num_refine},
      {"jobs", config.hyper.jobs},
  };
  doc["parameters"] = nlohmann::json::array();
  for (const auto& spec : config.parameters) {
    doc["parameters"].push_back(
        {{"name", spec.name}, {"type", type_to_json(spec.type)}});
  }
  doc["initial_distribution"] = nlohmann::json::object();
  for (const auto& pd : config.initial.params) {
    doc["initial_distribution"][pd.spec.name] = {
        {"base", value_to_json(pd.spec.type, pd.base)},
        {"delta", delta_to_json(pd.delta)}};
  }
  doc["program"] = {{"identifier", config.program.identifier},
                    {"sources", config.program.source_paths}};
  if (config.simulated) {
    nlohmann::json alarms = nlohmann::json::array();
    for (const auto& alarm : config.benchmark.model.alarms) {
      nlohmann::json thresholds = nlohmann::json::array();
      for (const auto& t : alarm.thresholds) {
        thresholds.push_back(setting_to_json(config.parameters, t));
      }
      alarms.push_back({{"id", alarm.id}, {"thresholds", thresholds}});
    }
    nlohmann::json bench = {
        {"id", config.benchmark.id},
        {"base_cost_seconds", config.benchmark.model.base_cost_seconds},
        {"cost_weights", config.benchmark.model.cost_weights},
        {"alarms", alarms}};
    if (config.benchmark.model.failure_cap) {
      bench["failure_cap"] = *config.benchmark.model.failure_cap;
    }
    doc["analyzer"] = {{"kind", "simulator"}, {"benchmark", bench}};
  } else {
    const auto& profile = config.analyzer_profile;
    nlohmann::json renderings = nlohmann::json::object();
    for (const auto& [name, rule] : profile.param_renderings) {
      nlohmann::json out;
      switch (rule.style) {
        case RenderStyle::IntegerArg: out["style"] = "integer"; break;
        case RenderStyle::EnumLabelArg: out["style"] = "enum-label"; break;
        case RenderStyle::BoolLiteralArg: out["style"] = "bool-literal"; break;
        case RenderStyle::PresenceFlag: out["style"] = "presence"; break;
        case RenderStyle::SetJoinedArg: out["style"] = "set-joined"; break;
      }
      out["flag"] = rule.flag;
      if (!rule.negative_flag.empty()) out["negative_flag"] = rule.negative_flag;
      if (rule.style == RenderStyle::SetJoinedArg) {
        out["separator"] = rule.separator;
        out["empty_set"] = rule.omit_empty_set ? "omit" : "empty-arg";
      }
      if (rule.omit_label) out["omit_label"] = *rule.omit_label;
      renderings[name] = out;
    }
    nlohmann::json extraction;
    if (profile.alarm_extraction.mode == ExtractionRule::Mode::RegexLines) {
      extraction["mode"] = "regex-lines";
      extraction["pattern"] = profile.alarm_extraction.pattern;
    } else {
      extraction["mode"] = "json-pointer";
      extraction["pointer"] = profile.alarm_extraction.pattern;
    }
    nlohmann::json steps = nlohmann::json::array();
    for (NormStep step : profile.alarm_extraction.normalization) {
      switch (step) {
        case NormStep::Strip: steps.push_back("strip"); break;
        case NormStep::CollapseSpaces: steps.push_back("collapse-spaces"); break;
        case NormStep::DropLineNumbers:
          steps.push_back("drop-line-numbers");
          break;
      }
    }
    extraction["normalization"] = steps;
    doc["analyzer"] = {{"kind", "external"},
                       {"command_template", profile.command_template},
                       {"workdir", profile.workdir},
                       {"env", profile.env},
                       {"accept_exit_codes", profile.accept_exit_codes},
                       {"timeout_grace_seconds", profile.timeout_grace_seconds},
                       {"alarm_extraction", extraction},
                       {"param_renderings", renderings}};
  }
  if (!config.expert_ladder.empty()) {
    doc["expert_ladder"] = nlohmann::json::array();
    for (const auto& s : config.expert_ladder) {
      doc["expert_ladder"].push_back(setting_to_json(config.parameters, s));
    }
  }
  return doc;
}

inline AnalyzerHandle make_handle(const TuneConfig& config) {
  if (config.simulated) {
    return AnalyzerHandle::simulated(config.benchmark.model);
  }
  return AnalyzerHandle::external(config.analyzer_profile, config.parameters);
}

inline TuneRequest make_tune_request(const TuneConfig& config) {
  TuneRequest req;
  req.profile = config.parameters;
  req.initial = config.initial;
  req.budget_seconds = config.budget_seconds;
  req.hyper = config.hyper;
  req.analyzer = make_handle(config);
  req.program = config.program;
  req.seed = config.seed;
  req.baseline_cap_seconds = config.baseline_cap_seconds;
  return req;
}

}  // namespace latune

#endif  // LATUNE_CONFIG_HPP
