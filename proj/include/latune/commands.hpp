#ifndef LATUNE_COMMANDS_HPP
#define LATUNE_COMMANDS_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "latune/config.hpp"
#include "latune/report.hpp"
#include "latune/strategy.hpp"

namespace latune {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitBaselineFailed = 2;

/// Scratch location. LATUNE_TMPDIR overrides TMPDIR overrides /tmp; the tool
/// itself writes nothing outside the report path, so this only steers tests
/// and stub fixtures.
inline std::string temp_dir() {
  if (const char* env = std::getenv("LATUNE_TMPDIR")) return env;
  if (const char* env = std::getenv("TMPDIR")) return env;
  return "/tmp";
}

namespace detail {

inline void print_config_errors(const std::vector<ConfigError>& errors,
                                std::ostream& err) {
  for (const auto& e : errors) {
    err << "config error: " << e.field << ": " << e.message << "\n";
  }
}

/// Pseudo argument vector for simulator runs, so final records and `render`
/// have a stable textual form even without an external command.
inline std::vector<std::string> sim_argv(const Profile& profile,
                                         const std::string& bench_id,
                                         const Setting& s) {
  std::vector<std::string> argv{"sim:" + bench_id};
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const nlohmann::json v = value_to_json(profile[i].type, s[i]);
    std::string text;
    if (v.is_string()) {
      text = v.get<std::string>();
    } else if (v.is_array()) {
      for (const auto& item : v) {
        if (!text.empty()) text += ",";
        text += item.get<std::string>();
      }
    } else {
      text = v.dump();
    }
    argv.push_back(profile[i].name + "=" + text);
  }
  return argv;
}

inline std::vector<std::string> argv_for(const TuneConfig& config,
                                         const Setting& s) {
  if (config.simulated) {
    return sim_argv(config.parameters, config.benchmark.id, s);
  }
  return render_command(config.analyzer_profile, config.parameters,
                        config.program, s);
}

}  // namespace detail

struct TuneOverrides {
  std::optional<double> budget_seconds;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> report_path;
  bool no_timestamps = false;
};

inline int cmd_tune(const std::string& config_path, const TuneOverrides& over,
                    std::ostream& out, std::ostream& err) {
  std::vector<ConfigError> errors;
  auto config = load_config_file(config_path, errors);
  if (!config) {
    detail::print_config_errors(errors, err);
    return kExitConfig;
  }
  if (over.budget_seconds) config->budget_seconds = *over.budget_seconds;
  if (over.seed) config->seed = RngSeed{*over.seed};
  if (over.jobs) config->hyper.jobs = *over.jobs;
  if (over.report_path) config->report_path = *over.report_path;
  if (config->budget_seconds <= 0.0) {
    err << "config error: budget_seconds: must be positive\n";
    return kExitConfig;
  }
  if (config->hyper.jobs < 1) {
    err << "config error: hyper.jobs: must be >= 1\n";
    return kExitConfig;
  }

  ReportContext ctx{config->parameters, !over.no_timestamps};
  std::ofstream report;
  if (!config->report_path.empty()) {
    report.open(config->report_path, std::ios::trunc);
    if (!report) {
      err << "config error: report_path: cannot open '" << config->report_path
          << "'\n";
      return kExitConfig;
    }
  }
  auto emit = [&report](const nlohmann::json& record) {
    if (report.is_open()) report << to_report_line(record) << std::flush;
  };

  const TuneRequest request = make_tune_request(*config);
  TuneObserver observer;
  observer.on_baseline = [&](std::size_t a_uni, double seconds) {
    emit(baseline_record(ctx, a_uni, seconds));
  };
  observer.on_round = [&](const RoundReport& round) {
    emit(round_record(ctx, round));
  };
  const TuneResult result = tune(request, observer);

  if (result.termination == Termination::baseline_failed) {
    emit(final_record(ctx, result,
                      detail::argv_for(*config, result.final_setting),
                      std::nullopt));
    err << "baseline analysis failed; cannot establish the alarm universe\n";
    return kExitBaselineFailed;
  }

  // score the final setting with one analysis
  std::optional<std::size_t> final_alarms;
  if (config->simulated) {
    final_alarms = sim_alarms(config->benchmark.model, result.final_setting).size();
  } else {
    const AnalysisOutcome scored = request.analyzer.analyze(
        config->program, result.final_setting, config->budget_seconds);
    if (scored.is_completed()) final_alarms = scored.result().alarms.size();
  }

  const auto argv = detail::argv_for(*config, result.final_setting);
  emit(final_record(ctx, result, argv, final_alarms));

  out << "final setting: "
      << setting_to_json(config->parameters, result.final_setting).dump() << "\n";
  out << "final command:";
  for (const auto& a : argv) out << " " << a;
  out << "\n";
  out << "baseline alarms: " << result.a_uni_size << "\n";
  if (final_alarms) {
    out << "final alarms: " << *final_alarms << "\n";
  } else {
    out << "final alarms: unavailable (scoring analysis failed)\n";
  }
  out << "rounds: " << result.rounds.size()
      << ", termination: " << to_string(result.termination) << "\n";
  return kExitOk;
}

inline int cmd_validate(const std::string& config_path, std::ostream& out,
                        std::ostream& err) {
  std::vector<ConfigError> errors;
  const auto config = load_config_file(config_path, errors);
  if (!config) {
    detail::print_config_errors(errors, err);
    return kExitConfig;
  }
  out << "ok: " << config_path << "\n";
  return kExitOk;
}

struct RenderSource {
  std::string inline_json;  // one of the two is set
  std::string from_report;  // PATH:INDEX
};

inline int cmd_render(const std::string& config_path, const RenderSource& src,
                      std::ostream& out, std::ostream& err) {
  std::vector<ConfigError> errors;
  const auto config = load_config_file(config_path, errors);
  if (!config) {
    detail::print_config_errors(errors, err);
    return kExitConfig;
  }

  Setting setting;
  std::string parse_err;
  if (!src.inline_json.empty()) {
    const nlohmann::json doc =
        nlohmann::json::parse(src.inline_json, nullptr, false);
    if (doc.is_discarded()) {
      err << "render error: --setting is not valid JSON\n";
      return kExitConfig;
    }
    auto s = setting_from_json(config->parameters, doc, parse_err);
    if (!s) {
      err << "render error: " << parse_err << "\n";
      return kExitConfig;
    }
    setting = std::move(*s);
  } else {
    const auto colon = src.from_report.rfind(':');
    if (colon == std::string::npos) {
      err << "render error: --from-report wants PATH:INDEX\n";
      return kExitConfig;
    }
    const std::string path = src.from_report.substr(0, colon);
    std::size_t index = 0;
    try {
      index = std::stoul(src.from_report.substr(colon + 1));
    } catch (const std::exception&) {
      err << "render error: --from-report wants PATH:INDEX\n";
      return kExitConfig;
    }
    std::ifstream in(path);
    if (!in) {
      err << "render error: cannot open report '" << path << "'\n";
      return kExitConfig;
    }
    std::string line;
    std::size_t seen = 0;
    bool found = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (seen++ != index) continue;
      const nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
      if (record.is_discarded()) {
        err << "render error: report line " << index << " is not valid JSON\n";
        return kExitConfig;
      }
      auto s = setting_of_record(config->parameters, record, parse_err);
      if (!s) {
        err << "render error: " << parse_err << "\n";
        return kExitConfig;
      }
      setting = std::move(*s);
      found = true;
      break;
    }
    if (!found) {
      err << "render error: report has no record " << index << "\n";
      return kExitConfig;
    }
  }

  std::vector<std::string> argv;
  try {
    argv = detail::argv_for(*config, setting);
  } catch (const std::exception& e) {
    err << "render error: " << e.what() << "\n";
    return kExitConfig;
  }
  for (const auto& a : argv) out << a << "\n";
  return kExitOk;
}

struct BenchOptions {
  std::string models_dir;
  double budget_seconds = 60.0;
  std::vector<std::uint64_t> seeds{0};
  std::string out_path;
  std::vector<std::string> strategies{"default", "expert", "refine"};
  int repeats = 1;
  bool split_budget = false;
};

inline int cmd_bench(const BenchOptions& options, std::ostream& out,
                     std::ostream& err) {
  namespace fs = std::filesystem;
  std::vector<BenchCase> cases;
  std::vector<HyperParams> hypers;
  std::vector<std::string> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(options.models_dir, ec)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  }
  if (ec) {
    err << "bench error: cannot read '" << options.models_dir << "'\n";
    return kExitConfig;
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::vector<ConfigError> errors;
    const auto config = load_config_file(file, errors);
    if (!config) {
      err << "in " << file << ":\n";
      detail::print_config_errors(errors, err);
      return kExitConfig;
    }
    if (!config->simulated) {
      err << "bench error: " << file << ": bench runs on simulator configs\n";
      return kExitConfig;
    }
    cases.push_back({config->benchmark, config->initial, config->expert_ladder});
    hypers.push_back(config->hyper);
  }
  if (cases.empty()) {
    err << "bench error: no .json models under '" << options.models_dir << "'\n";
    return kExitConfig;
  }

  std::vector<Strategy> strategies;
  for (const auto& name : options.strategies) {
    if (name == "default") {
      strategies.emplace_back(DefaultStrategy{});
    } else if (name == "expert") {
      strategies.emplace_back(ExpertStrategy{});
    } else if (name == "refine") {
      strategies.emplace_back(RefineLoopStrategy{hypers.front()});
    } else {
      err << "bench error: unknown strategy '" << name << "'\n";
      return kExitConfig;
    }
  }

  std::vector<RngSeed> seeds;
  for (std::uint64_t s : options.seeds) seeds.push_back(RngSeed{s});
  const CompareOptions compare_options{options.repeats, options.split_budget};
  const auto table =
      compare(cases, strategies, options.budget_seconds, seeds, compare_options);

  std::ostringstream body;
  const bool jsonl = options.out_path.size() >= 6 &&
                     options.out_path.rfind(".jsonl") ==
                         options.out_path.size() - 6;
  if (jsonl) {
    for (const auto& row : table) {
      for (const auto& s : row.strategies) {
        nlohmann::json record{{"benchmark", row.benchmark_id},
                              {"seed", row.seed},
                              {"strategy", s.strategy},
                              {"alarms", s.run.alarm_count},
                              {"identification_seconds",
                               s.run.identification_seconds},
                              {"analysis_seconds", s.run.analysis_seconds},
                              {"found_result", s.run.found_result},
                              {"tied_best", s.tied_best},
                              {"exclusively_best", s.exclusively_best}};
        body << record.dump() << "\n";
      }
    }
  } else {
    body << "benchmark,seed,strategy,alarms,identification_seconds,"
            "analysis_seconds,found_result,tied_best,exclusively_best\n";
    for (const auto& row : table) {
      for (const auto& s : row.strategies) {
        body << row.benchmark_id << "," << row.seed << "," << s.strategy << ","
             << s.run.alarm_count << "," << s.run.identification_seconds << ","
             << s.run.analysis_seconds << "," << (s.run.found_result ? 1 : 0)
             << "," << (s.tied_best ? 1 : 0) << ","
             << (s.exclusively_best ? 1 : 0) << "\n";
      }
    }
  }
  if (!options.out_path.empty()) {
    std::ofstream file(options.out_path, std::ios::trunc);
    if (!file) {
      err << "bench error: cannot write '" << options.out_path << "'\n";
      return kExitConfig;
    }
    file << body.str();
  } else {
    out << body.str();
  }

  // summary in the best / tied-best counting style
  out << "rows: " << table.size() << "\n";
  for (const auto& name : options.strategies) {
    std::size_t best = 0;
    std::size_t exclusive = 0;
    for (const auto& row : table) {
      for (const auto& s : row.strategies) {
        if (s.strategy != name) continue;
        if (s.tied_best) ++best;
        if (s.exclusively_best) ++exclusive;
      }
    }
    out << name << ": best " << best << "/" << table.size() << ", exclusively "
        << exclusive << "/" << table.size() << "\n";
  }
  return kExitOk;
}

}  // namespace latune

#endif  // LATUNE_COMMANDS_HPP
