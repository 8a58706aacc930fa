#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latune/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"black-box parameter tuning for monotone static analyzers"};
  app.require_subcommand(1);

  std::string config_path;
  latune::TuneOverrides overrides;
  double budget = 0.0;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string report_path;

  auto* tune = app.add_subcommand("tune", "run the sample-analyze-refine loop");
  tune->add_option("--config", config_path, "config file")->required();
  auto* budget_opt = tune->add_option("--budget", budget, "override budget (seconds)");
  auto* seed_opt = tune->add_option("--seed", seed, "override rng seed");
  auto* jobs_opt = tune->add_option("--jobs", jobs, "override parallel analyses");
  auto* report_opt = tune->add_option("--report", report_path, "override report path");
  tune->add_flag("--no-timestamps", overrides.no_timestamps,
                 "omit wall-clock timestamps from report records");

  auto* validate = app.add_subcommand("validate", "check a config and exit");
  validate->add_option("--config", config_path, "config file")->required();

  latune::RenderSource render_source;
  auto* render = app.add_subcommand(
      "render", "print the analyzer invocation for a setting");
  render->add_option("--config", config_path, "config file")->required();
  auto* setting_opt = render->add_option("--setting", render_source.inline_json,
                                         "setting as a JSON object");
  auto* from_report_opt = render->add_option(
      "--from-report", render_source.from_report,
      "take the setting from a report record (PATH:INDEX)");
  setting_opt->excludes(from_report_opt);

  latune::BenchOptions bench_options;
  std::string seeds_csv = "0";
  auto* bench = app.add_subcommand(
      "bench", "compare tuning strategies on simulator benchmarks");
  bench->add_option("--models", bench_options.models_dir,
                    "directory of simulator benchmark configs")->required();
  bench->add_option("--budget", bench_options.budget_seconds,
                    "budget per strategy run (virtual seconds)")->required();
  bench->add_option("--seeds", seeds_csv, "comma-separated rng seeds");
  bench->add_option("--out", bench_options.out_path,
                    "write the table to a .csv or .jsonl file");
  bench->add_option("--strategies", bench_options.strategies,
                    "subset of: default expert refine");
  bench->add_option("--repeats", bench_options.repeats,
                    "tuning runs per row, best kept");
  bench->add_flag("--split-budget", bench_options.split_budget,
                  "divide the budget across repeats");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : latune::kExitConfig;
  }

  if (tune->parsed()) {
    if (*budget_opt) overrides.budget_seconds = budget;
    if (*seed_opt) overrides.seed = seed;
    if (*jobs_opt) overrides.jobs = jobs;
    if (*report_opt) overrides.report_path = report_path;
    return latune::cmd_tune(config_path, overrides, std::cout, std::cerr);
  }
  if (validate->parsed()) {
    return latune::cmd_validate(config_path, std::cout, std::cerr);
  }
  if (render->parsed()) {
    if (render_source.inline_json.empty() && render_source.from_report.empty()) {
      std::cerr << "render error: needs --setting or --from-report\n";
      return latune::kExitConfig;
    }
    return latune::cmd_render(config_path, render_source, std::cout, std::cerr);
  }
  if (bench->parsed()) {
    bench_options.seeds.clear();
    std::size_t pos = 0;
    while (pos <= seeds_csv.size()) {
      std::size_t comma = seeds_csv.find(',', pos);
      if (comma == std::string::npos) comma = seeds_csv.size();
      const std::string token = seeds_csv.substr(pos, comma - pos);
      if (!token.empty()) {
        try {
          bench_options.seeds.push_back(std::stoull(token));
        } catch (const std::exception&) {
          std::cerr << "bench error: bad seed '" << token << "'\n";
          return latune::kExitConfig;
        }
      }
      pos = comma + 1;
    }
    if (bench_options.seeds.empty()) {
      std::cerr << "bench error: no seeds\n";
      return latune::kExitConfig;
    }
    return latune::cmd_bench(bench_options, std::cout, std::cerr);
  }
  return latune::kExitConfig;
}
