#ifndef LATUNE_STRATEGY_HPP
#define LATUNE_STRATEGY_HPP

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "latune/engine.hpp"
#include "latune/simulator.hpp"

namespace latune {

/// Analyze once under the initial base and take whatever it reports.
struct DefaultStrategy {};

/// Climb a fixed precision ladder until the budget runs out; the result is
/// the last rung whose analysis completed.
struct ExpertStrategy {
  std::vector<Setting> ladder;  // non-empty, strictly increasing
};

/// Run the tuning loop, then score its final setting with one analysis.
struct RefineLoopStrategy {
  HyperParams hyper;
};

using Strategy = std::variant<DefaultStrategy, ExpertStrategy, RefineLoopStrategy>;

inline const char* strategy_name(const Strategy& s) {
  if (std::holds_alternative<DefaultStrategy>(s)) return "default";
  if (std::holds_alternative<ExpertStrategy>(s)) return "expert";
  return "refine";
}

struct StrategyRun {
  Setting final_setting;
  std::size_t alarm_count = 0;
  double identification_seconds = 0.0;  // time spent finding the setting
  double analysis_seconds = 0.0;        // one analysis under that setting
  bool found_result = true;  // false: nothing completed within the budget
};

/// The ladder every rung of which raises all parameters together, the way
/// bundled precision levels do. Fractions map to each kind's range; integer
/// coordinates scale up to `max_int`.
inline std::vector<Setting> make_diagonal_ladder(const Profile& profile,
                                                 std::size_t rungs,
                                                 std::uint64_t max_int) {
  std::vector<Setting> ladder;
  for (std::size_t j = 0; j < rungs; ++j) {
    const double f =
        rungs <= 1 ? 1.0 : static_cast<double>(j) / static_cast<double>(rungs - 1);
    std::vector<ParamValue> coords;
    for (const auto& spec : profile) {
      switch (spec.type.kind()) {
        case ParamKind::Integer:
          coords.push_back(ParamValue::integer(
              static_cast<std::uint64_t>(std::llround(f * static_cast<double>(max_int)))));
          break;
        case ParamKind::Boolean:
          coords.push_back(ParamValue::boolean(f >= 0.5));
          break;
        case ParamKind::OrderedEnum:
          coords.push_back(ParamValue::enum_index(static_cast<std::size_t>(
              std::llround(f * static_cast<double>(spec.type.label_count() - 1)))));
          break;
        case ParamKind::StringSet: {
          const std::size_t c = spec.type.cardinality();
          const auto selected =
              static_cast<std::size_t>(std::ceil(f * static_cast<double>(c)));
          std::vector<bool> bits(c, false);
          for (std::size_t i = 0; i < selected; ++i) bits[i] = true;
          coords.push_back(ParamValue::bits(std::move(bits)));
          break;
        }
      }
    }
    Setting rung(std::move(coords));
    if (ladder.empty() || ladder.back() != rung) ladder.push_back(std::move(rung));
  }
  return ladder;
}

/// Default ladder for a benchmark: 12 diagonal rungs spanning its thresholds.
inline std::vector<Setting> ladder_for(const SimBenchmark& bench,
                                       std::size_t rungs = 12) {
  std::uint64_t max_int = 1;
  for (const auto& alarm : bench.model.alarms) {
    for (const auto& t : alarm.thresholds) {
      for (const auto& v : t.values()) {
        if (v.kind() == ParamKind::Integer && !v.is_infinity()) {
          max_int = std::max(max_int, v.int_value());
        }
      }
    }
  }
  return make_diagonal_ladder(bench.model.profile, rungs, max_int);
}

inline StrategyRun run_strategy(const Strategy& strategy,
                                const SimBenchmark& bench,
                                const JointDistribution& initial,
                                double budget_seconds, RngSeed seed) {
  const SimModel& model = bench.model;
  const Setting base = extract(initial).first;

  auto score = [&model](const Setting& s) {
    return sim_alarms(model, s).size();
  };
  auto no_result = [&] {
    StrategyRun out;
    out.final_setting = base;
    out.alarm_count = score(base);
    out.analysis_seconds = sim_cost(model, base);
    out.found_result = false;
    return out;
  };

  if (std::holds_alternative<DefaultStrategy>(strategy)) {
    const AnalysisOutcome outcome = sim_analyze(model, base, budget_seconds);
    if (!outcome.is_completed()) return no_result();
    StrategyRun out;
    out.final_setting = base;
    out.alarm_count = outcome.result().alarms.size();
    out.identification_seconds = 0.0;
    out.analysis_seconds = outcome.result().wall_seconds;
    return out;
  }

  if (const auto* expert = std::get_if<ExpertStrategy>(&strategy)) {
    double remaining = budget_seconds;
    StrategyRun out = no_result();
    for (const Setting& rung : expert->ladder) {
      if (remaining <= 0.0) break;
      const AnalysisOutcome outcome = sim_analyze(model, rung, remaining);
      const double consumed = sim_consumed(model, rung, remaining);
      remaining -= consumed;
      out.identification_seconds += consumed;
      if (outcome.is_completed()) {
        out.final_setting = rung;
        out.alarm_count = outcome.result().alarms.size();
        out.analysis_seconds = outcome.result().wall_seconds;
        out.found_result = true;
      }
    }
    return out;
  }

  const auto& loop = std::get<RefineLoopStrategy>(strategy);
  TuneRequest req;
  req.profile = model.profile;
  req.initial = initial;
  req.budget_seconds = budget_seconds;
  req.hyper = loop.hyper;
  req.analyzer = AnalyzerHandle::simulated(model);
  req.program = {bench.id, {}};
  req.seed = seed;
  const TuneResult result = tune(req);
  if (result.termination == Termination::baseline_failed) return no_result();
  StrategyRun out;
  out.final_setting = result.final_setting;
  out.alarm_count = score(result.final_setting);
  out.identification_seconds = result.total_analysis_seconds;
  out.analysis_seconds = sim_cost(model, result.final_setting);
  return out;
}

/// One result marked against the others in its row. `tied_best` follows the
/// pairwise rule count(r) - min <= 0.01 * count(r); `exclusively_best` is the
/// unique minimum with nobody else tied.
struct StrategyOutcome {
  std::string strategy;
  StrategyRun run;
  bool tied_best = false;
  bool exclusively_best = false;
};

struct BenchOutcome {
  std::string benchmark_id;
  std::uint64_t seed = 0;
  std::vector<StrategyOutcome> strategies;
};

inline void mark_best(std::vector<StrategyOutcome>& row) {
  if (row.empty()) return;
  std::size_t min_count = row.front().run.alarm_count;
  for (const auto& s : row) min_count = std::min(min_count, s.run.alarm_count);
  for (auto& s : row) {
    const double count = static_cast<double>(s.run.alarm_count);
    s.tied_best =
        count - static_cast<double>(min_count) <= 0.01 * count;
  }
  for (auto& s : row) {
    if (s.run.alarm_count != min_count) continue;
    bool others_tied = false;
    for (const auto& other : row) {
      if (&other != &s && other.tied_best) others_tied = true;
    }
    s.exclusively_best = !others_tied;
  }
}

struct BenchCase {
  SimBenchmark bench;
  JointDistribution initial;
  std::vector<Setting> ladder;  // empty: diagonal default
};

struct CompareOptions {
  int repeats = 1;            // tuning runs per row, best result kept
  bool split_budget = false;  // divide the budget across repeats
};

/// Full methodology run: every benchmark x seed row gets one result per
/// strategy, marked best / tied-best within the row.
inline std::vector<BenchOutcome> compare(const std::vector<BenchCase>& cases,
                                         const std::vector<Strategy>& strategies,
                                         double budget_seconds,
                                         const std::vector<RngSeed>& seeds,
                                         const CompareOptions& options = {}) {
  std::vector<BenchOutcome> table;
  for (const auto& bench_case : cases) {
    for (const RngSeed& seed : seeds) {
      BenchOutcome row;
      row.benchmark_id = bench_case.bench.id;
      row.seed = seed.value;
      for (const Strategy& strategy : strategies) {
        Strategy effective = strategy;
        if (auto* expert = std::get_if<ExpertStrategy>(&effective)) {
          if (expert->ladder.empty()) {
            expert->ladder = bench_case.ladder.empty()
                                 ? ladder_for(bench_case.bench)
                                 : bench_case.ladder;
          }
        }
        const bool randomized =
            std::holds_alternative<RefineLoopStrategy>(effective);
        const int repeats = randomized ? std::max(1, options.repeats) : 1;
        const double run_budget = options.split_budget
                                      ? budget_seconds / repeats
                                      : budget_seconds;
        StrategyRun best;
        double identification_total = 0.0;
        for (int rep = 0; rep < repeats; ++rep) {
          const RngSeed rep_seed{detail::mix64(seed.value) +
                                 static_cast<std::uint64_t>(rep)};
          StrategyRun run = run_strategy(effective, bench_case.bench,
                                         bench_case.initial, run_budget,
                                         randomized ? rep_seed : seed);
          identification_total += run.identification_seconds;
          if (rep == 0 || run.alarm_count < best.alarm_count) best = run;
        }
        best.identification_seconds = identification_total;
        row.strategies.push_back({strategy_name(strategy), best, false, false});
      }
      mark_best(row.strategies);
      table.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace latune

#endif  // LATUNE_STRATEGY_HPP
