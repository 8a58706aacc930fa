#ifndef LATUNE_ENGINE_HPP
#define LATUNE_ENGINE_HPP

#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "latune/adapter.hpp"
#include "latune/distribution.hpp"
#include "latune/refine.hpp"

namespace latune {

enum class BetaMode {
  Literal,    // first round budget >= beta fraction of the total budget
  FitSeries,  // sized so the doubling series exactly fills the budget
};

struct HyperParams {
  double alpha = 0.1;
  BetaMode beta_mode = BetaMode::FitSeries;
  double beta = 2.0;  // Literal mode only, as a fraction of the total budget
  int num_sample = 4;
  int num_refine = 7;
  int jobs = 4;
};

struct TuneRequest {
  Profile profile;
  JointDistribution initial;
  double budget_seconds = 0.0;
  HyperParams hyper;
  AnalyzerHandle analyzer;
  ProgramRef program;
  RngSeed seed;
  std::optional<double> baseline_cap_seconds;  // unset: baseline runs uncapped
};

/// Everything one sample-analyze-refine round produced.
struct RoundReport {
  int round_index = 0;
  double round_budget_seconds = 0.0;
  std::vector<Setting> sampled;
  std::vector<AnalysisOutcome> outcomes;  // positionally aligned with sampled
  double eta = 0.0;
  Setting base_after;
  std::vector<DeltaDist> delta_after;
  std::optional<std::size_t> alarms_under_base_after;  // simulator only
  double remaining_budget_seconds = 0.0;
  double elapsed_seconds = 0.0;  // analysis time this round actually burned
};

enum class Termination { budget_exhausted, refine_count_reached, baseline_failed };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::budget_exhausted: return "budget_exhausted";
    case Termination::refine_count_reached: return "refine_count_reached";
    case Termination::baseline_failed: return "baseline_failed";
  }
  return "?";
}

struct TuneResult {
  Setting final_setting;
  std::size_t a_uni_size = 0;
  std::vector<RoundReport> rounds;
  Termination termination = Termination::budget_exhausted;
  double baseline_seconds = 0.0;
  double total_analysis_seconds = 0.0;
  std::size_t monotonicity_anomalies = 0;
};

/// Split a joint distribution into its one-point base setting and the list
/// of delta distributions.
inline std::pair<Setting, std::vector<DeltaDist>> extract(
    const JointDistribution& joint) {
  std::vector<ParamValue> base;
  std::vector<DeltaDist> delta;
  base.reserve(joint.params.size());
  delta.reserve(joint.params.size());
  for (const auto& p : joint.params) {
    base.push_back(p.base);
    delta.push_back(p.delta);
  }
  return {Setting(std::move(base)), std::move(delta)};
}

/// Inverse of extract: reassemble a joint distribution over the given profile.
inline JointDistribution recombine(const Profile& profile, const Setting& base,
                                   const std::vector<DeltaDist>& delta) {
  if (base.size() != profile.size() || delta.size() != profile.size()) {
    throw ProfileMismatchError("distribution does not match profile");
  }
  JointDistribution joint;
  joint.params.reserve(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    joint.params.push_back({profile[i], base[i], delta[i]});
  }
  return joint;
}

/// First-round budget. Literal mode follows max(alpha * baseline,
/// beta * total) with beta read as a fraction of the total budget; FitSeries
/// sizes the first round so that doubling across num_refine rounds spends
/// exactly the whole budget.
inline double initial_round_budget(double baseline_seconds,
                                   double total_budget_seconds,
                                   const HyperParams& hyper) {
  if (!(total_budget_seconds > 0.0)) {
    throw std::invalid_argument("budget must be positive");
  }
  const double from_baseline = hyper.alpha * baseline_seconds;
  double from_budget = 0.0;
  if (hyper.beta_mode == BetaMode::Literal) {
    from_budget = hyper.beta * total_budget_seconds;
  } else {
    const double series = std::exp2(hyper.num_refine) - 1.0;
    from_budget = series > 0.0 ? total_budget_seconds / series
                               : total_budget_seconds;
  }
  return std::max(from_baseline, from_budget);
}

struct MapAnalyzeResult {
  std::vector<AnalysisOutcome> outcomes;
  double elapsed_seconds = 0.0;
};

namespace detail {

// Virtual-clock scheduling of a round onto `jobs` slots. Deterministic; no
// threads and no sleeping.
inline MapAnalyzeResult map_analyze_simulated(const SimModel& model,
                                              const std::vector<Setting>& settings,
                                              double round_budget, int jobs) {
  MapAnalyzeResult out;
  std::vector<double> slot(static_cast<std::size_t>(jobs), 0.0);
  const bool all_parallel = static_cast<std::size_t>(jobs) >= settings.size();
  for (const auto& p : settings) {
    auto next = std::min_element(slot.begin(), slot.end());
    const double remaining = all_parallel ? round_budget : round_budget - *next;
    if (remaining <= 0.0) {
      out.outcomes.push_back(AnalysisOutcome::failed(p, FailReason::timeout));
      continue;
    }
    out.outcomes.push_back(sim_analyze(model, p, remaining));
    *next += sim_consumed(model, p, remaining);
  }
  out.elapsed_seconds = *std::max_element(slot.begin(), slot.end());
  return out;
}

inline MapAnalyzeResult map_analyze_external(const AnalyzerHandle& handle,
                                             const ProgramRef& prog,
                                             const std::vector<Setting>& settings,
                                             double round_budget, int jobs) {
  MapAnalyzeResult out;
  out.outcomes.resize(settings.size(),
                      AnalysisOutcome::failed(Setting(), FailReason::timeout));
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };
  const bool all_parallel = static_cast<std::size_t>(jobs) >= settings.size();
  std::mutex mu;
  std::size_t next_index = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next_index >= settings.size()) return;
        i = next_index++;
      }
      const double remaining =
          all_parallel ? round_budget : round_budget - elapsed();
      AnalysisOutcome outcome =
          remaining <= 0.0
              ? AnalysisOutcome::failed(settings[i], FailReason::timeout)
              : handle.analyze(prog, settings[i], remaining);
      {
        std::lock_guard<std::mutex> lock(mu);
        out.outcomes[i] = std::move(outcome);
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_workers = std::min<int>(jobs, static_cast<int>(settings.size()));
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  out.elapsed_seconds = elapsed();
  return out;
}

}  // namespace detail

/// Analyze each setting independently under the round budget, at most `jobs`
/// at a time. When jobs cover all settings, each analysis gets the full round
/// budget as its deadline; otherwise later analyses get whatever remains of
/// the round, and ones that would start past the deadline fail without
/// launching. Outcome order matches input order.
inline MapAnalyzeResult map_analyze(const AnalyzerHandle& handle,
                                    const ProgramRef& prog,
                                    const std::vector<Setting>& settings,
                                    double round_budget, int jobs) {
  if (settings.empty()) {
    throw std::invalid_argument("map_analyze: no settings");
  }
  if (jobs < 1) {
    throw std::invalid_argument("map_analyze: jobs must be >= 1");
  }
  if (handle.is_simulated()) {
    return detail::map_analyze_simulated(handle.model(), settings, round_budget,
                                         jobs);
  }
  return detail::map_analyze_external(handle, prog, settings, round_budget,
                                      jobs);
}

/// Streaming hooks; every field may be left empty.
struct TuneObserver {
  std::function<void(std::size_t a_uni_size, double baseline_seconds)>
      on_baseline;
  std::function<void(const RoundReport&)> on_round;
};

/// The tuning loop: one baseline analysis pins the alarm universe and the
/// time scale, then sample-analyze-refine rounds run under doubling budgets
/// until the budget or the round cap is hit. The final setting is the last
/// refined base.
inline TuneResult tune(const TuneRequest& req, const TuneObserver& obs = {}) {
  if (!(req.budget_seconds > 0.0)) {
    throw std::invalid_argument("budget must be positive");
  }
  auto [base, delta] = extract(req.initial);
  require_matches_profile(req.profile, base);

  TuneResult result;
  result.final_setting = base;

  const double baseline_cap = req.baseline_cap_seconds
                                  ? *req.baseline_cap_seconds
                                  : std::numeric_limits<double>::infinity();
  const AnalysisOutcome baseline =
      req.analyzer.analyze(req.program, base, baseline_cap);
  if (!baseline.is_completed()) {
    result.termination = Termination::baseline_failed;
    return result;
  }
  AlarmSet universe = baseline.result().alarms;
  result.a_uni_size = universe.size();
  result.baseline_seconds = baseline.result().wall_seconds;
  result.total_analysis_seconds = result.baseline_seconds;
  if (obs.on_baseline) obs.on_baseline(universe.size(), result.baseline_seconds);

  if (result.baseline_seconds >= req.budget_seconds) {
    result.termination = Termination::budget_exhausted;
    return result;
  }

  double remaining = req.budget_seconds;
  double round_budget =
      initial_round_budget(result.baseline_seconds, req.budget_seconds, req.hyper);
  int count = 0;

  for (;;) {
    if (count >= req.hyper.num_refine) {
      result.termination = Termination::refine_count_reached;
      break;
    }
    if (remaining <= 0.0) {
      result.termination = Termination::budget_exhausted;
      break;
    }

    Rng round_rng = Rng::substream(req.seed, static_cast<std::uint64_t>(count));
    const JointDistribution current = recombine(req.profile, base, delta);
    std::vector<Setting> sampled = sample_setting(
        current, static_cast<std::size_t>(req.hyper.num_sample), round_rng);

    MapAnalyzeResult analyzed = map_analyze(req.analyzer, req.program, sampled,
                                            round_budget, req.hyper.jobs);

    RefineInput input;
    input.sampled = sampled;
    input.universe = universe;
    input.base = base;
    input.delta = delta;
    for (auto& outcome : analyzed.outcomes) {
      if (!outcome.is_completed()) continue;
      AlarmSet kept;
      for (const AlarmId& a : outcome.result().alarms) {
        if (universe.count(a) != 0) {
          kept.insert(a);
        } else {
          ++result.monotonicity_anomalies;  // outside the baseline universe
        }
      }
      outcome.result().alarms = std::move(kept);
      input.completed.push_back({outcome.setting, outcome.result().alarms});
    }

    RefineResult refined = refine(input);
    base = refined.base;
    delta = std::move(refined.delta);

    RoundReport report;
    report.round_index = count;
    report.round_budget_seconds = round_budget;
    report.sampled = std::move(sampled);
    report.outcomes = std::move(analyzed.outcomes);
    report.eta = eta_scale(input.completed.size(), input.sampled.size());
    report.base_after = base;
    report.delta_after = delta;
    if (req.analyzer.is_simulated()) {
      report.alarms_under_base_after =
          sim_alarms(req.analyzer.model(), base).size();
    }
    remaining -= round_budget;
    report.remaining_budget_seconds = remaining;
    report.elapsed_seconds = analyzed.elapsed_seconds;
    result.total_analysis_seconds += analyzed.elapsed_seconds;
    if (obs.on_round) obs.on_round(report);
    result.rounds.push_back(std::move(report));

    round_budget *= 2.0;
    ++count;
  }

  result.final_setting = base;
  return result;
}

}  // namespace latune

#endif  // LATUNE_ENGINE_HPP
