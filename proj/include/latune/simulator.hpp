#ifndef LATUNE_SIMULATOR_HPP
#define LATUNE_SIMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "latune/outcome.hpp"
#include "latune/rng.hpp"

namespace latune {

/// One synthetic alarm. It is eliminated exactly when the analyzed setting
/// dominates one of its thresholds. A single threshold makes the elimination
/// set a principal filter (the case the refiner's meet is exact for);
/// several thresholds give a non-principal upward-closed set.
struct SimAlarm {
  AlarmId id;
  std::vector<Setting> thresholds;  // non-empty, finite coordinates
};

/// A deterministic, monotone stand-in analyzer: greater settings emit fewer
/// alarms and cost more. Wall time is virtual, so tests never sleep.
struct SimModel {
  Profile profile;
  std::vector<SimAlarm> alarms;
  double base_cost_seconds = 1.0;
  std::vector<double> cost_weights;      // one non-negative weight per parameter
  std::optional<double> failure_cap;     // cost above which the run always fails
};

namespace detail {

inline double magnitude(const ParamValue& v) {
  switch (v.kind()) {
    case ParamKind::Integer:
      if (v.is_infinity()) return std::numeric_limits<double>::infinity();
      return static_cast<double>(v.int_value());
    case ParamKind::Boolean:
      return v.bool_value() ? 1.0 : 0.0;
    case ParamKind::OrderedEnum:
      return static_cast<double>(v.enum_value());
    case ParamKind::StringSet: {
      std::size_t n = 0;
      for (bool b : v.bits_value()) n += b ? 1 : 0;
      return static_cast<double>(n);
    }
  }
  return 0.0;
}

}  // namespace detail

/// Virtual analysis cost: base * prod_i (1 + w_i * magnitude_i). Monotone
/// non-decreasing in the lattice order.
inline double sim_cost(const SimModel& model, const Setting& p) {
  double cost = model.base_cost_seconds;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = i < model.cost_weights.size() ? model.cost_weights[i] : 0.0;
    cost *= 1.0 + w * detail::magnitude(p[i]);
  }
  return cost;
}

inline bool sim_eliminates(const SimAlarm& alarm, const Setting& p) {
  for (const Setting& t : alarm.thresholds) {
    if (setting_leq(t, p)) return true;
  }
  return false;
}

/// Alarms the model emits under `p`, ignoring time limits.
inline AlarmSet sim_alarms(const SimModel& model, const Setting& p) {
  AlarmSet out;
  for (const auto& alarm : model.alarms) {
    if (!sim_eliminates(alarm, p)) out.insert(alarm.id);
  }
  return out;
}

/// Virtual wall time one attempt burns before finishing, dying at the
/// failure cap, or being cut off at the deadline.
inline double sim_consumed(const SimModel& model, const Setting& p,
                           double deadline_seconds) {
  double limit = deadline_seconds;
  if (model.failure_cap && *model.failure_cap < limit) limit = *model.failure_cap;
  return std::min(sim_cost(model, p), limit);
}

/// Analyze under a virtual clock: completes iff the cost fits both the
/// deadline and the failure cap, otherwise reports a timeout.
inline AnalysisOutcome sim_analyze(const SimModel& model, const Setting& p,
                                   double deadline_seconds) {
  require_matches_profile(model.profile, p);
  const double cost = sim_cost(model, p);
  if (cost > deadline_seconds ||
      (model.failure_cap && cost > *model.failure_cap)) {
    return AnalysisOutcome::failed(p, FailReason::timeout);
  }
  return AnalysisOutcome::completed(p, sim_alarms(model, p), cost);
}

/// Generator knobs for synthetic tuning landscapes.
struct GenKnobs {
  std::size_t n_params = 2;
  std::size_t n_alarms = 4;
  std::uint64_t max_threshold = 8;
  double cost_scale = 1.0;
};

/// A replayable benchmark: the model plus the recipe that produced it.
struct SimBenchmark {
  std::string id;
  SimModel model;
  RngSeed gen_seed;
  GenKnobs knobs;
};

/// Deterministic benchmark generator over integer parameters. Thresholds are
/// uniform within [0, max_threshold]; the first alarm is always cheap to
/// eliminate and the last sits near the top, so the landscape is never flat.
inline SimBenchmark gen_benchmark(RngSeed gen_seed, const GenKnobs& knobs) {
  Rng rng = Rng::substream(gen_seed, 0x6e65674bULL);
  SimModel model;
  for (std::size_t i = 0; i < knobs.n_params; ++i) {
    model.profile.push_back({"p" + std::to_string(i), ParamType::integer()});
  }
  auto uniform_int = [&rng](std::uint64_t hi) {  // inclusive
    return rng.next_u64() % (hi + 1);
  };
  for (std::size_t a = 0; a < knobs.n_alarms; ++a) {
    std::vector<ParamValue> coords;
    for (std::size_t i = 0; i < knobs.n_params; ++i) {
      std::uint64_t v = uniform_int(knobs.max_threshold);
      if (a == 0) v = 0;
      if (a + 1 == knobs.n_alarms && knobs.n_alarms >= 2) {
        v = knobs.max_threshold - uniform_int(1);
      }
      coords.push_back(ParamValue::integer(v));
    }
    if (a == 0 && knobs.n_params > 0) {
      // bottom-adjacent: a single coordinate set to 1
      const std::size_t pick = rng.next_u64() % knobs.n_params;
      coords[pick] = ParamValue::integer(1);
    }
    model.alarms.push_back(
        {"a" + std::to_string(a), {Setting(std::move(coords))}});
  }
  model.base_cost_seconds = knobs.cost_scale;
  for (std::size_t i = 0; i < knobs.n_params; ++i) {
    model.cost_weights.push_back(0.02 + 0.06 * rng.next_unit());
  }
  SimBenchmark bench;
  bench.id = "gen-" + std::to_string(gen_seed.value) + "-" +
             std::to_string(knobs.n_params) + "x" + std::to_string(knobs.n_alarms);
  bench.model = std::move(model);
  bench.gen_seed = gen_seed;
  bench.knobs = knobs;
  return bench;
}

}  // namespace latune

#endif  // LATUNE_SIMULATOR_HPP
