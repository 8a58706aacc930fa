#ifndef LATUNE_REFINE_HPP
#define LATUNE_REFINE_HPP

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "latune/distribution.hpp"
#include "latune/outcome.hpp"

namespace latune {

/// A completed analysis as seen by the refiner: the sampled setting and the
/// alarms it still emitted.
struct CompletedAnalysis {
  Setting setting;
  AlarmSet alarms;
};

/// Inputs of one refinement step: everything one sample-analyze round
/// produced, plus the current distribution split into base and delta.
struct RefineInput {
  std::vector<Setting> sampled;             // every sampled setting
  std::vector<CompletedAnalysis> completed; // the ones that finished
  AlarmSet universe;                        // alarms of the baseline analysis
  Setting base;
  std::vector<DeltaDist> delta;
};

/// Least-precise setting whose completed analysis eliminated alarm `a`:
/// the meet of all completed settings not emitting `a`. Empty when no
/// completed analysis eliminated it.
inline std::optional<Setting> eliminator_meet(
    const std::vector<CompletedAnalysis>& completed, const AlarmId& a) {
  std::optional<Setting> acc;
  for (const auto& c : completed) {
    if (c.alarms.count(a) != 0) continue;
    acc = acc ? setting_meet(*acc, c.setting) : c.setting;
  }
  return acc;
}

/// Refined base: the join of the current base with, per alarm, the meet of
/// the settings that eliminated it. Alarms nothing eliminated are skipped.
/// The result always dominates the input base.
inline Setting refine_base(const RefineInput& in) {
  Setting acc = in.base;
  for (const AlarmId& a : in.universe) {
    if (auto p_a = eliminator_meet(in.completed, a)) {
      acc = setting_join(acc, *p_a);
    }
  }
  return acc;
}

/// Scaling factor (2*completed + 1) / sampled: below 1 exactly when fewer
/// than half the analyses completed.
inline double eta_scale(std::size_t num_completed, std::size_t num_sampled) {
  if (num_sampled == 0) {
    throw std::invalid_argument("eta_scale: no samples");
  }
  if (num_completed > num_sampled) {
    throw std::invalid_argument("eta_scale: completed exceeds sampled");
  }
  return (2.0 * static_cast<double>(num_completed) + 1.0) /
         static_cast<double>(num_sampled);
}

struct RefineResult {
  Setting base;
  std::vector<DeltaDist> delta;
};

/// One full refinement step: refit the base from this round's eliminators
/// and rescale every delta by the round's completion factor.
inline RefineResult refine(const RefineInput& in) {
  const double eta = eta_scale(in.completed.size(), in.sampled.size());
  std::vector<DeltaDist> scaled;
  scaled.reserve(in.delta.size());
  for (const auto& d : in.delta) scaled.push_back(scale(eta, d));
  return {refine_base(in), std::move(scaled)};
}

}  // namespace latune

#endif  // LATUNE_REFINE_HPP
