#ifndef LATUNE_OUTCOME_HPP
#define LATUNE_OUTCOME_HPP

#include <set>
#include <string>
#include <variant>

#include "latune/lattice.hpp"

namespace latune {

/// Canonical identifier of one emitted alarm; equality is exact string
/// equality after adapter-side normalization.
using AlarmId = std::string;

using AlarmSet = std::set<AlarmId>;

enum class FailReason { timeout, crash, parse_error };

inline const char* to_string(FailReason r) {
  switch (r) {
    case FailReason::timeout: return "timeout";
    case FailReason::crash: return "crash";
    case FailReason::parse_error: return "parse_error";
  }
  return "?";
}

/// Result of one analyzer invocation.
struct AnalysisOutcome {
  struct Completed {
    AlarmSet alarms;
    double wall_seconds = 0.0;
  };
  struct Failed {
    FailReason reason;
  };

  Setting setting;
  std::variant<Completed, Failed> status;

  static AnalysisOutcome completed(Setting s, AlarmSet alarms,
                                   double wall_seconds) {
    return {std::move(s), Completed{std::move(alarms), wall_seconds}};
  }
  static AnalysisOutcome failed(Setting s, FailReason reason) {
    return {std::move(s), Failed{reason}};
  }

  bool is_completed() const {
    return std::holds_alternative<Completed>(status);
  }
  const Completed& result() const { return std::get<Completed>(status); }
  Completed& result() { return std::get<Completed>(status); }
  FailReason fail_reason() const { return std::get<Failed>(status).reason; }
};

}  // namespace latune

#endif  // LATUNE_OUTCOME_HPP
