#ifndef LATUNE_REPORT_HPP
#define LATUNE_REPORT_HPP

#include <ctime>
#include <optional>
#include <string>

#include "json.hpp"
#include "latune/engine.hpp"
#include "latune/serialize.hpp"

namespace latune {

/// Line-delimited run records: one baseline record, one per round, one final.
/// Every record is self-describing ("record" tag plus schema version) so a
/// truncated report from a crashed run still parses line by line.
struct ReportContext {
  Profile profile;
  bool timestamps = true;
};

namespace detail {

inline void stamp(const ReportContext& ctx, nlohmann::json& record) {
  record["record_schema"] = 1;
  if (ctx.timestamps) {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    record["ts"] = buf;
  }
}

inline nlohmann::json outcome_to_json(const ReportContext& ctx,
                                      const AnalysisOutcome& outcome) {
  nlohmann::json out;
  if (outcome.is_completed()) {
    out["status"] = "completed";
    out["alarms"] = outcome.result().alarms;  // std::set: serialized sorted
    out["wall_seconds"] = outcome.result().wall_seconds;
  } else {
    out["status"] = "failed";
    out["reason"] = to_string(outcome.fail_reason());
  }
  (void)ctx;
  return out;
}

}  // namespace detail

inline nlohmann::json baseline_record(const ReportContext& ctx,
                                      std::size_t a_uni_size,
                                      double baseline_seconds) {
  nlohmann::json record;
  record["record"] = "baseline";
  record["a_uni_size"] = a_uni_size;
  record["wall_seconds"] = baseline_seconds;
  detail::stamp(ctx, record);
  return record;
}

inline nlohmann::json round_record(const ReportContext& ctx,
                                   const RoundReport& round) {
  nlohmann::json record;
  record["record"] = "round";
  record["round_index"] = round.round_index;
  record["round_budget_seconds"] = round.round_budget_seconds;
  record["sampled"] = nlohmann::json::array();
  for (const auto& s : round.sampled) {
    record["sampled"].push_back(setting_to_json(ctx.profile, s));
  }
  record["outcomes"] = nlohmann::json::array();
  for (const auto& o : round.outcomes) {
    record["outcomes"].push_back(detail::outcome_to_json(ctx, o));
  }
  record["eta"] = round.eta;
  record["base_after"] = setting_to_json(ctx.profile, round.base_after);
  record["delta_after"] = nlohmann::json::array();
  for (const auto& d : round.delta_after) {
    record["delta_after"].push_back(delta_to_json(d));
  }
  if (round.alarms_under_base_after) {
    record["alarms_under_base_after"] = *round.alarms_under_base_after;
  }
  record["remaining_budget_seconds"] = round.remaining_budget_seconds;
  record["analysis_seconds"] = round.elapsed_seconds;
  detail::stamp(ctx, record);
  return record;
}

inline nlohmann::json final_record(
    const ReportContext& ctx, const TuneResult& result,
    const std::vector<std::string>& final_argv,
    std::optional<std::size_t> final_alarms) {
  nlohmann::json record;
  record["record"] = "final";
  record["final_setting"] = setting_to_json(ctx.profile, result.final_setting);
  record["final_argv"] = final_argv;
  record["termination"] = to_string(result.termination);
  record["a_uni_size"] = result.a_uni_size;
  record["rounds"] = result.rounds.size();
  record["total_analysis_seconds"] = result.total_analysis_seconds;
  record["monotonicity_anomalies"] = result.monotonicity_anomalies;
  if (final_alarms) record["final_alarms"] = *final_alarms;
  detail::stamp(ctx, record);
  return record;
}

inline std::string to_report_line(const nlohmann::json& record) {
  return record.dump() + "\n";
}

/// The setting a report record carries, if any: final records carry the
/// final setting, round records the refined base.
inline std::optional<Setting> setting_of_record(const Profile& profile,
                                                const nlohmann::json& record,
                                                std::string& err) {
  const char* key = nullptr;
  if (record.contains("final_setting")) {
    key = "final_setting";
  } else if (record.contains("base_after")) {
    key = "base_after";
  } else {
    err = "record carries no setting";
    return std::nullopt;
  }
  return setting_from_json(profile, record.at(key), err);
}

}  // namespace latune

#endif  // LATUNE_REPORT_HPP
