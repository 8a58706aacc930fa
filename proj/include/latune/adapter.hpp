#ifndef LATUNE_ADAPTER_HPP
#define LATUNE_ADAPTER_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "latune/outcome.hpp"
#include "latune/process.hpp"
#include "latune/simulator.hpp"

namespace latune {

/// How one parameter value becomes command-line arguments.
enum class RenderStyle {
  IntegerArg,   // flag + decimal value (integers; enum index)
  EnumLabelArg, // flag + label text
  BoolLiteralArg,  // flag + "true"/"false"
  PresenceFlag, // flag when true, negative flag (or nothing) when false
  SetJoinedArg, // flag + selected members joined by a separator
};

struct RenderRule {
  RenderStyle style = RenderStyle::IntegerArg;
  std::string flag;
  std::string negative_flag;      // PresenceFlag: emitted when false; may be empty
  std::string separator = ",";    // SetJoinedArg
  bool omit_empty_set = true;     // SetJoinedArg: drop the flag for the empty set
  std::optional<std::string> omit_label;  // EnumLabelArg: label that suppresses the flag

  RenderRule() = default;
  RenderRule(RenderStyle style_in, std::string flag_in,
             std::string negative_flag_in = {})
      : style(style_in),
        flag(std::move(flag_in)),
        negative_flag(std::move(negative_flag_in)) {}
};

/// Text normalization applied to every extracted alarm, in order.
enum class NormStep { Strip, CollapseSpaces, DropLineNumbers };

struct ExtractionRule {
  enum class Mode { RegexLines, JsonPointer };
  Mode mode = Mode::RegexLines;
  /// RegexLines: a pattern whose first capture group (or whole match) is the
  /// alarm text. JsonPointer: a pointer to an array of strings.
  std::string pattern;
  std::vector<NormStep> normalization{NormStep::Strip, NormStep::CollapseSpaces};
};

namespace detail {

inline std::string apply_norm_steps(const std::vector<NormStep>& steps,
                                    std::string text) {
  for (NormStep step : steps) {
    switch (step) {
      case NormStep::Strip: {
        const auto b = text.find_first_not_of(" \t\r\n");
        const auto e = text.find_last_not_of(" \t\r\n");
        text = b == std::string::npos ? std::string() : text.substr(b, e - b + 1);
        break;
      }
      case NormStep::CollapseSpaces: {
        std::string out;
        out.reserve(text.size());
        bool in_space = false;
        for (char c : text) {
          if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
          }
          if (in_space && !out.empty()) out.push_back(' ');
          in_space = false;
          out.push_back(c);
        }
        text = std::move(out);
        break;
      }
      case NormStep::DropLineNumbers: {
        // strips :LINE, :LINE.COL and :L.C-L.C position suffixes
        static const std::regex pos(":[0-9]+(\\.[0-9]+)?(-[0-9]+(\\.[0-9]+)?)?");
        text = std::regex_replace(text, pos, "");
        break;
      }
    }
  }
  return text;
}

}  // namespace detail

/// Applies the rule's steps to a fixpoint, so normalization is idempotent
/// even when a later step (dropping positions) reopens work for an earlier
/// one (collapsing the spaces left behind).
inline std::string normalize_alarm(const ExtractionRule& rule,
                                   std::string text) {
  for (int pass = 0; pass < 4; ++pass) {
    std::string next = detail::apply_norm_steps(rule.normalization, text);
    if (next == text) break;
    text = std::move(next);
  }
  return text;
}

/// Everything needed to drive one external analyzer as a black box.
struct AnalyzerProfile {
  /// Literal arguments with two placeholders: "{sources}" expands to the
  /// program's source paths, "{params}" to the rendered parameter arguments.
  std::vector<std::string> command_template;
  std::map<std::string, RenderRule> param_renderings;  // keyed by parameter name
  std::string workdir;
  std::map<std::string, std::string> env;
  ExtractionRule alarm_extraction;
  double timeout_grace_seconds = 2.0;
  std::vector<int> accept_exit_codes{0};
};

/// The program under analysis. For simulated analyzers the identifier is the
/// benchmark id and source paths are ignored.
struct ProgramRef {
  std::string identifier;
  std::vector<std::string> source_paths;
};

namespace detail {

inline void append_rendered(const ParamSpec& spec, const RenderRule& rule,
                            const ParamValue& v, std::vector<std::string>& out) {
  switch (rule.style) {
    case RenderStyle::IntegerArg: {
      std::uint64_t n = 0;
      switch (v.kind()) {
        case ParamKind::Integer: n = v.int_value(); break;
        case ParamKind::OrderedEnum: n = v.enum_value(); break;
        case ParamKind::Boolean: n = v.bool_value() ? 1 : 0; break;
        default:
          throw TypeMismatchError("integer rendering on set parameter " +
                                  spec.name);
      }
      out.push_back(rule.flag);
      out.push_back(std::to_string(n));
      break;
    }
    case RenderStyle::EnumLabelArg: {
      const std::string& label = spec.type.labels().at(v.enum_value());
      if (rule.omit_label && *rule.omit_label == label) break;
      out.push_back(rule.flag);
      out.push_back(label);
      break;
    }
    case RenderStyle::BoolLiteralArg:
      out.push_back(rule.flag);
      out.push_back(v.bool_value() ? "true" : "false");
      break;
    case RenderStyle::PresenceFlag:
      if (v.bool_value()) {
        out.push_back(rule.flag);
      } else if (!rule.negative_flag.empty()) {
        out.push_back(rule.negative_flag);
      }
      break;
    case RenderStyle::SetJoinedArg: {
      const auto& bits = v.bits_value();
      std::string joined;
      for (std::size_t i = 0; i < bits.size(); ++i) {
        if (!bits[i]) continue;
        if (!joined.empty()) joined += rule.separator;
        joined += spec.type.members()[i];
      }
      if (joined.empty() && rule.omit_empty_set) break;
      out.push_back(rule.flag);
      out.push_back(joined);
      break;
    }
  }
}

}  // namespace detail

/// Substitute the program and the rendered parameters into the command
/// template. Rejects settings containing the symbolic infinity, which no
/// analyzer accepts.
inline std::vector<std::string> render_command(const AnalyzerProfile& profile,
                                               const Profile& params,
                                               const ProgramRef& prog,
                                               const Setting& p) {
  require_matches_profile(params, p);
  std::vector<std::string> param_args;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (p[i].is_infinity()) {
      throw TypeMismatchError("cannot render infinity for " + params[i].name);
    }
    const auto it = profile.param_renderings.find(params[i].name);
    if (it == profile.param_renderings.end()) {
      throw std::invalid_argument("no rendering rule for " + params[i].name);
    }
    detail::append_rendered(params[i], it->second, p[i], param_args);
  }

  std::vector<std::string> argv;
  for (const auto& token : profile.command_template) {
    if (token == "{sources}") {
      argv.insert(argv.end(), prog.source_paths.begin(),
                  prog.source_paths.end());
    } else if (token == "{params}") {
      argv.insert(argv.end(), param_args.begin(), param_args.end());
    } else if (token.size() >= 2 && token.front() == '{' && token.back() == '}') {
      throw std::invalid_argument("unknown placeholder " + token);
    } else {
      argv.push_back(token);
    }
  }
  return argv;
}

/// Canonical alarm set from an analyzer transcript; empty optional when the
/// output cannot be interpreted under the rule.
inline std::optional<AlarmSet> extract_alarms(const ExtractionRule& rule,
                                              const std::string& output) {
  AlarmSet alarms;
  if (rule.mode == ExtractionRule::Mode::RegexLines) {
    std::regex re;
    try {
      re.assign(rule.pattern);
    } catch (const std::regex_error&) {
      return std::nullopt;
    }
    std::size_t pos = 0;
    while (pos <= output.size()) {
      std::size_t nl = output.find('\n', pos);
      if (nl == std::string::npos) nl = output.size();
      const std::string line = output.substr(pos, nl - pos);
      std::smatch m;
      if (std::regex_search(line, m, re)) {
        const std::string raw = m.size() > 1 && m[1].matched ? m[1].str() : m[0].str();
        const std::string id = normalize_alarm(rule, raw);
        if (!id.empty()) alarms.insert(id);
      }
      pos = nl + 1;
    }
    return alarms;
  }
  const nlohmann::json doc = nlohmann::json::parse(output, nullptr, false);
  if (doc.is_discarded()) return std::nullopt;
  nlohmann::json node;
  try {
    node = doc.at(nlohmann::json::json_pointer(rule.pattern));
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  if (!node.is_array()) return std::nullopt;
  for (const auto& item : node) {
    if (!item.is_string()) return std::nullopt;
    const std::string id = normalize_alarm(rule, item.get<std::string>());
    if (!id.empty()) alarms.insert(id);
  }
  return alarms;
}

/// Run one external analysis under a deadline. Failures come back in the
/// outcome status; nothing escapes past this boundary.
inline AnalysisOutcome analyze_external(const AnalyzerProfile& profile,
                                        const Profile& params,
                                        const ProgramRef& prog,
                                        const Setting& p,
                                        double deadline_seconds) {
  std::vector<std::string> argv;
  try {
    argv = render_command(profile, params, prog, p);
  } catch (const std::exception&) {
    return AnalysisOutcome::failed(p, FailReason::crash);
  }
  ExecRequest req;
  req.argv = std::move(argv);
  req.workdir = profile.workdir;
  req.env = profile.env;
  req.deadline_seconds = deadline_seconds;
  req.grace_seconds = profile.timeout_grace_seconds;
  const ExecResult res = run_with_deadline(req);
  if (res.spawn_failed) return AnalysisOutcome::failed(p, FailReason::crash);
  if (res.timed_out) return AnalysisOutcome::failed(p, FailReason::timeout);
  if (res.signaled ||
      std::find(profile.accept_exit_codes.begin(),
                profile.accept_exit_codes.end(),
                res.exit_code) == profile.accept_exit_codes.end()) {
    return AnalysisOutcome::failed(p, FailReason::crash);
  }
  auto alarms = extract_alarms(profile.alarm_extraction, res.output);
  if (!alarms) return AnalysisOutcome::failed(p, FailReason::parse_error);
  return AnalysisOutcome::completed(p, std::move(*alarms), res.wall_seconds);
}

/// A black-box analyzer: either a real external command or the simulator.
/// Both sides honor the same analyze contract.
class AnalyzerHandle {
 public:
  static AnalyzerHandle external(AnalyzerProfile profile, Profile params) {
    AnalyzerHandle h;
    h.rep_ = External{std::move(profile), std::move(params)};
    return h;
  }
  static AnalyzerHandle simulated(SimModel model) {
    AnalyzerHandle h;
    h.rep_ = std::move(model);
    return h;
  }

  bool is_simulated() const { return std::holds_alternative<SimModel>(rep_); }
  const SimModel& model() const { return std::get<SimModel>(rep_); }
  const AnalyzerProfile& profile() const {
    return std::get<External>(rep_).profile;
  }
  const Profile& params() const {
    return is_simulated() ? model().profile : std::get<External>(rep_).params;
  }

  AnalysisOutcome analyze(const ProgramRef& prog, const Setting& p,
                          double deadline_seconds) const {
    if (is_simulated()) {
      return sim_analyze(model(), p, deadline_seconds);
    }
    const auto& ext = std::get<External>(rep_);
    return analyze_external(ext.profile, ext.params, prog, p, deadline_seconds);
  }

 private:
  struct External {
    AnalyzerProfile profile;
    Profile params;
  };
  std::variant<External, SimModel> rep_;
};

}  // namespace latune

#endif  // LATUNE_ADAPTER_HPP
