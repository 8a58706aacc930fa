#ifndef LATUNE_SERIALIZE_HPP
#define LATUNE_SERIALIZE_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "latune/distribution.hpp"
#include "latune/lattice.hpp"

namespace latune {

inline nlohmann::json type_to_json(const ParamType& type) {
  switch (type.kind()) {
    case ParamKind::Integer: return "integer";
    case ParamKind::Boolean: return "boolean";
    case ParamKind::OrderedEnum: return {{"enum", type.labels()}};
    case ParamKind::StringSet: return {{"set", type.members()}};
  }
  return nullptr;
}

inline std::optional<ParamType> type_from_json(const nlohmann::json& j,
                                               std::string& err) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "integer") return ParamType::integer();
    if (s == "boolean") return ParamType::boolean();
    err = "unknown type '" + s + "'";
    return std::nullopt;
  }
  if (j.is_object()) {
    try {
      if (j.contains("enum")) {
        return ParamType::ordered_enum(j.at("enum").get<std::vector<std::string>>());
      }
      if (j.contains("set")) {
        return ParamType::string_set(j.at("set").get<std::vector<std::string>>());
      }
    } catch (const std::exception& e) {
      err = e.what();
      return std::nullopt;
    }
  }
  err = "type must be \"integer\", \"boolean\", {\"enum\": [...]} or {\"set\": [...]}";
  return std::nullopt;
}

/// Structural form of one value: number, bool, label, or member list.
/// The integer infinity serializes as the string "inf".
inline nlohmann::json value_to_json(const ParamType& type, const ParamValue& v) {
  switch (type.kind()) {
    case ParamKind::Integer:
      if (v.is_infinity()) return "inf";
      return v.int_value();
    case ParamKind::Boolean: return v.bool_value();
    case ParamKind::OrderedEnum: return type.labels().at(v.enum_value());
    case ParamKind::StringSet: {
      std::vector<std::string> selected;
      const auto& bits = v.bits_value();
      for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) selected.push_back(type.members()[i]);
      }
      return selected;
    }
  }
  return nullptr;
}

inline std::optional<ParamValue> value_from_json(const ParamType& type,
                                                 const nlohmann::json& j,
                                                 std::string& err) {
  switch (type.kind()) {
    case ParamKind::Integer:
      if (j.is_string() && j.get<std::string>() == "inf") {
        return ParamValue::infinity();
      }
      if (j.is_number_unsigned() ||
          (j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        return ParamValue::integer(j.get<std::uint64_t>());
      }
      err = "expected a non-negative integer or \"inf\"";
      return std::nullopt;
    case ParamKind::Boolean:
      if (j.is_boolean()) return ParamValue::boolean(j.get<bool>());
      err = "expected true or false";
      return std::nullopt;
    case ParamKind::OrderedEnum: {
      if (j.is_number_integer() && j.get<std::int64_t>() >= 0 &&
          j.get<std::size_t>() < type.label_count()) {
        return ParamValue::enum_index(j.get<std::size_t>());
      }
      if (j.is_string()) {
        const auto& labels = type.labels();
        for (std::size_t i = 0; i < labels.size(); ++i) {
          if (labels[i] == j.get<std::string>()) return ParamValue::enum_index(i);
        }
      }
      err = "expected one of the enum labels";
      return std::nullopt;
    }
    case ParamKind::StringSet: {
      if (!j.is_array()) {
        err = "expected an array of member names";
        return std::nullopt;
      }
      std::vector<bool> bits(type.cardinality(), false);
      for (const auto& item : j) {
        if (!item.is_string()) {
          err = "expected an array of member names";
          return std::nullopt;
        }
        const std::string name = item.get<std::string>();
        bool found = false;
        for (std::size_t i = 0; i < type.members().size(); ++i) {
          if (type.members()[i] == name) {
            bits[i] = true;
            found = true;
          }
        }
        if (!found) {
          err = "unknown set member '" + name + "'";
          return std::nullopt;
        }
      }
      return ParamValue::bits(std::move(bits));
    }
  }
  err = "unhandled type";
  return std::nullopt;
}

/// Settings serialize as an object keyed by parameter name.
inline nlohmann::json setting_to_json(const Profile& profile, const Setting& s) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out[profile[i].name] = value_to_json(profile[i].type, s[i]);
  }
  return out;
}

inline std::optional<Setting> setting_from_json(const Profile& profile,
                                                const nlohmann::json& j,
                                                std::string& err) {
  if (!j.is_object()) {
    err = "setting must be an object keyed by parameter name";
    return std::nullopt;
  }
  for (const auto& [key, unused] : j.items()) {
    (void)unused;
    bool known = false;
    for (const auto& spec : profile) known = known || spec.name == key;
    if (!known) {
      err = "unknown parameter '" + key + "'";
      return std::nullopt;
    }
  }
  std::vector<ParamValue> values;
  values.reserve(profile.size());
  for (const auto& spec : profile) {
    if (!j.contains(spec.name)) {
      err = "missing parameter '" + spec.name + "'";
      return std::nullopt;
    }
    auto v = value_from_json(spec.type, j.at(spec.name), err);
    if (!v) {
      err = spec.name + ": " + err;
      return std::nullopt;
    }
    values.push_back(std::move(*v));
  }
  return Setting(std::move(values));
}

inline nlohmann::json delta_to_json(const DeltaDist& d) {
  if (const auto* p = std::get_if<PoissonDelta>(&d)) {
    return {{"poisson", p->lambda}};
  }
  if (const auto* b = std::get_if<BernoulliDelta>(&d)) {
    return {{"bernoulli", b->q}};
  }
  return {{"joint_bernoulli", std::get<JointBernoulliDelta>(d).qs()}};
}

inline std::optional<DeltaDist> delta_from_json(const nlohmann::json& j,
                                                std::string& err) {
  if (j.is_object() && j.size() == 1) {
    try {
      if (j.contains("poisson")) return PoissonDelta{j.at("poisson").get<double>()};
      if (j.contains("bernoulli")) {
        return BernoulliDelta{j.at("bernoulli").get<double>()};
      }
      if (j.contains("joint_bernoulli")) {
        return JointBernoulliDelta{
            j.at("joint_bernoulli").get<std::vector<double>>()};
      }
    } catch (const std::exception& e) {
      err = e.what();
      return std::nullopt;
    }
  }
  err = "delta must be {\"poisson\": l}, {\"bernoulli\": q} or "
        "{\"joint_bernoulli\": [q...]}";
  return std::nullopt;
}

}  // namespace latune

#endif  // LATUNE_SERIALIZE_HPP
