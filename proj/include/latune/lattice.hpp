#ifndef LATUNE_LATTICE_HPP
#define LATUNE_LATTICE_HPP

#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace latune {

/// Raised when two values of different parameter types are combined, or a
/// value does not fit its declared type.
struct TypeMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when two settings of different profiles are combined.
struct ProfileMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class ParamKind { Integer, Boolean, OrderedEnum, StringSet };

inline const char* to_string(ParamKind k) {
  switch (k) {
    case ParamKind::Integer: return "integer";
    case ParamKind::Boolean: return "boolean";
    case ParamKind::OrderedEnum: return "enum";
    case ParamKind::StringSet: return "set";
  }
  return "?";
}

class ParamValue;

/// One parameter's value domain. Each of the four kinds forms a complete
/// lattice: integers with infinity on top, booleans under implication, enum
/// labels ordered by index, string sets under inclusion.
class ParamType {
 public:
  static ParamType integer() { return ParamType(ParamKind::Integer, {}); }
  static ParamType boolean() { return ParamType(ParamKind::Boolean, {}); }

  /// Labels are listed from least to most precise; k >= 2, no duplicates.
  static ParamType ordered_enum(std::vector<std::string> labels) {
    if (labels.size() < 2) {
      throw TypeMismatchError("enum type needs at least 2 labels");
    }
    require_distinct(labels, "enum labels");
    return ParamType(ParamKind::OrderedEnum, std::move(labels));
  }

  /// Members name the bits of every value, in order; c >= 1, no duplicates.
  static ParamType string_set(std::vector<std::string> members) {
    if (members.empty()) {
      throw TypeMismatchError("set type needs at least 1 member");
    }
    require_distinct(members, "set members");
    return ParamType(ParamKind::StringSet, std::move(members));
  }

  ParamKind kind() const { return kind_; }

  const std::vector<std::string>& labels() const { return names_; }
  const std::vector<std::string>& members() const { return names_; }
  std::size_t label_count() const { return names_.size(); }
  std::size_t cardinality() const { return names_.size(); }

  ParamValue bottom() const;
  ParamValue top() const;

  /// True when `v` is a well-formed element of this type.
  bool admits(const ParamValue& v) const;

  bool operator==(const ParamType& other) const {
    return kind_ == other.kind_ && names_ == other.names_;
  }
  bool operator!=(const ParamType& other) const { return !(*this == other); }

 private:
  ParamType(ParamKind kind, std::vector<std::string> names)
      : kind_(kind), names_(std::move(names)) {}

  static void require_distinct(const std::vector<std::string>& names,
                               const char* what) {
    std::set<std::string> seen(names.begin(), names.end());
    if (seen.size() != names.size()) {
      throw TypeMismatchError(std::string(what) + " must be distinct");
    }
  }

  ParamKind kind_;
  std::vector<std::string> names_;
};

/// One lattice element. Immutable value type; only values of the same kind
/// (and, for sets, the same width) are comparable.
class ParamValue {
 public:
  static ParamValue integer(std::uint64_t v) {
    return ParamValue(IntRep{v, false});
  }
  /// The symbolic top of the integer lattice. Never a valid value for an
  /// external analyzer; rendering rejects it.
  static ParamValue infinity() {
    return ParamValue(IntRep{std::numeric_limits<std::uint64_t>::max(), true});
  }
  static ParamValue boolean(bool b) { return ParamValue(BoolRep{b}); }
  static ParamValue enum_index(std::size_t i) { return ParamValue(EnumRep{i}); }
  static ParamValue bits(std::vector<bool> b) {
    return ParamValue(BitsRep{std::move(b)});
  }

  ParamKind kind() const {
    switch (rep_.index()) {
      case 0: return ParamKind::Integer;
      case 1: return ParamKind::Boolean;
      case 2: return ParamKind::OrderedEnum;
      default: return ParamKind::StringSet;
    }
  }

  bool is_infinity() const {
    return kind() == ParamKind::Integer && std::get<IntRep>(rep_).infinite;
  }
  std::uint64_t int_value() const {
    const auto& r = std::get<IntRep>(rep_);
    if (r.infinite) throw TypeMismatchError("infinity has no integer value");
    return r.value;
  }
  bool bool_value() const { return std::get<BoolRep>(rep_).value; }
  std::size_t enum_value() const { return std::get<EnumRep>(rep_).index; }
  const std::vector<bool>& bits_value() const {
    return std::get<BitsRep>(rep_).bits;
  }

  bool operator==(const ParamValue& other) const { return rep_ == other.rep_; }
  bool operator!=(const ParamValue& other) const { return !(*this == other); }

 private:
  struct IntRep {
    std::uint64_t value;
    bool infinite;
    bool operator==(const IntRep& o) const {
      return infinite == o.infinite && (infinite || value == o.value);
    }
  };
  struct BoolRep {
    bool value;
    bool operator==(const BoolRep&) const = default;
  };
  struct EnumRep {
    std::size_t index;
    bool operator==(const EnumRep&) const = default;
  };
  struct BitsRep {
    std::vector<bool> bits;
    bool operator==(const BitsRep&) const = default;
  };

  using Rep = std::variant<IntRep, BoolRep, EnumRep, BitsRep>;
  explicit ParamValue(Rep rep) : rep_(std::move(rep)) {}

  Rep rep_;

  friend bool leq(const ParamValue&, const ParamValue&);
  friend ParamValue meet(const ParamValue&, const ParamValue&);
  friend ParamValue join(const ParamValue&, const ParamValue&);
};

namespace detail {

inline void require_same_kind(const ParamValue& a, const ParamValue& b) {
  if (a.kind() != b.kind()) {
    throw TypeMismatchError(std::string("cannot combine ") +
                            to_string(a.kind()) + " with " +
                            to_string(b.kind()));
  }
  if (a.kind() == ParamKind::StringSet &&
      a.bits_value().size() != b.bits_value().size()) {
    throw TypeMismatchError("set values of different width");
  }
}

}  // namespace detail

/// Partial order: numeric <= with infinity on top, implication, index <=,
/// bitwise subset.
inline bool leq(const ParamValue& a, const ParamValue& b) {
  detail::require_same_kind(a, b);
  switch (a.kind()) {
    case ParamKind::Integer: {
      if (b.is_infinity()) return true;
      if (a.is_infinity()) return false;
      return a.int_value() <= b.int_value();
    }
    case ParamKind::Boolean:
      return !a.bool_value() || b.bool_value();
    case ParamKind::OrderedEnum:
      return a.enum_value() <= b.enum_value();
    case ParamKind::StringSet: {
      const auto& x = a.bits_value();
      const auto& y = b.bits_value();
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && !y[i]) return false;
      }
      return true;
    }
  }
  return false;
}

/// Greatest lower bound: min / and / min-index / intersection.
inline ParamValue meet(const ParamValue& a, const ParamValue& b) {
  detail::require_same_kind(a, b);
  switch (a.kind()) {
    case ParamKind::Integer: {
      if (a.is_infinity()) return b;
      if (b.is_infinity()) return a;
      return ParamValue::integer(std::min(a.int_value(), b.int_value()));
    }
    case ParamKind::Boolean:
      return ParamValue::boolean(a.bool_value() && b.bool_value());
    case ParamKind::OrderedEnum:
      return ParamValue::enum_index(std::min(a.enum_value(), b.enum_value()));
    case ParamKind::StringSet: {
      const auto& x = a.bits_value();
      const auto& y = b.bits_value();
      std::vector<bool> out(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] && y[i];
      return ParamValue::bits(std::move(out));
    }
  }
  return a;
}

/// Least upper bound: max / or / max-index / union.
inline ParamValue join(const ParamValue& a, const ParamValue& b) {
  detail::require_same_kind(a, b);
  switch (a.kind()) {
    case ParamKind::Integer: {
      if (a.is_infinity() || b.is_infinity()) return ParamValue::infinity();
      return ParamValue::integer(std::max(a.int_value(), b.int_value()));
    }
    case ParamKind::Boolean:
      return ParamValue::boolean(a.bool_value() || b.bool_value());
    case ParamKind::OrderedEnum:
      return ParamValue::enum_index(std::max(a.enum_value(), b.enum_value()));
    case ParamKind::StringSet: {
      const auto& x = a.bits_value();
      const auto& y = b.bits_value();
      std::vector<bool> out(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] || y[i];
      return ParamValue::bits(std::move(out));
    }
  }
  return a;
}

inline ParamValue ParamType::bottom() const {
  switch (kind_) {
    case ParamKind::Integer: return ParamValue::integer(0);
    case ParamKind::Boolean: return ParamValue::boolean(false);
    case ParamKind::OrderedEnum: return ParamValue::enum_index(0);
    case ParamKind::StringSet:
      return ParamValue::bits(std::vector<bool>(names_.size(), false));
  }
  return ParamValue::integer(0);
}

inline ParamValue ParamType::top() const {
  switch (kind_) {
    case ParamKind::Integer: return ParamValue::infinity();
    case ParamKind::Boolean: return ParamValue::boolean(true);
    case ParamKind::OrderedEnum:
      return ParamValue::enum_index(names_.size() - 1);
    case ParamKind::StringSet:
      return ParamValue::bits(std::vector<bool>(names_.size(), true));
  }
  return ParamValue::infinity();
}

inline bool ParamType::admits(const ParamValue& v) const {
  if (v.kind() != kind_) return false;
  switch (kind_) {
    case ParamKind::OrderedEnum: return v.enum_value() < names_.size();
    case ParamKind::StringSet: return v.bits_value().size() == names_.size();
    default: return true;
  }
}

/// A named parameter within a fixed analyzer profile.
struct ParamSpec {
  std::string name;
  ParamType type;
};

/// The ordered parameter list of one analyzer; settings and distributions
/// are positionally aligned with it.
using Profile = std::vector<ParamSpec>;

/// One joint parameter assignment; a point in the product lattice spanned by
/// the profile.
class Setting {
 public:
  Setting() = default;
  explicit Setting(std::vector<ParamValue> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  const ParamValue& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<ParamValue>& values() const { return values_; }

  bool operator==(const Setting& other) const { return values_ == other.values_; }
  bool operator!=(const Setting& other) const { return !(*this == other); }

 private:
  std::vector<ParamValue> values_;
};

namespace detail {

inline void require_same_profile(const Setting& p, const Setting& q) {
  if (p.size() != q.size()) {
    throw ProfileMismatchError("settings of different profiles");
  }
}

}  // namespace detail

/// Point-wise order: true iff it holds on every coordinate.
inline bool setting_leq(const Setting& p, const Setting& q) {
  detail::require_same_profile(p, q);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!leq(p[i], q[i])) return false;
  }
  return true;
}

inline Setting setting_meet(const Setting& p, const Setting& q) {
  detail::require_same_profile(p, q);
  std::vector<ParamValue> out;
  out.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(meet(p[i], q[i]));
  return Setting(std::move(out));
}

inline Setting setting_join(const Setting& p, const Setting& q) {
  detail::require_same_profile(p, q);
  std::vector<ParamValue> out;
  out.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(join(p[i], q[i]));
  return Setting(std::move(out));
}

inline Setting bottom_setting(const Profile& profile) {
  std::vector<ParamValue> out;
  out.reserve(profile.size());
  for (const auto& spec : profile) out.push_back(spec.type.bottom());
  return Setting(std::move(out));
}

inline Setting top_setting(const Profile& profile) {
  std::vector<ParamValue> out;
  out.reserve(profile.size());
  for (const auto& spec : profile) out.push_back(spec.type.top());
  return Setting(std::move(out));
}

inline bool matches_profile(const Profile& profile, const Setting& s) {
  if (s.size() != profile.size()) return false;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!profile[i].type.admits(s[i])) return false;
  }
  return true;
}

inline void require_matches_profile(const Profile& profile, const Setting& s) {
  if (!matches_profile(profile, s)) {
    throw ProfileMismatchError("setting does not match profile");
  }
}

}  // namespace latune

#endif  // LATUNE_LATTICE_HPP
