#ifndef LATUNE_TESTS_TEST_UTIL_HPP
#define LATUNE_TESTS_TEST_UTIL_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "latune/lattice.hpp"

namespace latune::testing {

/// Test-side random source, kept separate from the library's Rng so sampler
/// checks do not test the generator against itself.
class TestRand {
 public:
  explicit TestRand(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t u64(std::uint64_t lo, std::uint64_t hi) {  // inclusive
    return lo + gen_() % (hi - lo + 1);
  }
  double unit() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  bool flip(double q = 0.5) { return unit() < q; }

 private:
  std::mt19937_64 gen_;
};

inline ParamType random_type(TestRand& rnd) {
  switch (rnd.u64(0, 3)) {
    case 0: return ParamType::integer();
    case 1: return ParamType::boolean();
    case 2: {
      const std::size_t k = rnd.u64(2, 5);
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < k; ++i) labels.push_back("l" + std::to_string(i));
      return ParamType::ordered_enum(std::move(labels));
    }
    default: {
      const std::size_t c = rnd.u64(1, 5);
      std::vector<std::string> members;
      for (std::size_t i = 0; i < c; ++i) members.push_back("m" + std::to_string(i));
      return ParamType::string_set(std::move(members));
    }
  }
}

/// Random element, occasionally the integer infinity so top laws get hit.
inline ParamValue random_value(const ParamType& type, TestRand& rnd,
                               std::uint64_t int_limit = 20,
                               bool allow_infinity = true) {
  switch (type.kind()) {
    case ParamKind::Integer:
      if (allow_infinity && rnd.flip(0.05)) return ParamValue::infinity();
      return ParamValue::integer(rnd.u64(0, int_limit));
    case ParamKind::Boolean:
      return ParamValue::boolean(rnd.flip());
    case ParamKind::OrderedEnum:
      return ParamValue::enum_index(rnd.u64(0, type.label_count() - 1));
    case ParamKind::StringSet: {
      std::vector<bool> bits(type.cardinality());
      for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rnd.flip();
      return ParamValue::bits(std::move(bits));
    }
  }
  return ParamValue::integer(0);
}

inline Profile random_profile(TestRand& rnd, std::size_t n) {
  Profile profile;
  for (std::size_t i = 0; i < n; ++i) {
    profile.push_back({"p" + std::to_string(i), random_type(rnd)});
  }
  return profile;
}

inline Setting random_setting(const Profile& profile, TestRand& rnd,
                              std::uint64_t int_limit = 20,
                              bool allow_infinity = false) {
  std::vector<ParamValue> values;
  values.reserve(profile.size());
  for (const auto& spec : profile) {
    values.push_back(random_value(spec.type, rnd, int_limit, allow_infinity));
  }
  return Setting(std::move(values));
}

inline Setting int_setting(std::initializer_list<std::uint64_t> coords) {
  std::vector<ParamValue> values;
  for (std::uint64_t c : coords) values.push_back(ParamValue::integer(c));
  return Setting(std::move(values));
}

inline Profile int_profile(std::size_t n) {
  Profile profile;
  for (std::size_t i = 0; i < n; ++i) {
    profile.push_back({"p" + std::to_string(i), ParamType::integer()});
  }
  return profile;
}

}  // namespace latune::testing

#endif  // LATUNE_TESTS_TEST_UTIL_HPP
