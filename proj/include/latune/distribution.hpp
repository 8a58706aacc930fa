#ifndef LATUNE_DISTRIBUTION_HPP
#define LATUNE_DISTRIBUTION_HPP

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "latune/lattice.hpp"
#include "latune/rng.hpp"

namespace latune {

/// Exploration component of a parameter distribution.
struct PoissonDelta {
  double lambda;  // > 0
};

/// Bernoulli success probability, carried together with its complement so
/// that repeated complement powers (scaling) stay accurate near both
/// endpoints instead of dying in 1 - (1 - q) cancellation.
struct BernoulliDelta {
  double q = 0.0;
  double q_complement = 1.0;

  BernoulliDelta() = default;
  BernoulliDelta(double q_in) : q(q_in), q_complement(1.0 - q_in) {}

  static BernoulliDelta with_complement(double q_in, double complement) {
    BernoulliDelta b;
    b.q = q_in;
    b.q_complement = complement;
    return b;
  }

  /// 1 - (1-q)^eta, both channels computed in their own stable form.
  BernoulliDelta complement_power(double eta) const {
    if (q_complement <= 0.0) return with_complement(1.0, 0.0);
    const double c_new = std::pow(q_complement, eta);
    const double q_new = -std::expm1(eta * std::log(q_complement));
    return with_complement(q_new, c_new);
  }
};

struct JointBernoulliDelta {
  std::vector<BernoulliDelta> dims;  // one per set member

  JointBernoulliDelta() = default;
  JointBernoulliDelta(std::vector<double> qs_in) {
    dims.reserve(qs_in.size());
    for (double q : qs_in) dims.emplace_back(q);
  }

  std::vector<double> qs() const {
    std::vector<double> out;
    out.reserve(dims.size());
    for (const auto& d : dims) out.push_back(d.q);
    return out;
  }
};

using DeltaDist = std::variant<PoissonDelta, BernoulliDelta, JointBernoulliDelta>;

/// Rescale the exploration scope by eta: Poisson means multiply, Bernoulli
/// success probabilities follow 1 - (1-q)^eta, joint Bernoullis point-wise.
inline DeltaDist scale(double eta, const DeltaDist& d) {
  if (eta == 1.0) return d;
  if (const auto* p = std::get_if<PoissonDelta>(&d)) {
    return PoissonDelta{eta * p->lambda};
  }
  if (const auto* b = std::get_if<BernoulliDelta>(&d)) {
    return b->complement_power(eta);
  }
  const auto& j = std::get<JointBernoulliDelta>(d);
  JointBernoulliDelta out;
  out.dims.reserve(j.dims.size());
  for (const auto& b : j.dims) out.dims.push_back(b.complement_power(eta));
  return out;
}

/// Mean of the delta, one entry per dimension (scalar deltas yield one).
inline std::vector<double> expectation(const DeltaDist& d) {
  if (const auto* p = std::get_if<PoissonDelta>(&d)) return {p->lambda};
  if (const auto* b = std::get_if<BernoulliDelta>(&d)) return {b->q};
  return std::get<JointBernoulliDelta>(d).qs();
}

/// A parameter as a random variable: one-point base (retained knowledge)
/// combined with a delta (exploration) by shift / disjunction.
struct ParamDistribution {
  ParamSpec spec;
  ParamValue base;
  DeltaDist delta;
};

/// Empty string when well-formed, else a description of the defect.
/// Family rules: Integer takes Poisson; Boolean takes Bernoulli; an ordered
/// enum takes Poisson (or Bernoulli when it has exactly two labels, where the
/// combine operator degenerates to Boolean disjunction); a string set takes a
/// joint Bernoulli of matching width.
inline std::string check_param_distribution(const ParamDistribution& d) {
  const auto& type = d.spec.type;
  if (!type.admits(d.base)) return "base value does not match parameter type";
  switch (type.kind()) {
    case ParamKind::Integer:
      if (d.base.is_infinity()) return "base must be finite";
      if (!std::holds_alternative<PoissonDelta>(d.delta)) {
        return "integer parameter requires a poisson delta";
      }
      break;
    case ParamKind::Boolean:
      if (!std::holds_alternative<BernoulliDelta>(d.delta)) {
        return "boolean parameter requires a bernoulli delta";
      }
      break;
    case ParamKind::OrderedEnum:
      if (std::holds_alternative<BernoulliDelta>(d.delta)) {
        if (type.label_count() != 2) {
          return "bernoulli delta only fits a two-label enum";
        }
      } else if (!std::holds_alternative<PoissonDelta>(d.delta)) {
        return "enum parameter requires a poisson (or two-label bernoulli) delta";
      }
      break;
    case ParamKind::StringSet: {
      const auto* j = std::get_if<JointBernoulliDelta>(&d.delta);
      if (j == nullptr) return "set parameter requires a joint bernoulli delta";
      if (j->dims.size() != type.cardinality()) {
        return "joint bernoulli width does not match set cardinality";
      }
      break;
    }
  }
  if (const auto* p = std::get_if<PoissonDelta>(&d.delta)) {
    if (!(p->lambda > 0.0)) return "poisson mean must be positive";
  } else if (const auto* b = std::get_if<BernoulliDelta>(&d.delta)) {
    if (!(b->q >= 0.0 && b->q <= 1.0)) return "bernoulli q must lie in [0,1]";
  } else {
    for (const auto& dim : std::get<JointBernoulliDelta>(d.delta).dims) {
      if (!(dim.q >= 0.0 && dim.q <= 1.0)) {
        return "bernoulli q must lie in [0,1]";
      }
    }
  }
  return {};
}

namespace detail {

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t sum = a + b;
  return sum < a ? std::numeric_limits<std::uint64_t>::max() : sum;
}

}  // namespace detail

/// Draw one value: base shifted or disjoined with a fresh delta draw. The
/// base is a floor of every sample, and integer draws stay finite.
inline ParamValue sample_param(const ParamDistribution& d, Rng& rng) {
  const auto& type = d.spec.type;
  switch (type.kind()) {
    case ParamKind::Integer:
      return ParamValue::integer(detail::saturating_add(
          d.base.int_value(), rng.poisson(std::get<PoissonDelta>(d.delta).lambda)));
    case ParamKind::Boolean:
      return ParamValue::boolean(
          d.base.bool_value() | rng.bernoulli(std::get<BernoulliDelta>(d.delta).q));
    case ParamKind::OrderedEnum: {
      const std::size_t last = type.label_count() - 1;
      std::size_t idx;
      if (const auto* p = std::get_if<PoissonDelta>(&d.delta)) {
        const std::uint64_t raw =
            detail::saturating_add(d.base.enum_value(), rng.poisson(p->lambda));
        idx = raw > last ? last : static_cast<std::size_t>(raw);
      } else {
        idx = d.base.enum_value() |
              static_cast<std::size_t>(
                  rng.bernoulli(std::get<BernoulliDelta>(d.delta).q));
      }
      return ParamValue::enum_index(idx);
    }
    case ParamKind::StringSet: {
      const auto& dims = std::get<JointBernoulliDelta>(d.delta).dims;
      std::vector<bool> out(d.base.bits_value());
      for (std::size_t i = 0; i < dims.size(); ++i) {
        const bool draw = rng.bernoulli(dims[i].q);
        out[i] = out[i] | draw;
      }
      return ParamValue::bits(std::move(out));
    }
  }
  return d.base;
}

/// Independent product of the per-parameter distributions, aligned with the
/// profile.
struct JointDistribution {
  std::vector<ParamDistribution> params;

  Profile profile() const {
    Profile out;
    out.reserve(params.size());
    for (const auto& p : params) out.push_back(p.spec);
    return out;
  }
};

inline Setting sample_one(const JointDistribution& joint, Rng& rng) {
  std::vector<ParamValue> values;
  values.reserve(joint.params.size());
  for (const auto& p : joint.params) values.push_back(sample_param(p, rng));
  return Setting(std::move(values));
}

/// `num` independent settings; coordinates factorize, draws consume the
/// stream in a fixed order.
inline std::vector<Setting> sample_setting(const JointDistribution& joint,
                                           std::size_t num, Rng& rng) {
  std::vector<Setting> out;
  out.reserve(num);
  for (std::size_t i = 0; i < num; ++i) out.push_back(sample_one(joint, rng));
  return out;
}

}  // namespace latune

#endif  // LATUNE_DISTRIBUTION_HPP
