#include "latune/distribution.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

namespace latune {
namespace {

using testing::TestRand;

constexpr double kBaseOnlyLambda = 1e-300;  // exp(-x) == 1.0 exactly: draws 0

ParamDistribution int_dist(std::uint64_t base, double lambda,
                           const std::string& name = "n") {
  return {{name, ParamType::integer()}, ParamValue::integer(base),
          PoissonDelta{lambda}};
}

TEST(Scale, PoissonMeanMultiplies) {
  const DeltaDist scaled = scale(0.25, PoissonDelta{20.0});
  EXPECT_DOUBLE_EQ(std::get<PoissonDelta>(scaled).lambda, 5.0);
}

TEST(Scale, BernoulliFollowsComplementPower) {
  const DeltaDist scaled = scale(2.25, BernoulliDelta{0.5});
  const double got = std::get<BernoulliDelta>(scaled).q;
  // independent evaluation of 1-(1-q)^eta via exp/log
  const double oracle = 1.0 - std::exp(2.25 * std::log(0.5));
  EXPECT_NEAR(got, oracle, 1e-12);
  EXPECT_NEAR(got, 0.7897758961865713, 1e-12);
}

TEST(Scale, EtaOneIsIdentity) {
  const DeltaDist p = scale(1.0, PoissonDelta{3.5});
  EXPECT_DOUBLE_EQ(std::get<PoissonDelta>(p).lambda, 3.5);
  const DeltaDist b = scale(1.0, BernoulliDelta{0.37});
  EXPECT_DOUBLE_EQ(std::get<BernoulliDelta>(b).q, 0.37);
  const DeltaDist j = scale(1.0, JointBernoulliDelta{{0.1, 0.9}});
  EXPECT_EQ(expectation(j), (std::vector<double>{0.1, 0.9}));
}

TEST(Scale, EndpointsAreFixedPoints) {
  for (double eta : {0.1, 0.5, 2.0, 7.0}) {
    EXPECT_DOUBLE_EQ(std::get<BernoulliDelta>(scale(eta, BernoulliDelta{0.0})).q,
                     0.0);
    EXPECT_DOUBLE_EQ(std::get<BernoulliDelta>(scale(eta, BernoulliDelta{1.0})).q,
                     1.0);
  }
}

TEST(Expectation, MatchesFamilyMeans) {
  EXPECT_EQ(expectation(PoissonDelta{10.0}), std::vector<double>{10.0});
  EXPECT_EQ(expectation(BernoulliDelta{0.5}), std::vector<double>{0.5});
  EXPECT_EQ(expectation(JointBernoulliDelta{{0.2, 0.4}}),
            (std::vector<double>{0.2, 0.4}));
  const auto halved = expectation(scale(0.5, BernoulliDelta{0.5}));
  EXPECT_NEAR(halved[0], 0.2928932188134524, 1e-12);
}

TEST(Scale, ShrinkAndExtendInExpectation) {
  TestRand rnd(5);
  for (int iter = 0; iter < 1000; ++iter) {
    DeltaDist d;
    switch (rnd.u64(0, 2)) {
      case 0: d = PoissonDelta{0.05 + 30.0 * rnd.unit()}; break;
      case 1: d = BernoulliDelta{0.05 + 0.9 * rnd.unit()}; break;
      default: {
        std::vector<double> qs;
        for (std::uint64_t i = rnd.u64(1, 4); i > 0; --i) {
          qs.push_back(0.05 + 0.9 * rnd.unit());
        }
        d = JointBernoulliDelta{std::move(qs)};
      }
    }
    const double shrink = 0.05 + 0.9 * rnd.unit();   // < 1
    const double extend = 1.0 + 4.0 * rnd.unit();    // > 1
    const auto before = expectation(d);
    const auto after_shrink = expectation(scale(shrink, d));
    const auto after_extend = expectation(scale(extend, d));
    const bool bernoulli_family = !std::holds_alternative<PoissonDelta>(d);
    for (std::size_t i = 0; i < before.size(); ++i) {
      EXPECT_LT(after_shrink[i], before[i]);
      EXPECT_GT(after_extend[i], before[i]);
      if (bernoulli_family) {
        EXPECT_GE(after_shrink[i], 0.0);
        EXPECT_LE(after_extend[i], 1.0);
      }
    }
  }
}

TEST(Scale, ComposesMultiplicatively) {
  TestRand rnd(6);
  for (int iter = 0; iter < 1000; ++iter) {
    const double e1 = 0.1 + 3.0 * rnd.unit();
    const double e2 = 0.1 + 3.0 * rnd.unit();
    const double lambda = 0.1 + 20.0 * rnd.unit();
    const double q = rnd.unit();
    const auto p2 = scale(e1, scale(e2, PoissonDelta{lambda}));
    const auto p1 = scale(e1 * e2, PoissonDelta{lambda});
    EXPECT_NEAR(std::get<PoissonDelta>(p2).lambda,
                std::get<PoissonDelta>(p1).lambda,
                1e-12 * std::get<PoissonDelta>(p1).lambda);
    const BernoulliDelta b2 =
        std::get<BernoulliDelta>(scale(e1, scale(e2, BernoulliDelta{q})));
    const BernoulliDelta b1 =
        std::get<BernoulliDelta>(scale(e1 * e2, BernoulliDelta{q}));
    EXPECT_NEAR(b2.q, b1.q, 1e-12 * std::max(b1.q, 1e-300));
    EXPECT_NEAR(b2.q_complement, b1.q_complement,
                1e-12 * std::max(b1.q_complement, 1e-300));
  }
}

TEST(Sampling, IntegerShiftsRightByBase) {
  // with the base-only hook the draw is always zero
  Rng rng(RngSeed{1});
  const ParamValue v = sample_param(int_dist(35, kBaseOnlyLambda), rng);
  EXPECT_EQ(v, ParamValue::integer(35));

  // sample == base + the delta draw, checked against a twin stream
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng draw_stream(RngSeed{seed});
    const std::uint64_t draw = draw_stream.poisson(7.0);
    Rng sample_stream(RngSeed{seed});
    EXPECT_EQ(sample_param(int_dist(35, 7.0), sample_stream),
              ParamValue::integer(35 + draw));
  }
}

TEST(Sampling, TrueBaseStaysTrue) {
  ParamDistribution d{{"b", ParamType::boolean()}, ParamValue::boolean(true),
                      BernoulliDelta{0.5}};
  Rng rng(RngSeed{2});
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(sample_param(d, rng), ParamValue::boolean(true));
  }
}

TEST(Sampling, SetBitsAreDisjoined) {
  const ParamType set = ParamType::string_set({"a", "b", "c", "d", "e"});
  ParamDistribution d{{"s", set},
                      ParamValue::bits({true, false, false, false, false}),
                      JointBernoulliDelta{{0.0, 1.0, 0.0, 0.0, 1.0}}};
  Rng rng(RngSeed{3});
  EXPECT_EQ(sample_param(d, rng),
            ParamValue::bits({true, true, false, false, true}));
}

TEST(Sampling, BaseIsFloorOfEverySample) {
  TestRand rnd(9);
  Rng rng(RngSeed{99});
  for (int iter = 0; iter < 300; ++iter) {
    const ParamType type = testing::random_type(rnd);
    const ParamValue base = testing::random_value(type, rnd, 10, false);
    DeltaDist delta;
    switch (type.kind()) {
      case ParamKind::Integer:
        delta = PoissonDelta{0.2 + 5.0 * rnd.unit()};
        break;
      case ParamKind::Boolean:
        delta = BernoulliDelta{rnd.unit()};
        break;
      case ParamKind::OrderedEnum:
        delta = PoissonDelta{0.2 + 2.0 * rnd.unit()};
        break;
      case ParamKind::StringSet:
        delta = JointBernoulliDelta{
            std::vector<double>(type.cardinality(), rnd.unit())};
        break;
    }
    const ParamDistribution dist{{"p", type}, base, delta};
    ASSERT_EQ(check_param_distribution(dist), "");
    for (int draw = 0; draw < 20; ++draw) {
      const ParamValue v = sample_param(dist, rng);
      EXPECT_TRUE(leq(base, v));
      EXPECT_FALSE(v.is_infinity());
    }
  }
}

TEST(Sampling, DegenerateDeltasReturnBase) {
  Rng rng(RngSeed{4});
  ParamDistribution b{{"b", ParamType::boolean()}, ParamValue::boolean(false),
                      BernoulliDelta{0.0}};
  ParamDistribution s{{"s", ParamType::string_set({"x", "y"})},
                      ParamValue::bits({false, true}),
                      JointBernoulliDelta{{0.0, 0.0}}};
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_param(b, rng), ParamValue::boolean(false));
    EXPECT_EQ(sample_param(s, rng), ParamValue::bits({false, true}));
    EXPECT_EQ(sample_param(int_dist(7, kBaseOnlyLambda), rng),
              ParamValue::integer(7));
  }
}

TEST(Sampling, EnumClampsAtLastIndex) {
  const ParamType e = ParamType::ordered_enum({"a", "b", "c"});
  ParamDistribution d{{"e", e}, ParamValue::enum_index(1), PoissonDelta{6.0}};
  Rng rng(RngSeed{5});
  bool clamped = false;
  for (int i = 0; i < 200; ++i) {
    const ParamValue v = sample_param(d, rng);
    EXPECT_LT(v.enum_value(), 3u);
    EXPECT_GE(v.enum_value(), 1u);
    clamped = clamped || v.enum_value() == 2;
  }
  EXPECT_TRUE(clamped);
}

TEST(Sampling, JointSampleCountAndDeterminism) {
  JointDistribution joint;
  joint.params.push_back(int_dist(0, 3.0, "a"));
  joint.params.push_back({{"b", ParamType::boolean()}, ParamValue::boolean(false),
                          BernoulliDelta{0.5}});
  Rng r1(RngSeed{42});
  Rng r2(RngSeed{42});
  const auto s1 = sample_setting(joint, 4, r1);
  const auto s2 = sample_setting(joint, 4, r2);
  EXPECT_EQ(s1.size(), 4u);
  EXPECT_EQ(s1, s2);
  Rng r3(RngSeed{43});
  const auto s3 = sample_setting(joint, 4, r3);
  EXPECT_NE(s1, s3);  // astronomically unlikely to collide
}

TEST(Sampling, EmpiricalMeansNearTheory) {
  const int n = 10000;
  for (double lambda : {2.0, 10.0}) {
    Rng rng(RngSeed{77});
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(lambda));
    const double tol = 4.0 * std::sqrt(lambda / n);
    EXPECT_NEAR(sum / n, lambda, tol);
  }
  for (double q : {0.1, 0.5}) {
    Rng rng(RngSeed{78});
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.bernoulli(q) ? 1.0 : 0.0;
    const double tol = 4.0 * std::sqrt(q * (1.0 - q) / n);
    EXPECT_NEAR(sum / n, q, tol);
  }
}

TEST(Validation, FamilyRules) {
  EXPECT_EQ(check_param_distribution(int_dist(0, 2.0)), "");
  EXPECT_NE(check_param_distribution({{"b", ParamType::boolean()},
                                      ParamValue::boolean(false),
                                      PoissonDelta{1.0}}),
            "");
  EXPECT_EQ(check_param_distribution({{"b", ParamType::boolean()},
                                      ParamValue::boolean(false),
                                      BernoulliDelta{0.5}}),
            "");
  const ParamType e2 = ParamType::ordered_enum({"none", "formals"});
  EXPECT_EQ(check_param_distribution(
                {{"e", e2}, ParamValue::enum_index(0), BernoulliDelta{0.5}}),
            "");
  const ParamType e3 = ParamType::ordered_enum({"a", "b", "c"});
  EXPECT_NE(check_param_distribution(
                {{"e", e3}, ParamValue::enum_index(0), BernoulliDelta{0.5}}),
            "");
  EXPECT_EQ(check_param_distribution(
                {{"e", e3}, ParamValue::enum_index(0), PoissonDelta{0.5}}),
            "");
  const ParamType s5 = ParamType::string_set({"a", "b", "c", "d", "e"});
  EXPECT_NE(check_param_distribution(
                {{"s", s5},
                 ParamValue::bits({true, false, false, false, false}),
                 JointBernoulliDelta{{0.5, 0.5, 0.5, 0.5}}}),
            "");
  EXPECT_NE(check_param_distribution(
                {{"n", ParamType::integer()}, ParamValue::infinity(),
                 PoissonDelta{1.0}}),
            "");
  EXPECT_NE(check_param_distribution(int_dist(0, 0.0)), "");
  EXPECT_NE(check_param_distribution(int_dist(0, -1.0)), "");
}

}  // namespace
}  // namespace latune
