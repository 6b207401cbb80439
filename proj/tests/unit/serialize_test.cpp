#include "nsg/serialize.hpp"

#include <gtest/gtest.h>

#include "nsg/errors.hpp"

namespace nsg {
namespace {

TEST(Serialize, DistributionRoundTrip) {
  for (const auto& spec : {bounded_sphere(3, 0.5), isotropic_gaussian(2, 2.0), finite_support_rademacher(2, 1.5)}) {
    const auto back = distribution_from_json(json::parse(to_json(spec).dump()));
    EXPECT_EQ(back.family, spec.family);
    EXPECT_EQ(back.dimension, spec.dimension);
    EXPECT_EQ(back.sigma, spec.sigma);
    ASSERT_EQ(back.support.size(), spec.support.size());
    for (std::size_t i = 0; i < spec.support.size(); ++i) {
      EXPECT_EQ(back.support[i].point, spec.support[i].point);
      EXPECT_EQ(back.support[i].probability, spec.support[i].probability);
    }
  }
}

TEST(Serialize, DistributionRejectsBadInput) {
  EXPECT_THROW(distribution_from_json(json::parse(R"({"family":"bounded_sphere","d":3,"sigma":1,"colour":1})")),
               ValidationError);
  EXPECT_THROW(distribution_from_json(json::parse(R"({"family":"cauchy","d":3,"sigma":1})")), ValidationError);
  EXPECT_THROW(distribution_from_json(json::parse(R"({"family":"bounded_sphere","sigma":1})")), ValidationError);
  EXPECT_THROW(distribution_from_json(json::parse(R"({"family":"bounded_sphere","d":"three","sigma":1})")),
               ValidationError);
}

TEST(Serialize, RuleRoundTrip) {
  const AdaptiveRule rules[] = {ConstantRule{2.0}, DoubleOnThreshold{1.0, {2.0, 5.0}},
                                HistoryNormScaled{0.5, 4.0, 0.25}};
  for (const auto& rule : rules) {
    const auto text = to_json(rule).dump();
    EXPECT_EQ(to_json(rule_from_json(json::parse(text))).dump(), text);
  }
  EXPECT_THROW(rule_from_json(json::parse(R"({"kind":"constant","sigma":1,"gain":2})")), ValidationError);
  EXPECT_THROW(rule_from_json(json::parse(R"({"kind":"oracle"})")), ValidationError);
}

TEST(Serialize, CoverRoundTrip) {
  const auto cover = build_half_cover(3, {4, 0});
  const auto back = cover_from_json(json::parse(to_json(cover).dump()));
  ASSERT_EQ(back.points.size(), cover.points.size());
  for (std::size_t i = 0; i < cover.points.size(); ++i) EXPECT_EQ(back.points[i], cover.points[i]);
  EXPECT_THROW(cover_from_json(json::parse("[[1,0],[2,0]]")), ValidationError);
  EXPECT_THROW(cover_from_json(json::parse("[[1,0],[1,0,0]]")), ValidationError);
}

TEST(Serialize, ScenarioRoundTrip) {
  verify::Scenario s;
  s.name = "doubling";
  s.rule = DoubleOnThreshold{1.0, {4.0}};
  s.family = Family::FiniteSupport;
  s.d_grid = {2, 4};
  s.n_grid = {8, 16};
  s.delta = 0.05;
  s.theta = 0.3;
  const auto text = to_json(s).dump();
  EXPECT_EQ(to_json(scenario_from_json(json::parse(text))).dump(), text);
  EXPECT_THROW(scenario_from_json(json::parse(R"({"name":"x","trails":5})")), ValidationError);
}

TEST(Serialize, ConstantEstimateFields) {
  verify::ConstantEstimate e;
  e.cells.push_back({});
  const auto j = to_json(e);
  for (const char* key : {"scenario", "target", "method", "grid", "c_hat", "violations", "trials", "seed", "alpha",
                          "unstable"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["grid"][0]["theta"].is_null());
}

}  // namespace
}  // namespace nsg
