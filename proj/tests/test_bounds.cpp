#include <gtest/gtest.h>

#include <cmath>

#include "mhsos/bounds.hpp"
#include "mhsos/transform.hpp"

namespace mhsos {
namespace {

const double kE = std::exp(1.0);

bool has_flag(const BoundRecord& r, const std::string& name) {
  for (const auto& u : r.unresolved)
    if (u.find(name) != std::string::npos) return true;
  return false;
}

TEST(MainBoundsTest, Examples) {
  BoundReport b = thm_main_bounds(parse_shape("N=2,2 K=2,2"));
  EXPECT_EQ(b.subject, "N=2,2 K=2,2");
  EXPECT_NEAR(b.record("pos").lower, 1 / (48 * std::sqrt(2.0)), 1e-15);
  EXPECT_DOUBLE_EQ(b.record("pos").upper, 5.0);
  EXPECT_NEAR(b.record("sq").upper, 1024 * kE / 3, 1e-9);
  EXPECT_TRUE(has_flag(b.record("sq"), "c2"));
  EXPECT_TRUE(b.record("pos").unresolved.empty());
  EXPECT_THROW(b.record("nope"), std::out_of_range);
}

TEST(MainBoundsTest, ConstantsOverrideAndClearFlags) {
  BoundConstants c = parse_constants("c1=0.5,c2=2");
  EXPECT_TRUE(c.resolved("c1"));
  EXPECT_FALSE(c.resolved("c3"));
  BoundReport b = thm_main_bounds(parse_shape("N=2,2 K=2,2"), c);
  EXPECT_NEAR(b.record("sq").upper, 2 * 1024 * kE / 3, 1e-9);
  EXPECT_NEAR(b.record("sq").lower, 0.5 / 3, 1e-15);
  EXPECT_FALSE(has_flag(b.record("sq"), "c1"));
  EXPECT_THROW(parse_constants("c9=1"), std::invalid_argument);
  EXPECT_THROW(parse_constants("c1"), std::invalid_argument);
  EXPECT_THROW(parse_constants("c1=abc"), std::invalid_argument);
  EXPECT_TRUE(parse_constants("").explicit_set.empty());
}

TEST(MainBoundsTest, OrderedAndFiniteOnGrid) {
  for (const Shape& s : default_bounds_grid()) {
    for (const BoundReport& rep : {thm_main_bounds(s), section_bounds(s)})
      for (const auto& r : rep.records) {
        EXPECT_TRUE(std::isfinite(r.lower) && r.lower > 0) << s.to_string() << " " << r.name;
        EXPECT_TRUE(std::isfinite(r.upper) && r.upper > 0) << s.to_string() << " " << r.name;
        EXPECT_TRUE(r.ordered()) << s.to_string() << " " << r.name;
      }
  }
}

TEST(MainBoundsTest, LargeShapesStayFinite) {
  BoundReport b = thm_main_bounds(parse_shape("N=200,300 K=40,60"));
  for (const auto& r : b.records) {
    EXPECT_TRUE(std::isfinite(r.lower) && r.lower > 0) << r.name;
    EXPECT_TRUE(std::isfinite(r.upper)) << r.name;
  }
}

TEST(SectionBoundsTest, Examples) {
  Shape s = parse_shape("N=2,2 K=2,2");
  BoundReport b = section_bounds(s);
  EXPECT_NEAR(b.record("pos_section").lower, 1 / (12 * std::sqrt(2.0)), 1e-15);
  EXPECT_DOUBLE_EQ(b.record("pos_section").upper, 5.0);
  EXPECT_NEAR(b.record("sq_section").upper, 1.5 * 1024 * kE, 1e-9);
  EXPECT_TRUE(b.record("pos_section").unresolved.empty());
  BoundReport one = section_bounds(parse_shape("N=3 K=4"));
  EXPECT_FALSE(one.record("pos_section").unresolved.empty());
}

TEST(SectionBoundsTest, SingleSixteenVersusFourToTheM) {
  for (const char* text : {"N=2,2 K=2,2", "N=3,5 K=4,2", "N=2,7 K=6,2"}) {
    Shape s = parse_shape(text);
    BoundReport t = thm_main_bounds(s);
    BoundReport sec = section_bounds(s);
    EXPECT_NEAR(sec.record("pos_section").lower / t.record("pos").lower, 4.0, 1e-12) << text;
    EXPECT_NEAR(t.values.at("pos_lower_single_16"), sec.record("pos_section").lower, 1e-15) << text;
  }
}

TEST(SectionBoundsTest, AgreesWithBallRatio) {
  for (const char* text : {"N=2 K=2", "N=2,2 K=2,2", "N=3,2 K=2,4"}) {
    Shape s = parse_shape(text);
    BallRatioBounds br = ball_ratio_bounds(s);
    BoundReport sec = section_bounds(s);
    EXPECT_DOUBLE_EQ(sec.values.at("constant_C"), br.constant_C.get_d());
    EXPECT_NEAR(sec.values.at("det_root"), br.det_root, 1e-15);
    EXPECT_NEAR(sec.record("sq_section").lower, br.det_lower, 1e-15);
    EXPECT_NEAR(thm_main_bounds(s).values.at("sq_lower_det_bracket"), br.det_lower, 1e-15);
  }
}

TEST(FamilyRatioBoundsTest, Examples) {
  BoundReport v2 = corollary_bounds(16, 4, 2);
  EXPECT_EQ(v2.subject, "N=4,4,4,4 K=2,2,2,2");
  EXPECT_NEAR(v2.record("sq_over_pos").lower, 1.0 / 16, 1e-15);
  EXPECT_DOUBLE_EQ(v2.values.at("upper_exponent"), -1.5);
  BoundConstants c = parse_constants("c1=3");
  EXPECT_NEAR(corollary_bounds(16, 4, 2, c).record("sq_over_pos").lower, 3.0 / 16, 1e-15);
  BoundReport v1 = corollary_bounds(10, 3, 1);
  EXPECT_DOUBLE_EQ(v1.record("sq_over_pos").upper, 1.0);
  EXPECT_THROW(corollary_bounds(15, 4, 2), std::invalid_argument);
  EXPECT_THROW(corollary_bounds(10, 3, 7), std::invalid_argument);
  EXPECT_THROW(corollary_bounds(2, 3, 1), std::invalid_argument);
}

TEST(BlekhermanBoundsTest, Examples) {
  BoundReport b = blekherman_bounds(16, 4);
  const double expect = std::pow(16.0, 2.5) / std::pow(16.0, 4) * (24.0 * 6.0) / (std::pow(4.0, 8) * 40320.0);
  EXPECT_NEAR(b.record("sq_over_pos").lower, expect, 1e-12 * expect);
  EXPECT_DOUBLE_EQ(b.values.at("upper_n_exponent"), -1.5);
  double prev_lo = 1e300, prev_hi = 1e300;
  for (int n : {100, 10000, 2000000000}) {
    BoundReport r = blekherman_bounds(n, 2);
    EXPECT_LT(r.record("sq_over_pos").lower, prev_lo);
    EXPECT_LT(r.record("sq_over_pos").upper, prev_hi);
    prev_lo = r.record("sq_over_pos").lower;
    prev_hi = r.record("sq_over_pos").upper;
  }
  EXPECT_LT(prev_lo, 1e-2);
  EXPECT_LT(prev_hi, 1e-1);
  EXPECT_THROW(blekherman_bounds(2, 2), std::invalid_argument);
  EXPECT_THROW(blekherman_bounds(5, 1), std::invalid_argument);
}

TEST(BoundsGridTest, CsvRows) {
  std::string csv = bounds_grid_csv({parse_shape("N=2,2 K=2,2")});
  EXPECT_EQ(csv.rfind("shape,family,record,lower,upper,unresolved\n", 0), 0u);
  std::size_t rows = 0;
  for (char ch : csv) rows += ch == '\n';
  EXPECT_EQ(rows, 1u + 3u + 4u);
  EXPECT_NE(csv.find("\"N=2,2 K=2,2\",main,pos,"), std::string::npos);
}

}  // namespace
}  // namespace mhsos
