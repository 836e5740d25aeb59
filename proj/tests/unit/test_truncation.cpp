#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "burden/rng.hpp"
#include "burden/truncation.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace burden {
namespace {

// `before` days at `low` then seven days at `high`, scrape date on the last
// day.
DailySeries stepped(int before, double low, double high) {
  std::vector<double> v(static_cast<std::size_t>(before), low);
  v.insert(v.end(), kFullVolumeDays, high);
  auto s = test::series(v);
  s.scrape_date = s.end();
  return s;
}

TEST(DetectBoundary, FortyToHundredScalesByTwoAndAHalf) {
  const auto s = stepped(23, 40.0, 100.0);
  const auto r = detect_boundary(s);
  EXPECT_TRUE(r.anchored);
  EXPECT_EQ(r.boundary_date, add_days(*s.scrape_date, -6));
  EXPECT_EQ(r.boundary_date, s.date_at(23));
  EXPECT_TRUE(r.truncation_detected);
  ASSERT_TRUE(r.scale_factor);
  EXPECT_DOUBLE_EQ(*r.scale_factor, 2.5);
  EXPECT_DOUBLE_EQ(*r.confidence, 2.5);
  EXPECT_EQ(r.pre_days, 7);
  EXPECT_EQ(r.post_days, 7);
  const auto a = adjust(s, r);
  for (double v : a.values) EXPECT_DOUBLE_EQ(v, 100.0);
}

TEST(DetectBoundary, ConstantSeriesIsNotTruncated) {
  const auto s = stepped(20, 70.0, 70.0);
  const auto r = detect_boundary(s);
  EXPECT_DOUBLE_EQ(*r.confidence, 1.0);
  EXPECT_FALSE(r.truncation_detected);
  EXPECT_FALSE(r.scale_factor);
  EXPECT_EQ(r.note, "no visible truncation");
  EXPECT_EQ(adjust(s, r).values, s.values);
}

TEST(DetectBoundary, Preconditions) {
  auto five = test::series({1, 2, 3, 4, 5});
  five.scrape_date = five.end();
  EXPECT_THROW(detect_boundary(five), std::invalid_argument);

  auto outside = stepped(10, 1, 2);
  outside.scrape_date = add_days(outside.end(), 3);
  EXPECT_THROW(detect_boundary(outside), std::invalid_argument);

  // Boundary on the first day leaves nothing before it.
  auto no_history = test::series(std::vector<double>(9, 5.0));
  no_history.scrape_date = no_history.date_at(6);
  EXPECT_THROW(detect_boundary(no_history), std::invalid_argument);

  DetectOptions bad;
  bad.window = 0;
  EXPECT_THROW(detect_boundary(stepped(10, 1, 2), bad), std::invalid_argument);
}

TEST(DetectBoundary, ZeroHistoryIsDegenerate) {
  const auto s = stepped(15, 0.0, 12.0);
  const auto r = detect_boundary(s);
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.truncation_detected);
  EXPECT_FALSE(r.confidence);
  EXPECT_FALSE(r.scale_factor);
  EXPECT_EQ(adjust(s, r).values, s.values);

  const auto silent = detect_boundary(stepped(15, 0.0, 0.0));
  EXPECT_FALSE(silent.degenerate);
  EXPECT_FALSE(silent.truncation_detected);
}

TEST(DetectBoundary, ScanFindsJumpWithoutScrapeDate) {
  auto s = stepped(20, 30.0, 90.0);
  s.scrape_date.reset();
  const auto r = detect_boundary(s);
  EXPECT_FALSE(r.anchored);
  EXPECT_EQ(r.boundary_date, s.date_at(20));
  EXPECT_DOUBLE_EQ(*r.scale_factor, 3.0);
  EXPECT_EQ(scan_boundary(s, 3), std::optional<std::size_t>(20));
  EXPECT_FALSE(scan_boundary(test::series(std::vector<double>(12, 0.0)), 3));
}

TEST(Adjust, IdentityAndMismatch) {
  const auto s = stepped(20, 40.0, 100.0);
  auto r = detect_boundary(s);
  r.scale_factor = 1.0;
  EXPECT_EQ(adjust(s, r).values, s.values);

  r = detect_boundary(s);
  auto other = s;
  other.region = "R2";
  EXPECT_THROW(adjust(other, r), std::invalid_argument);
  other = s;
  other.kind = SignalKind::volume;
  EXPECT_THROW(adjust(other, r), std::invalid_argument);
}

TEST(Adjust, LeavesBoundaryAndLaterUntouched) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v;
    for (int d = 0; d < 30; ++d) {
      v.push_back(static_cast<double>(rng.poisson(d < 23 ? 30.0 : 80.0)));
    }
    auto s = test::series(v);
    s.scrape_date = s.end();
    const auto r = detect_boundary(s);
    const auto a = adjust(s, r);
    ASSERT_EQ(a.size(), s.size());
    EXPECT_EQ(a.kind, s.kind);
    for (std::size_t i = 23; i < s.size(); ++i) {
      EXPECT_EQ(a.values[i], s.values[i]);
    }
    if (r.truncation_detected) {
      const auto again = detect_boundary(a);
      EXPECT_GE(*again.confidence, 0.9);
      EXPECT_LE(*again.confidence, 1.1);
    }
  }
}

TEST(Adjust, ScalingInputScalesOutput) {
  Rng rng(13);
  std::vector<double> v;
  for (int d = 0; d < 30; ++d) {
    v.push_back(static_cast<double>(rng.poisson(d < 23 ? 40.0 : 100.0)));
  }
  auto s = test::series(v);
  s.scrape_date = s.end();
  const auto r = detect_boundary(s);
  ASSERT_TRUE(r.truncation_detected);
  const auto a = adjust(s, r);
  for (double c : {0.5, 3.0, 17.25}) {
    auto scaled = s;
    for (auto& x : scaled.values) x *= c;
    const auto rs = detect_boundary(scaled);
    EXPECT_NEAR(*rs.scale_factor, *r.scale_factor, 1e-12);
    const auto as = adjust(scaled, rs);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(as.values[i], c * a.values[i], 1e-9 * c * a.values[i] + 1e-12);
    }
  }
}

TEST(BoundaryJson, CarriesEveryField) {
  const auto r = detect_boundary(stepped(20, 40.0, 100.0));
  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["region"], "R1");
  EXPECT_EQ(j["kind"], "keyword_count");
  EXPECT_EQ(j["boundary_date"], format_date(r.boundary_date));
  EXPECT_EQ(j["scale_factor"], 2.5);
  EXPECT_EQ(j["truncation_detected"], true);
  EXPECT_EQ(j["t_statistic"], "inf");
  const auto none = nlohmann::json::parse(to_json(detect_boundary(stepped(15, 0, 3))));
  EXPECT_TRUE(none["confidence"].is_null());
  EXPECT_TRUE(none["scale_factor"].is_null());
  EXPECT_EQ(none["degenerate"], true);
}

}  // namespace
}  // namespace burden
