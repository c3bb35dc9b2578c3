#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "gestauth/preprocess.hpp"
#include "support.hpp"

using namespace gestauth;
using testing_support::arc_sample;
using testing_support::rigid_copy;

namespace {

Stroke stroke_from(const std::vector<std::pair<double, double>>& pts) {
  Stroke s;
  std::int64_t t = 0;
  for (const auto& [x, y] : pts) {
    TouchEvent e;
    e.x = x;
    e.y = y;
    e.t = t;
    t += 10;
    e.pressure = 0.5;
    s.events.push_back(e);
  }
  return s;
}

Stroke circle_stroke(int n, double r, double gap_fraction) {
  std::vector<std::pair<double, double>> pts;
  for (int j = 0; j < n; ++j) {
    const double a = 2.0 * std::numbers::pi * (1.0 - gap_fraction) * j / (n - 1);
    pts.emplace_back(400 + r * std::cos(a), 600 + r * std::sin(a));
  }
  return stroke_from(pts);
}

}  // namespace

TEST(Preprocess, SingleCurveCentroidAtOriginAndArrowOnXAxis) {
  const GestureSample s = arc_sample("a");
  const AdjustedCurve c = adjust_single(s.strokes[0]);
  EXPECT_NEAR(c.adjusted.row(0).mean(), 0.0, 1e-9);
  EXPECT_NEAR(c.adjusted.row(1).mean(), 0.0, 1e-9);
  const Point arrow = c.avg_end - c.avg_start;
  EXPECT_GT(arrow.x(), 0.0);
  EXPECT_NEAR(arrow.y(), 0.0, 1e-9);
}

TEST(Preprocess, NearlyClosedCurveOrientsByAnchor) {
  const AdjustedCurve c = adjust_single(circle_stroke(600, 100.0, 0.01));
  const Point anchor = 0.5 * (c.avg_start + c.avg_end);
  EXPECT_GT(anchor.x(), 0.0);
  EXPECT_NEAR(anchor.y(), 0.0, 1e-9);
}

TEST(Preprocess, ExplicitXiSwitchesRule) {
  const Stroke s = circle_stroke(60, 100.0, 0.03);
  AdjustConfig tight;
  tight.xi = 0.0;  // start->end arrow is longer than 0, so alpha is used
  const AdjustedCurve c = adjust_single(s, tight);
  const Point arrow = c.avg_end - c.avg_start;
  EXPECT_GT(arrow.x(), 0.0);
  EXPECT_NEAR(arrow.y(), 0.0, 1e-9);
}

TEST(Preprocess, StrokeOfIdenticalPointsIsDegenerate) {
  const Stroke s = stroke_from({{5, 5}, {5, 5}, {5, 5}, {5, 5}});
  try {
    adjust_single(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_geometry);
  }
}

TEST(Preprocess, MultiCurveSharedFrame) {
  const GestureSample s = arc_sample("m", 3);
  const auto curves = adjust_multi(s);
  ASSERT_EQ(curves.size(), 3u);
  EXPECT_NEAR(curves[0].avg_start.norm(), 0.0, 1e-9);
  EXPECT_GT(curves[1].avg_start.x(), 0.0);
  EXPECT_NEAR(curves[1].avg_start.y(), 0.0, 1e-9);
  // One rigid motion: pairwise start distances are preserved.
  const Coords raw0 = stroke_coords(s.strokes[0]), raw2 = stroke_coords(s.strokes[2]);
  const double before = (raw0.leftCols(3).rowwise().mean() - raw2.leftCols(3).rowwise().mean()).norm();
  EXPECT_NEAR((curves[0].avg_start - curves[2].avg_start).norm(), before, 1e-9);
}

TEST(Preprocess, NormalizeRangeAndConstantAxis) {
  Coords c(2, 4);
  c << 1, 2, 3, 5, 7, 7, 7, 7;
  const Coords n = normalize(c);
  EXPECT_DOUBLE_EQ(n.row(0).minCoeff(), 0.0);
  EXPECT_DOUBLE_EQ(n.row(0).maxCoeff(), 1.0);
  EXPECT_DOUBLE_EQ(n(0, 1), 0.25);
  for (int j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(n(1, j), 0.5);
}

TEST(Preprocess, NormalizeTreatsRoundoffSpreadAsConstant) {
  Coords c(2, 3);
  c << 0, 1, 2, 1e6, 1e6 + 1e-7, 1e6;
  const Coords n = normalize(c);
  EXPECT_DOUBLE_EQ(n(1, 1), 0.5);
}

TEST(Preprocess, EtaLargerThanHalfTheStrokeIsClamped) {
  AdjustConfig cfg;
  cfg.eta_s = 50;
  cfg.eta_e = 50;
  const AdjustedCurve c = adjust_single(arc_sample("a", 1, 10).strokes[0], cfg);
  EXPECT_TRUE(c.avg_start.allFinite());
  EXPECT_NEAR(c.avg_start.x(), c.adjusted.leftCols(5).row(0).mean(), 1e-12);
}

class RigidInvariance : public ::testing::TestWithParam<int> {};

TEST_P(RigidInvariance, NormalizedCoordinatesUnchanged) {
  const int fingers = GetParam();
  std::mt19937_64 rng(11 + fingers);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi), shift(-500, 500);
  for (int trial = 0; trial < 20; ++trial) {
    const GestureSample s = arc_sample("r", fingers, 30, 0.3 * trial);
    const GestureSample moved = rigid_copy(s, angle(rng), shift(rng), shift(rng));
    const auto a = adjust_sample(s);
    const auto b = adjust_sample(moved);
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_LT((a[k].normalized - b[k].normalized).cwiseAbs().maxCoeff(), 1e-6);
      EXPECT_LT((a[k].adjusted - b[k].adjusted).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Fingers, RigidInvariance, ::testing::Values(1, 2, 4));
