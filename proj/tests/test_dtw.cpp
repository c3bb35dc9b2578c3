#include <gtest/gtest.h>

#include <random>

#include "gestauth/dtw.hpp"
#include "oracles.hpp"

using namespace gestauth;

namespace {

Eigen::VectorXd vec(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())); }

}  // namespace

TEST(Dtw, HandExamples) {
  EXPECT_DOUBLE_EQ(dtw_distance(vec({1, 2, 3}), vec({1, 2, 3})), 0.0);
  EXPECT_DOUBLE_EQ(dtw_distance(vec({0, 0, 1}), vec({0, 1, 1})), 0.0);
  EXPECT_DOUBLE_EQ(dtw_distance(vec({0}), vec({1, 2, 3})), 6.0);
  EXPECT_DOUBLE_EQ(dtw_distance(vec({1, 3}), vec({2})), 2.0);
}

TEST(Dtw, EmptySeriesThrows) {
  EXPECT_THROW(dtw_distance(Eigen::VectorXd(), vec({1})), Error);
}

TEST(Dtw, MatchesEnumerationOracle) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(1, 6), val(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> a(static_cast<std::size_t>(len(rng))), b(static_cast<std::size_t>(len(rng)));
    for (auto& x : a) x = val(rng);
    for (auto& x : b) x = val(rng);
    const double want = oracles::dtw_enumerate(a, b);
    EXPECT_EQ(dtw_distance(vec(a), vec(b)), want);
    EXPECT_EQ(dtw_cost_matrix(vec(a), vec(b))(static_cast<Eigen::Index>(a.size()) - 1, static_cast<Eigen::Index>(b.size()) - 1), want);
  }
}

TEST(Dtw, SymmetricAndNonNegative) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd a(3 + trial % 11), b(2 + trial % 7);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = g(rng);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = g(rng);
    const double ab = dtw_distance(a, b);
    EXPECT_GE(ab, 0.0);
    EXPECT_NEAR(ab, dtw_distance(b, a), 1e-12);
    EXPECT_DOUBLE_EQ(dtw_distance(a, a), 0.0);
  }
}

TEST(Dtw, PathCostEqualsDistance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd a(5 + trial % 9), b(4 + trial % 5);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = u(rng);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = u(rng);
    const auto path = dtw_path(a, b);
    ASSERT_EQ(path.front(), std::make_pair(Eigen::Index{0}, Eigen::Index{0}));
    ASSERT_EQ(path.back(), std::make_pair(a.size() - 1, b.size() - 1));
    double total = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
      total += std::abs(a(path[k].first) - b(path[k].second));
      if (k > 0) {
        const auto di = path[k].first - path[k - 1].first, dj = path[k].second - path[k - 1].second;
        EXPECT_TRUE((di == 1 && dj == 0) || (di == 0 && dj == 1) || (di == 1 && dj == 1));
      }
    }
    EXPECT_NEAR(total, dtw_distance(a, b), 1e-12);
  }
}

TEST(Dtw, WideBandEqualsUnconstrained) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::VectorXd a(20), b(14);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = u(rng);
  for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = u(rng);
  EXPECT_DOUBLE_EQ(dtw_distance(a, b, Eigen::Index{40}), dtw_distance(a, b));
  EXPECT_GE(dtw_distance(a, b, Eigen::Index{0}), dtw_distance(a, b));
}

TEST(Dtw, DistanceVectorLeadsWithBias) {
  FeatureSeriesSet s;
  for (auto& v : s.series) v = vec({0.1, 0.2, 0.3});
  FeatureSeriesSet t = s;
  t[Feature::pressure] = vec({0.1, 0.2, 0.5});
  const DistanceVector d = distance_vector(t, s);
  EXPECT_DOUBLE_EQ(d(0), 1.0);
  EXPECT_DOUBLE_EQ(d(9), 0.2);
  EXPECT_DOUBLE_EQ(d.segment<8>(1).sum(), 0.0);
}
