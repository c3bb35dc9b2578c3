#include <gtest/gtest.h>

#include <random>

#include "gestauth/error.hpp"
#include "gestauth/eval/ks.hpp"
#include "gestauth/eval/metrics.hpp"
#include "gestauth/eval/roc.hpp"
#include "oracles.hpp"

using namespace gestauth::eval;

namespace {

std::vector<ScoredItem> random_items(std::mt19937_64& rng, int n, int levels) {
  std::uniform_int_distribution<int> score(0, levels - 1);
  std::bernoulli_distribution positive(0.4);
  std::vector<ScoredItem> items;
  for (int i = 0; i < n; ++i) {
    const bool p = positive(rng);
    items.push_back({(score(rng) + (p ? 0 : 3)) / static_cast<double>(levels + 3), p});
  }
  items[0].positive = true;
  items[1].positive = false;
  return items;
}

}  // namespace

TEST(Metrics, ConfusionArithmetic) {
  const Metrics m = metrics({8, 2, 18, 2});
  EXPECT_DOUBLE_EQ(*m.tpr, 0.8);
  EXPECT_DOUBLE_EQ(*m.fpr, 0.1);
  EXPECT_DOUBLE_EQ(*m.precision, 0.8);
  EXPECT_EQ(m.recall, m.tpr);
}

TEST(Metrics, ZeroDenominatorsAreUndefined) {
  const Metrics none = metrics({0, 0, 0, 0});
  EXPECT_FALSE(none.tpr || none.fpr || none.precision || none.recall);
  const Metrics no_negatives = metrics({3, 0, 0, 1});
  EXPECT_FALSE(no_negatives.fpr.has_value());
  EXPECT_DOUBLE_EQ(*no_negatives.tpr, 0.75);
}

TEST(Roc, PerfectSeparation) {
  const std::vector<ScoredItem> items = {{0.1, true}, {0.2, true}, {0.7, false}, {0.9, false}};
  const auto roc = roc_curve(items);
  EXPECT_DOUBLE_EQ(auc(roc), 1.0);
  bool corner = false;
  for (const auto& p : roc) corner = corner || (p.fpr == 0.0 && p.tpr == 1.0);
  EXPECT_TRUE(corner);
  EXPECT_DOUBLE_EQ(recall_at_full_precision(items), 1.0);
  EXPECT_DOUBLE_EQ(*precision_at_recall(items, 0.75), 1.0);
}

TEST(Roc, IdenticalScoresGiveDiagonalChord) {
  const std::vector<ScoredItem> items = {{0.5, true}, {0.5, false}, {0.5, true}};
  const auto roc = roc_curve(items);
  ASSERT_EQ(roc.size(), 2u);
  EXPECT_EQ(roc[0].fpr, 0.0);
  EXPECT_EQ(roc[0].tpr, 0.0);
  EXPECT_EQ(roc[1].fpr, 1.0);
  EXPECT_EQ(roc[1].tpr, 1.0);
  EXPECT_DOUBLE_EQ(auc(roc), 0.5);
}

TEST(Roc, SingleClassRejected) {
  const std::vector<ScoredItem> items = {{0.1, true}, {0.2, true}};
  EXPECT_THROW(roc_curve(items), gestauth::Error);
  EXPECT_THROW(pr_curve(items), gestauth::Error);
}

TEST(Roc, AucMatchesMannWhitney) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto items = random_items(rng, 50, 2 + trial % 10);
    std::vector<double> pos, neg;
    for (const auto& i : items) (i.positive ? pos : neg).push_back(i.score);
    const auto roc = roc_curve(items);
    EXPECT_NEAR(auc(roc), oracles::mann_whitney_auc(pos, neg), 1e-12);
    EXPECT_EQ(roc.front().fpr, 0.0);
    EXPECT_EQ(roc.front().tpr, 0.0);
    EXPECT_EQ(roc.back().fpr, 1.0);
    EXPECT_EQ(roc.back().tpr, 1.0);
    for (std::size_t k = 1; k < roc.size(); ++k) {
      EXPECT_GT(roc[k].threshold, roc[k - 1].threshold);
      EXPECT_GE(roc[k].tpr, roc[k - 1].tpr);
      EXPECT_GE(roc[k].fpr, roc[k - 1].fpr);
    }
  }
}

TEST(Roc, PointsAgreeWithCountsAt) {
  std::mt19937_64 rng(22);
  const auto items = random_items(rng, 40, 6);
  for (const auto& p : roc_curve(items)) {
    const Metrics m = metrics(counts_at(items, p.threshold));
    EXPECT_DOUBLE_EQ(*m.tpr, p.tpr);
    EXPECT_DOUBLE_EQ(*m.fpr, p.fpr);
  }
  for (const auto& p : pr_curve(items)) {
    const Metrics m = metrics(counts_at(items, p.threshold));
    EXPECT_DOUBLE_EQ(*m.precision, p.precision);
    EXPECT_DOUBLE_EQ(*m.recall, p.recall);
  }
}

TEST(Roc, FullPrecisionThresholds) {
  const std::vector<ScoredItem> items = {{0.1, true}, {0.2, true}, {0.3, false}, {0.35, true}, {1.0, false}};
  EXPECT_DOUBLE_EQ(full_precision_threshold(items), 0.3);
  EXPECT_NEAR(recall_at_full_precision(items), 2.0 / 3.0, 1e-15);
  const double op = full_precision_operating_threshold(items);
  EXPECT_GT(op, 0.2);
  EXPECT_LT(op, 0.2 + 1e-12);
  const Metrics m = metrics(counts_at(items, op));
  EXPECT_EQ(*m.fpr, 0.0);
  EXPECT_NEAR(*m.tpr, 2.0 / 3.0, 1e-15);
  // No positive below every negative: the operating threshold accepts nothing.
  const std::vector<ScoredItem> bad = {{0.5, true}, {0.2, false}};
  EXPECT_EQ(counts_at(bad, full_precision_operating_threshold(bad)).tp, 0);
  EXPECT_DOUBLE_EQ(recall_at_full_precision(bad), 0.0);
}

TEST(Ks, IdenticalSamples) {
  const std::vector<double> x = {0.3, 1.2, 0.7, 0.7, 2.0};
  const KsResult r = ks_two_sample(x, x);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
}

TEST(Ks, DisjointSupports) {
  const std::vector<double> x = {0, 0, 0}, y = {1, 1, 1};
  EXPECT_EQ(ks_two_sample(x, y).statistic, 1.0);
}

TEST(Ks, EmptyRejected) {
  const std::vector<double> x = {1.0}, none;
  EXPECT_THROW(ks_two_sample(x, none), gestauth::Error);
}

TEST(Ks, MatchesEcdfScan) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> len(1, 30), val(0, 12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(static_cast<std::size_t>(len(rng))), y(static_cast<std::size_t>(len(rng)));
    for (auto& v : x) v = val(rng) * 0.25;
    for (auto& v : y) v = val(rng) * 0.25 + (trial % 3) * 0.5;
    const double d = ks_two_sample(x, y).statistic;
    EXPECT_EQ(d, oracles::ks_ecdf_scan(x, y));
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
  }
}

TEST(Ks, KolmogorovDistributionValues) {
  // Reference values of the Kolmogorov survival function.
  EXPECT_NEAR(kolmogorov_q(0.5), 0.963945, 1e-6);
  EXPECT_NEAR(kolmogorov_q(1.0), 0.269999, 1e-6);
  EXPECT_NEAR(kolmogorov_q(1.36), 0.049486, 1e-6);
  EXPECT_NEAR(kolmogorov_q(2.0), 0.000671, 1e-6);
  EXPECT_DOUBLE_EQ(kolmogorov_q(0.0), 1.0);
  // Both series agree where they meet.
  EXPECT_NEAR(kolmogorov_q(1.18 - 1e-9), kolmogorov_q(1.18 + 1e-9), 1e-8);
}
