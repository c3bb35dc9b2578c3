#include "gestauth/eval/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gestauth/error.hpp"

namespace gestauth::eval {

namespace {

struct SweepStep {
  double threshold;
  std::int64_t tp;
  std::int64_t fp;
};

// Cumulative accepted counts at each threshold of the sweep.
std::vector<SweepStep> sweep(std::span<const ScoredItem> items, std::int64_t& positives, std::int64_t& negatives) {
  positives = std::count_if(items.begin(), items.end(), [](const ScoredItem& i) { return i.positive; });
  negatives = static_cast<std::int64_t>(items.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorKind::invalid_value, "ROC analysis needs both positive and negative items");
  }
  std::vector<ScoredItem> sorted(items.begin(), items.end());
  std::sort(sorted.begin(), sorted.end(), [](const ScoredItem& a, const ScoredItem& b) { return a.score < b.score; });

  std::vector<SweepStep> steps;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double s = sorted[i].score;
    steps.push_back({s, tp, fp});
    while (i < sorted.size() && sorted[i].score == s) {
      (sorted[i].positive ? tp : fp) += 1;
      ++i;
    }
  }
  steps.push_back({std::nextafter(sorted.back().score, std::numeric_limits<double>::infinity()), tp, fp});
  return steps;
}

}  // namespace

ConfusionCounts counts_at(std::span<const ScoredItem> items, double threshold) {
  ConfusionCounts c;
  for (const auto& item : items) {
    const bool accepted = item.score < threshold;
    if (item.positive) {
      (accepted ? c.tp : c.fn) += 1;
    } else {
      (accepted ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

std::vector<RocPoint> roc_curve(std::span<const ScoredItem> items) {
  std::int64_t p = 0, n = 0;
  const auto steps = sweep(items, p, n);
  std::vector<RocPoint> out;
  out.reserve(steps.size());
  for (const auto& s : steps) {
    out.push_back({s.threshold, static_cast<double>(s.fp) / static_cast<double>(n),
                   static_cast<double>(s.tp) / static_cast<double>(p)});
  }
  return out;
}

std::vector<PrPoint> pr_curve(std::span<const ScoredItem> items) {
  std::int64_t p = 0, n = 0;
  const auto steps = sweep(items, p, n);
  std::vector<PrPoint> out;
  for (const auto& s : steps) {
    if (s.tp + s.fp == 0) continue;
    out.push_back({s.threshold, static_cast<double>(s.tp) / static_cast<double>(p),
                   static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp)});
  }
  return out;
}

double auc(std::span<const RocPoint> roc) {
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) / 2.0;
  }
  return area;
}

double full_precision_threshold(std::span<const ScoredItem> items) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& i : items) {
    if (!i.positive) lowest = std::min(lowest, i.score);
  }
  return lowest;
}

double full_precision_operating_threshold(std::span<const ScoredItem> items) {
  if (items.empty()) throw Error(ErrorKind::invalid_value, "operating threshold needs items");
  const double limit = full_precision_threshold(items);
  std::optional<double> highest;
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& i : items) {
    lowest = std::min(lowest, i.score);
    if (i.positive && i.score < limit) highest = std::max(highest.value_or(i.score), i.score);
  }
  if (!highest) return lowest;
  return std::nextafter(*highest, std::numeric_limits<double>::infinity());
}

double recall_at_full_precision(std::span<const ScoredItem> items) {
  const double t = full_precision_threshold(items);
  std::int64_t p = 0, accepted = 0;
  for (const auto& i : items) {
    if (!i.positive) continue;
    ++p;
    if (i.score < t) ++accepted;
  }
  if (p == 0) throw Error(ErrorKind::invalid_value, "recall needs at least one positive item");
  return static_cast<double>(accepted) / static_cast<double>(p);
}

std::optional<double> precision_at_recall(std::span<const ScoredItem> items, double recall) {
  std::optional<double> best;
  for (const auto& pt : pr_curve(items)) {
    if (pt.recall + 1e-12 >= recall) best = std::max(best.value_or(0.0), pt.precision);
  }
  return best;
}

}  // namespace gestauth::eval
