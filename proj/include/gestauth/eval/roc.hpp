#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gestauth/eval/metrics.hpp"

namespace gestauth::eval {

// A verification score (lower means more owner-like) with ground truth.
// An item is accepted at threshold t iff score < t.
struct ScoredItem {
  double score = 1.0;
  bool positive = false;  // true for the legitimate owner
};

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct PrPoint {
  double threshold = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

ConfusionCounts counts_at(std::span<const ScoredItem> items, double threshold);

/// Sweeps thresholds over every distinct score plus one sentinel above the
/// maximum. Points are sorted by threshold and run from (0,0) to (1,1).
std::vector<RocPoint> roc_curve(std::span<const ScoredItem> items);

/// Same sweep; thresholds accepting nothing (precision undefined) are skipped.
std::vector<PrPoint> pr_curve(std::span<const ScoredItem> items);

/// Trapezoidal area under a ROC point set.
double auc(std::span<const RocPoint> roc);

/// Largest recall over thresholds that accept no negative.
double recall_at_full_precision(std::span<const ScoredItem> items);

/// Upper end of the full-precision region: the lowest negative score (every
/// threshold up to it accepts no negative).
double full_precision_threshold(std::span<const ScoredItem> items);

/// Tightest threshold that still reaches recall_at_full_precision: just above
/// the highest positive score below full_precision_threshold, or the lowest
/// score of all when no positive is below it.
double full_precision_operating_threshold(std::span<const ScoredItem> items);

/// Best precision among thresholds reaching at least `recall`.
std::optional<double> precision_at_recall(std::span<const ScoredItem> items, double recall);

}  // namespace gestauth::eval
