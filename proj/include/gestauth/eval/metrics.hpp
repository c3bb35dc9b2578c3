#pragma once

#include <cstdint>
#include <optional>

namespace gestauth::eval {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

// nullopt marks a metric whose denominator is zero.
struct Metrics {
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> precision;
  std::optional<double> recall;  // identical to tpr
};

Metrics metrics(const ConfusionCounts& counts);

}  // namespace gestauth::eval
